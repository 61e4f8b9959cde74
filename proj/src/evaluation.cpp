#include "seayaw/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "seayaw/angles.hpp"
#include "seayaw/errors.hpp"

namespace seayaw {

EvalRecord make_eval_record(int frame, int track_id, Method method, double predicted,
                            double truth) {
  return {frame, track_id, method, predicted, truth, geodesic_distance(predicted, truth)};
}

double acc_at(std::span<const EvalRecord> records, double threshold_deg) {
  if (records.empty()) throw EmptyInput("acc_at: no records");
  std::size_t hits = 0;
  for (const auto& r : records) {
    if (rad_to_deg(r.error) <= threshold_deg) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(records.size());
}

double median_error(std::span<const EvalRecord> records) {
  if (records.empty()) throw EmptyInput("median_error: no records");
  std::vector<double> e(records.size());
  std::transform(records.begin(), records.end(), e.begin(),
                 [](const EvalRecord& r) { return rad_to_deg(r.error); });
  const std::size_t mid = e.size() / 2;
  std::nth_element(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(mid), e.end());
  const double upper = e[mid];
  if (e.size() % 2 == 1) return upper;
  const double lower = *std::max_element(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

std::vector<std::pair<std::size_t, std::size_t>> match_predictions(
    std::span<const Prediction> predictions, std::span<const GroundTruth> truth,
    double match_iou) {
  const bool boxes =
      std::all_of(predictions.begin(), predictions.end(), [](auto& p) { return p.bbox.has_value(); }) &&
      std::all_of(truth.begin(), truth.end(), [](auto& g) { return g.bbox.has_value(); });

  std::map<int, std::vector<std::size_t>> pred_by_frame;
  std::map<int, std::vector<std::size_t>> truth_by_frame;
  for (std::size_t i = 0; i < predictions.size(); ++i) pred_by_frame[predictions[i].frame].push_back(i);
  for (std::size_t i = 0; i < truth.size(); ++i) truth_by_frame[truth[i].frame].push_back(i);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [frame, preds] : pred_by_frame) {
    const auto it = truth_by_frame.find(frame);
    if (it == truth_by_frame.end()) continue;
    const auto& gts = it->second;
    if (boxes) {
      std::vector<double> m(gts.size() * preds.size());
      std::vector<int> ids(gts.size());
      for (std::size_t g = 0; g < gts.size(); ++g) {
        ids[g] = truth[gts[g]].id;
        for (std::size_t p = 0; p < preds.size(); ++p) {
          m[g * preds.size() + p] = iou(*truth[gts[g]].bbox, *predictions[preds[p]].bbox);
        }
      }
      const Association a = greedy_match(m, ids, preds.size(), match_iou);
      for (const auto& [g, p] : a.matches) pairs.emplace_back(preds[p], gts[g]);
    } else {
      std::map<int, std::size_t> by_id;
      for (std::size_t g : gts) by_id.emplace(truth[g].id, g);
      for (std::size_t p : preds) {
        const auto hit = by_id.find(predictions[p].id);
        if (hit != by_id.end()) pairs.emplace_back(p, hit->second);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

Comparison compare(std::span<const Prediction> predictions, std::span<const GroundTruth> truth,
                   std::span<const Method> methods, const CompareOptions& options) {
  std::set<int> pred_frames;
  for (const auto& p : predictions) pred_frames.insert(p.frame);
  const bool overlap = std::any_of(truth.begin(), truth.end(),
                                   [&](const GroundTruth& g) { return pred_frames.count(g.frame) > 0; });
  if (!overlap) throw EmptyInput("predictions and ground truth share no frame");

  const auto pairs = match_predictions(predictions, truth, options.match_iou);
  if (pairs.empty()) throw EmptyInput("no prediction matched any ground-truth record");

  Comparison out;
  out.matched = pairs.size();
  out.unmatched_truth = truth.size() - pairs.size();
  out.threshold_deg = options.threshold_deg;
  for (Method m : methods) {
    MethodRow row;
    row.method = m;
    std::vector<EvalRecord> recs;
    recs.reserve(pairs.size());
    for (const auto& [pi, gi] : pairs) {
      const Prediction& p = predictions[pi];
      const GroundTruth& g = truth[gi];
      double gt_deg = g.yaw_rel_deg;
      std::optional<double> pred_deg = p.yaw_rel_deg[m];
      if (options.absolute_camera_heading) {
        if (!g.heading_abs_deg) throw DomainError("absolute scoring needs heading_abs_deg in ground truth");
        gt_deg = *g.heading_abs_deg;
        if (pred_deg) pred_deg = wrap_degrees(*options.absolute_camera_heading + 180.0 + *pred_deg);
      }
      const double gt = deg_to_rad(gt_deg);
      if (pred_deg) {
        recs.push_back(make_eval_record(p.frame, p.id, m, deg_to_rad(*pred_deg), gt));
        continue;
      }
      ++row.undefined;
      if (options.policy == UndefinedPolicy::penalty) {
        recs.push_back({p.frame, p.id, m, wrap_two_pi(gt + kPi), gt, kPi});
      }
    }
    row.evaluated = recs.size();
    if (!recs.empty()) {
      row.acc = acc_at(recs, options.threshold_deg);
      row.median_error_deg = median_error(recs);
    }
    out.rows.push_back(row);
    out.records.push_back(std::move(recs));
  }
  return out;
}

std::string format_table(const Comparison& c) {
  std::string s;
  char buf[160];
  char acc[32];
  std::snprintf(acc, sizeof acc, "Acc@%g", c.threshold_deg);
  std::snprintf(buf, sizeof buf, "%-12s %8s %8s %9s %9s\n", "method", acc, "ME", "n", "undef");
  s += buf;
  for (const auto& r : c.rows) {
    std::snprintf(buf, sizeof buf, "%-12s %8.1f %8.1f %9zu %9zu\n",
                  std::string(method_name(r.method)).c_str(), r.acc, r.median_error_deg,
                  r.evaluated, r.undefined);
    s += buf;
  }
  std::snprintf(buf, sizeof buf, "matched %zu, unmatched ground truth %zu (excluded)\n", c.matched,
                c.unmatched_truth);
  s += buf;
  return s;
}

std::string format_csv(const Comparison& c) {
  std::string s = "method,acc,median_error_deg,evaluated,undefined\n";
  char buf[160];
  for (const auto& r : c.rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%zu,%zu\n", std::string(method_name(r.method)).c_str(),
                  r.acc, r.median_error_deg, r.evaluated, r.undefined);
    s += buf;
  }
  return s;
}

}  // namespace seayaw

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "seayaw/angles.hpp"
#include "seayaw/errors.hpp"
#include "seayaw/evaluation.hpp"

using namespace seayaw;

namespace {

std::vector<EvalRecord> with_errors_deg(std::initializer_list<double> errs) {
  std::vector<EvalRecord> out;
  for (double e : errs) out.push_back(make_eval_record(0, 0, Method::single, deg_to_rad(e), 0.0));
  return out;
}

Prediction prediction(int frame, int id, std::optional<double> all) {
  Prediction p;
  p.frame = frame;
  p.id = id;
  for (Method m : kAllMethods) p.yaw_rel_deg[m] = all;
  return p;
}

}  // namespace

TEST_CASE("acc_at examples") {
  CHECK(acc_at(with_errors_deg({0, 0, 0})) == 100.0);
  CHECK(acc_at(with_errors_deg({10, 20, 40, 50})) == 50.0);
  CHECK(acc_at(with_errors_deg({10, 179, 180, 90}), 180.0) == 100.0);
  CHECK(acc_at(with_errors_deg({30}), 30.0) == 100.0);
  CHECK_THROWS_AS(acc_at(std::vector<EvalRecord>{}), EmptyInput);
}

TEST_CASE("median_error examples") {
  CHECK(median_error(with_errors_deg({10})) == doctest::Approx(10.0));
  CHECK(median_error(with_errors_deg({10, 20, 30})) == doctest::Approx(20.0));
  CHECK(median_error(with_errors_deg({10, 20, 30, 100})) == doctest::Approx(25.0));
  CHECK(median_error(with_errors_deg({100, 30, 10, 20})) == doctest::Approx(25.0));
  CHECK_THROWS_AS(median_error(std::vector<EvalRecord>{}), EmptyInput);
}

TEST_CASE("records carry the geodesic error") {
  const auto r = make_eval_record(3, 4, Method::dist_mean, deg_to_rad(350), deg_to_rad(10));
  CHECK(rad_to_deg(r.error) == doctest::Approx(20.0));
  CHECK(r.frame == 3);
  CHECK(r.track_id == 4);
}

TEST_CASE("metrics agree with a full-sort reference") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10000 + static_cast<std::size_t>(trial % 2);
    std::vector<EvalRecord> recs;
    std::vector<double> errs;
    for (std::size_t i = 0; i < n; ++i) {
      recs.push_back(make_eval_record(0, 0, Method::single, ang(rng), ang(rng)));
      errs.push_back(rad_to_deg(recs.back().error));
    }
    CHECK(acc_at(recs, 30.0) == oracle::accuracy(errs, 30.0));
    CHECK(median_error(recs) == oracle::median(errs));
  }
}

TEST_CASE("accuracy grows with the threshold") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::vector<EvalRecord> recs;
  for (int i = 0; i < 2000; ++i) recs.push_back(make_eval_record(0, 0, Method::single, ang(rng), ang(rng)));
  double prev = 0.0;
  for (double thr = 0.0; thr <= 180.0; thr += 0.5) {
    const double a = acc_at(recs, thr);
    CHECK(a >= prev);
    prev = a;
  }
  CHECK(prev == 100.0);
}

TEST_CASE("median is order independent and rotation invariant") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 501 + trial; ++i) pairs.emplace_back(ang(rng), ang(rng));
    auto build = [&](double shift) {
      std::vector<EvalRecord> r;
      for (auto [p, g] : pairs) {
        r.push_back(make_eval_record(0, 0, Method::single, wrap_two_pi(p + shift), wrap_two_pi(g + shift)));
      }
      return r;
    };
    auto base = build(0.0);
    const double me = median_error(base);
    const double acc = acc_at(base);
    std::shuffle(base.begin(), base.end(), rng);
    CHECK(median_error(base) == me);
    const auto rotated = build(ang(rng));
    CHECK(median_error(rotated) == doctest::Approx(me).epsilon(1e-9));
    CHECK(acc_at(rotated) == doctest::Approx(acc));
  }
}

TEST_CASE("compare scores a perfect predictor") {
  std::vector<GroundTruth> gt;
  std::vector<Prediction> pred;
  for (int f = 0; f < 10; ++f) {
    for (int id = 0; id < 3; ++id) {
      const double yaw = 37.0 * f + 11.0 * id;
      gt.push_back({f, id, std::fmod(yaw, 360.0), std::nullopt, std::nullopt});
      pred.push_back(prediction(f, id, std::fmod(yaw, 360.0)));
    }
  }
  const auto c = compare(pred, gt, kAllMethods);
  REQUIRE(c.rows.size() == 4);
  for (const auto& r : c.rows) {
    CHECK(r.acc == 100.0);
    CHECK(r.median_error_deg == doctest::Approx(0.0));
    CHECK(r.evaluated == 30);
  }
  CHECK(c.matched == 30);
  CHECK(format_table(c).find("Acc@30") != std::string::npos);
  CHECK(format_csv(c).rfind("method,acc,median_error_deg", 0) == 0);
}

TEST_CASE("undefined predictions under both policies") {
  std::vector<GroundTruth> gt;
  std::vector<Prediction> pred;
  for (int f = 0; f < 4; ++f) {
    gt.push_back({f, 0, 90.0, std::nullopt, std::nullopt});
    auto p = prediction(f, 0, 90.0);
    if (f < 3) p.yaw_rel_deg[Method::trajectory] = std::nullopt;
    pred.push_back(p);
  }
  const std::vector<Method> traj{Method::trajectory};
  auto c = compare(pred, gt, traj);
  CHECK(c.rows[0].acc == 25.0);
  CHECK(c.rows[0].median_error_deg == doctest::Approx(180.0));
  CHECK(c.rows[0].undefined == 3);
  CHECK(c.rows[0].evaluated == 4);
  CompareOptions skip;
  skip.policy = UndefinedPolicy::skip;
  c = compare(pred, gt, traj, skip);
  CHECK(c.rows[0].acc == 100.0);
  CHECK(c.rows[0].evaluated == 1);
}

TEST_CASE("unmatched ground truth is excluded from every row") {
  std::vector<GroundTruth> gt{{0, 0, 10.0, {}, {}}, {0, 1, 20.0, {}, {}}, {1, 0, 30.0, {}, {}}};
  std::vector<Prediction> pred{prediction(0, 0, 10.0), prediction(1, 0, 30.0)};
  const auto c = compare(pred, gt, kAllMethods);
  CHECK(c.matched == 2);
  CHECK(c.unmatched_truth == 1);
  for (const auto& r : c.rows) CHECK(r.evaluated == 2);
}

TEST_CASE("boxes take precedence over ids for matching") {
  std::vector<GroundTruth> gt{{0, 7, 10.0, BBox{0, 0, 10, 10}, {}}, {0, 8, 200.0, BBox{50, 50, 10, 10}, {}}};
  auto a = prediction(0, 0, 200.0);
  a.bbox = BBox{51, 50, 10, 10};
  auto b = prediction(0, 1, 10.0);
  b.bbox = BBox{0, 1, 10, 10};
  std::vector<Prediction> pred{a, b};
  const auto pairs = match_predictions(pred, gt, 0.5);
  REQUIRE(pairs.size() == 2);
  const auto c = compare(pred, gt, kAllMethods);
  CHECK(c.rows[0].acc == 100.0);
  a.bbox = BBox{300, 300, 10, 10};
  pred = {a, b};
  CHECK(compare(pred, gt, kAllMethods).matched == 1);
}

TEST_CASE("absolute scoring uses the camera heading") {
  std::vector<GroundTruth> gt{{0, 0, 280.0, std::nullopt, 270.0}};
  std::vector<Prediction> pred{prediction(0, 0, 280.0)};
  CompareOptions opt;
  opt.absolute_camera_heading = 170.0;
  CHECK(compare(pred, gt, kAllMethods, opt).rows[0].acc == 100.0);
  gt[0].heading_abs_deg.reset();
  CHECK_THROWS_AS(compare(pred, gt, kAllMethods, opt), DomainError);
}

TEST_CASE("disjoint frames are an explicit error") {
  std::vector<GroundTruth> gt{{5, 0, 10.0, {}, {}}};
  std::vector<Prediction> pred{prediction(0, 0, 10.0)};
  CHECK_THROWS_AS(compare(pred, gt, kAllMethods), EmptyInput);
  pred = {prediction(5, 3, 10.0)};
  CHECK_THROWS_AS(compare(pred, gt, kAllMethods), EmptyInput);
}

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seayaw/method.hpp"
#include "seayaw/tracking.hpp"

namespace seayaw {

/// One scored prediction. Angles in radians.
struct EvalRecord {
  int frame = 0;
  int track_id = 0;
  Method method = Method::single;
  double predicted = 0.0;
  double truth = 0.0;
  double error = 0.0;  ///< geodesic distance, in [0, π]
};

EvalRecord make_eval_record(int frame, int track_id, Method method, double predicted,
                            double truth);

/// Percentage of records whose error, in degrees, is at most threshold_deg.
/// Throws EmptyInput on no records.
double acc_at(std::span<const EvalRecord> records, double threshold_deg = 30.0);

/// Median error in degrees; even counts average the two central values.
/// Throws EmptyInput on no records.
double median_error(std::span<const EvalRecord> records);

/// Scoring of predictions a method could not make.
enum class UndefinedPolicy {
  penalty,  ///< count as an error of π
  skip,     ///< leave out of that method's row
};

struct GroundTruth {
  int frame = 0;
  int id = 0;
  double yaw_rel_deg = 0.0;
  std::optional<BBox> bbox;
  std::optional<double> heading_abs_deg;
};

struct Prediction {
  int frame = 0;
  int id = 0;
  std::optional<BBox> bbox;
  MethodEstimates yaw_rel_deg;
};

struct CompareOptions {
  UndefinedPolicy policy = UndefinedPolicy::penalty;
  double threshold_deg = 30.0;
  double match_iou = 0.5;
  /// When set, relative predictions are turned into absolute headings with
  /// this camera heading and scored against GroundTruth::heading_abs_deg.
  std::optional<double> absolute_camera_heading;
};

struct MethodRow {
  Method method = Method::single;
  double acc = 0.0;
  double median_error_deg = 0.0;
  std::size_t evaluated = 0;
  std::size_t undefined = 0;
};

struct Comparison {
  std::vector<MethodRow> rows;
  std::size_t matched = 0;          ///< prediction/ground-truth pairs
  std::size_t unmatched_truth = 0;  ///< ground truth without a detection, excluded
  double threshold_deg = 30.0;
  std::vector<std::vector<EvalRecord>> records;  ///< parallel to rows
};

/// Pairs predictions with ground truth. When every record on both sides has
/// a box, pairs are formed per frame by greedy IoU (≥ match_iou); otherwise by
/// (frame, id). Returns (prediction index, truth index) pairs.
std::vector<std::pair<std::size_t, std::size_t>> match_predictions(
    std::span<const Prediction> predictions, std::span<const GroundTruth> truth,
    double match_iou);

/// Scores every method on the same matched pairs. Throws EmptyInput when the
/// streams share no frame or nothing matches, DomainError when absolute
/// scoring lacks ground-truth headings.
Comparison compare(std::span<const Prediction> predictions, std::span<const GroundTruth> truth,
                   std::span<const Method> methods, const CompareOptions& options = {});

std::string format_table(const Comparison& c);
std::string format_csv(const Comparison& c);

}  // namespace seayaw

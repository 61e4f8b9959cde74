#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seayaw/evaluation.hpp"
#include "seayaw/geometry.hpp"
#include "seayaw/synthetic.hpp"
#include "seayaw/tracking.hpp"

namespace seayaw::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Every external schema carries angles in degrees; conversion to radians
// happens on the way in.

/// { "lat", "lon", "alt_m", "heading_deg", "pitch_deg", "roll_deg", "f_px",
///   "cx", "cy", "width", "height" }. Throws ConfigError.
CameraPose camera_from_json(const json& j);
ordered_json camera_to_json(const CameraPose& c);
CameraPose read_camera_file(const std::filesystem::path& path);

/// { "n_cells": int, "probs": [...] } or { "n_cells": int, "logits": [...] }.
/// Throws DomainError on a malformed payload.
PoseDistribution distribution_from_json(const json& j);

struct DetectionFrame {
  int frame = 0;
  std::vector<Detection> detections;
};

/// Reads a detection JSONL stream, grouped by ascending frame (stable within
/// a frame). Blank lines are skipped. Throws SchemaError with the line number.
std::vector<DetectionFrame> read_detections(std::istream& in);

void write_detection(std::ostream& out, const Detection& d, std::span<const double> logits);

ordered_json track_output_to_json(const TrackOutput& o);
/// Parses a fused record. When `as_method` is set, yaw_rel_deg supplies that
/// method; otherwise the embedded "methods" object supplies all of them.
Prediction prediction_from_json(const json& j, std::optional<Method> as_method = std::nullopt);
std::vector<Prediction> read_predictions(std::istream& in,
                                         std::optional<Method> as_method = std::nullopt);

ordered_json ground_truth_to_json(int frame, const BoatTruth& b);
GroundTruth ground_truth_from_json(const json& j);
std::vector<GroundTruth> read_ground_truth(std::istream& in);

/// Scenario file: seed, n_frames, n_cells, boat_length_m, camera, noise,
/// boats and/or fleet. Unknown keys are rejected. Throws ConfigError.
Scenario scenario_from_json(const json& j);

/// Settings shared by the CLI subcommands.
struct RunConfig {
  std::optional<int> grid_cells;
  FusionParams fusion;
  TrackerParams tracker;
  double min_speed = TrajectoryWindow::kDefaultMinSpeed;
  int mode_mean_window = 3;
  UndefinedPolicy undefined_policy = UndefinedPolicy::penalty;
  double acc_threshold_deg = 30.0;
  double earth_radius = kMeanEarthRadius;
  std::optional<std::uint64_t> seed;
  Method method = Method::dist_mean;
  std::vector<Method> eval_methods{kAllMethods.begin(), kAllMethods.end()};

  struct Paths {
    std::optional<std::filesystem::path> scenario, out_dir, detections, camera, ground_truth,
        fused, output;
  } paths;

  PipelineConfig pipeline() const;
  void validate() const;
};

/// Unknown keys are rejected. Throws ConfigError.
RunConfig config_from_json(const json& j);
RunConfig read_config_file(const std::filesystem::path& path);

FusionMode parse_fusion_mode(const std::string& s);
FlipPolicy parse_flip_policy(const std::string& s);
UndefinedPolicy parse_undefined_policy(const std::string& s);
std::vector<Method> parse_method_list(const std::string& csv);

struct GeoJsonExport {
  ordered_json collection;
  std::size_t features = 0;
  std::size_t skipped = 0;
};

/// One Point feature per fused record, coordinates [lon, lat]. Records
/// without geolocation are located from their box when a camera is given and
/// skipped otherwise.
GeoJsonExport export_geojson(std::istream& fused, const std::optional<CameraPose>& camera,
                             double earth_radius = kMeanEarthRadius);

}  // namespace seayaw::io

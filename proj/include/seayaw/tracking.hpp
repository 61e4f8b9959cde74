#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seayaw/geometry.hpp"
#include "seayaw/method.hpp"
#include "seayaw/pose_distribution.hpp"
#include "seayaw/temporal_fusion.hpp"
#include "seayaw/trajectory_baseline.hpp"

namespace seayaw {

/// Axis-aligned box in pixels: top-left corner plus size.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  Pixel center() const { return {x + w / 2.0, y + h / 2.0}; }
  Pixel bottom_center() const { return {x + w / 2.0, y + h}; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

double iou(const BBox& a, const BBox& b);

struct Detection {
  int frame = 0;
  BBox bbox;
  double score = 1.0;
  std::optional<PoseDistribution> orientation;
};

struct Track {
  int id = 0;
  std::optional<FusionState> fusion;
  BBox last_bbox;
  int last_frame = 0;
  int misses = 0;
  std::deque<double> recent_modes;                   ///< single-frame modes, radians
  std::deque<TrajectorySample> recent_positions;     ///< centre-anchored, east/north
  std::vector<std::pair<int, GeoPoint>> trajectory;  ///< bottom-centre geolocation
};

struct Association {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  ///< (track index, detection index)
  std::vector<std::size_t> unmatched_detections;
  std::vector<std::size_t> unmatched_tracks;
};

/// Greedy matching on a row-major tracks × detections IoU matrix: pairs are
/// taken in descending IoU, ties broken by lower track id then lower
/// detection index; pairs below the threshold never match.
Association greedy_match(std::span<const double> iou_matrix, std::span<const int> track_ids,
                         std::size_t n_detections, double iou_threshold);

Association associate(std::span<const Track> tracks, std::span<const Detection> detections,
                      double iou_threshold);

struct TrackerParams {
  double iou_threshold = 0.3;
  int max_age = 30;  ///< consecutive unmatched frames before a track is closed
};

struct PipelineConfig {
  FusionParams fusion;
  TrackerParams tracker;
  double min_speed = TrajectoryWindow::kDefaultMinSpeed;
  int mode_mean_window = 3;
  double earth_radius = kMeanEarthRadius;
  Method output_method = Method::dist_mean;
  std::optional<int> expected_cells;  ///< reject streams on any other grid

  void validate() const;
};

/// Per-track result for one frame. Angles in degrees.
struct TrackOutput {
  int frame = 0;
  int id = 0;
  BBox bbox;
  std::optional<double> yaw_rel_deg;
  std::optional<double> heading_abs_deg;
  std::optional<GeoPoint> geo;
  std::optional<double> entropy;
  bool flip_flagged = false;
  MethodEstimates methods;
};

/// Detect → track → fuse loop. Frames must be fed in increasing order.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config, std::optional<CameraPose> camera = std::nullopt);

  /// Advances all tracks by one frame and returns one output per track that
  /// was matched or created in it, ordered by track id. Throws GridMismatch
  /// when a payload grid differs from the stream's first grid.
  std::vector<TrackOutput> step_frame(int frame, std::span<const Detection> detections);

  const std::vector<Track>& active_tracks() const noexcept { return tracks_; }
  int tracks_created() const noexcept { return next_id_; }
  int tracks_closed() const noexcept { return closed_; }

 private:
  TrackOutput update_track(Track& track, const Detection& det);

  PipelineConfig config_;
  std::optional<CameraPose> camera_;
  std::optional<OrientationGrid> stream_grid_;
  std::vector<Track> tracks_;
  int next_id_ = 0;
  int closed_ = 0;
  std::optional<int> last_frame_;
};

}  // namespace seayaw

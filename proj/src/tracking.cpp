#include "seayaw/tracking.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "seayaw/errors.hpp"

namespace seayaw {

double iou(const BBox& a, const BBox& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Association greedy_match(std::span<const double> iou_matrix, std::span<const int> track_ids,
                         std::size_t n_detections, double iou_threshold) {
  const std::size_t n_tracks = track_ids.size();
  if (iou_matrix.size() != n_tracks * n_detections) {
    throw DomainError("greedy_match: IoU matrix has the wrong shape");
  }
  struct Candidate {
    double overlap;
    int track_id;
    std::size_t track;
    std::size_t det;
  };
  std::vector<Candidate> cands;
  for (std::size_t t = 0; t < n_tracks; ++t) {
    for (std::size_t d = 0; d < n_detections; ++d) {
      const double v = iou_matrix[t * n_detections + d];
      if (v >= iou_threshold && v > 0.0) cands.push_back({v, track_ids[t], t, d});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.overlap, a.track_id, a.det) < std::tie(a.overlap, b.track_id, b.det);
  });

  Association out;
  std::vector<bool> track_used(n_tracks, false);
  std::vector<bool> det_used(n_detections, false);
  for (const auto& c : cands) {
    if (track_used[c.track] || det_used[c.det]) continue;
    track_used[c.track] = true;
    det_used[c.det] = true;
    out.matches.emplace_back(c.track, c.det);
  }
  for (std::size_t d = 0; d < n_detections; ++d) {
    if (!det_used[d]) out.unmatched_detections.push_back(d);
  }
  for (std::size_t t = 0; t < n_tracks; ++t) {
    if (!track_used[t]) out.unmatched_tracks.push_back(t);
  }
  return out;
}

Association associate(std::span<const Track> tracks, std::span<const Detection> detections,
                      double iou_threshold) {
  std::vector<double> m(tracks.size() * detections.size());
  std::vector<int> ids(tracks.size());
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    ids[t] = tracks[t].id;
    for (std::size_t d = 0; d < detections.size(); ++d) {
      m[t * detections.size() + d] = iou(tracks[t].last_bbox, detections[d].bbox);
    }
  }
  return greedy_match(m, ids, detections.size(), iou_threshold);
}

void PipelineConfig::validate() const {
  fusion.validate();
  if (!(tracker.iou_threshold > 0.0 && tracker.iou_threshold <= 1.0)) {
    throw DomainError("tracker: iou_threshold must lie in (0, 1]");
  }
  if (tracker.max_age < 1) throw DomainError("tracker: max_age must be positive");
  if (!(min_speed >= 0.0)) throw DomainError("trajectory: min_speed must be non-negative");
  if (mode_mean_window < 1) throw DomainError("mode_mean_window must be positive");
  if (!(earth_radius > 0.0)) throw DomainError("earth radius must be positive");
}

Pipeline::Pipeline(PipelineConfig config, std::optional<CameraPose> camera)
    : config_(std::move(config)), camera_(std::move(camera)) {
  config_.validate();
  if (camera_) camera_->validate();
}

std::vector<TrackOutput> Pipeline::step_frame(int frame, std::span<const Detection> detections) {
  if (last_frame_ && frame <= *last_frame_) {
    throw DomainError("frames must be strictly increasing: " + std::to_string(frame) +
                      " after " + std::to_string(*last_frame_));
  }
  for (const auto& d : detections) {
    if (!d.orientation) continue;
    const OrientationGrid& g = d.orientation->grid();
    if (config_.expected_cells && g.n_cells() != *config_.expected_cells) {
      throw GridMismatch("detection grid has " + std::to_string(g.n_cells()) +
                         " cells, configuration expects " +
                         std::to_string(*config_.expected_cells));
    }
    if (stream_grid_ && !(*stream_grid_ == g)) {
      throw GridMismatch("mixed grids in one stream: " + std::to_string(g.n_cells()) +
                         " vs " + std::to_string(stream_grid_->n_cells()) + " cells");
    }
    stream_grid_ = g;
  }
  last_frame_ = frame;

  const int max_age = config_.tracker.max_age;
  const auto stale = [&](const Track& t) { return frame - t.last_frame - 1 >= max_age; };
  closed_ += static_cast<int>(std::count_if(tracks_.begin(), tracks_.end(), stale));
  std::erase_if(tracks_, stale);

  const Association assoc = associate(tracks_, detections, config_.tracker.iou_threshold);
  std::vector<TrackOutput> outputs;
  outputs.reserve(detections.size());
  for (const auto& [ti, di] : assoc.matches) {
    outputs.push_back(update_track(tracks_[ti], detections[di]));
  }
  for (std::size_t ti : assoc.unmatched_tracks) {
    tracks_[ti].misses = frame - tracks_[ti].last_frame;
  }
  for (std::size_t di : assoc.unmatched_detections) {
    Track t;
    t.id = next_id_++;
    outputs.push_back(update_track(t, detections[di]));
    tracks_.push_back(std::move(t));
  }
  const auto expired = [&](const Track& t) { return t.misses >= max_age; };
  closed_ += static_cast<int>(std::count_if(tracks_.begin(), tracks_.end(), expired));
  std::erase_if(tracks_, expired);

  std::sort(outputs.begin(), outputs.end(),
            [](const TrackOutput& a, const TrackOutput& b) { return a.id < b.id; });
  return outputs;
}

TrackOutput Pipeline::update_track(Track& track, const Detection& det) {
  TrackOutput out;
  out.frame = det.frame;
  out.id = track.id;
  out.bbox = det.bbox;
  track.last_bbox = det.bbox;
  track.last_frame = det.frame;
  track.misses = 0;

  if (det.orientation) {
    const PoseDistribution& obs = *det.orientation;
    const double single = mode(obs).yaw;
    track.recent_modes.push_back(single);
    while (track.recent_modes.size() > static_cast<std::size_t>(config_.mode_mean_window)) {
      track.recent_modes.pop_front();
    }
    double mode_mean = single;
    try {
      const std::vector<double> modes(track.recent_modes.begin(), track.recent_modes.end());
      mode_mean = mode_running_mean(modes, config_.mode_mean_window);
    } catch (const UndefinedMean&) {
      // antipodal window: fall back to the newest mode
    }
    if (!track.fusion) {
      track.fusion = FusionState::init(obs, config_.fusion);
    } else {
      out.flip_flagged = track.fusion->advance(obs, config_.fusion).flagged;
    }
    const PoseDistribution& fused = track.fusion->fused();
    out.entropy = entropy(fused);
    out.methods[Method::single] = rad_to_deg(single);
    out.methods[Method::mode_mean] = rad_to_deg(mode_mean);
    out.methods[Method::dist_mean] = rad_to_deg(mode(fused).yaw);
  }

  if (camera_) {
    const CameraPose& cam = *camera_;
    try {
      const GeoPoint g = geolocate(cam, det.bbox.bottom_center(), config_.earth_radius);
      out.geo = g;
      track.trajectory.emplace_back(det.frame, g);
    } catch (const NoIntersection&) {
    }
    try {
      const GroundPoint w = camera_to_world(cam, pixel_to_ground(cam, det.bbox.center()));
      track.recent_positions.push_back({det.frame, w.x, w.y});
      while (track.recent_positions.size() > 3) track.recent_positions.pop_front();
      TrajectoryWindow window{{track.recent_positions.begin(), track.recent_positions.end()},
                              config_.min_speed};
      const double heading = heading_from_trajectory(window);
      out.methods[Method::trajectory] = absolute_to_relative_heading(cam.heading, heading);
    } catch (const NoIntersection&) {
    } catch (const UndefinedHeading&) {
    } catch (const InsufficientHistory&) {
    }
  }

  out.yaw_rel_deg = out.methods[config_.output_method];
  if (camera_ && out.yaw_rel_deg) {
    out.heading_abs_deg = relative_to_absolute_heading(camera_->heading, *out.yaw_rel_deg);
  }
  return out;
}

}  // namespace seayaw

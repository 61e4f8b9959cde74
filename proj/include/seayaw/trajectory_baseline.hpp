#pragma once

#include <vector>

namespace seayaw {

/// Position of a track in local east/north metres at one frame.
struct TrajectorySample {
  int frame = 0;
  double east = 0.0;
  double north = 0.0;
};

struct TrajectoryWindow {
  static constexpr double kDefaultMinSpeed = 0.05;  ///< metres per frame

  std::vector<TrajectorySample> points;  ///< time ordered; the last three are used
  double min_speed = kDefaultMinSpeed;
};

/// Constant-velocity heading from the last three samples: the two per-frame
/// step velocities are averaged and returned as degrees clockwise from north
/// in [0, 360).
///
/// Throws InsufficientHistory with fewer than three samples, DomainError for
/// non-increasing frames and UndefinedHeading when the mean speed is below
/// min_speed.
double heading_from_trajectory(const TrajectoryWindow& w);

}  // namespace seayaw

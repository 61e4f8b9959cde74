#include "seayaw/trajectory_baseline.hpp"

#include <cmath>
#include <string>

#include "seayaw/angles.hpp"
#include "seayaw/errors.hpp"

namespace seayaw {

double heading_from_trajectory(const TrajectoryWindow& w) {
  if (w.points.size() < 3) {
    throw InsufficientHistory("trajectory baseline needs three samples, have " +
                              std::to_string(w.points.size()));
  }
  const auto& p0 = w.points[w.points.size() - 3];
  const auto& p1 = w.points[w.points.size() - 2];
  const auto& p2 = w.points[w.points.size() - 1];
  if (p1.frame <= p0.frame || p2.frame <= p1.frame) {
    throw DomainError("trajectory samples must have strictly increasing frames");
  }
  const double dt1 = p1.frame - p0.frame;
  const double dt2 = p2.frame - p1.frame;
  const double ve = 0.5 * ((p1.east - p0.east) / dt1 + (p2.east - p1.east) / dt2);
  const double vn = 0.5 * ((p1.north - p0.north) / dt1 + (p2.north - p1.north) / dt2);
  if (!(std::hypot(ve, vn) >= w.min_speed) || std::hypot(ve, vn) == 0.0) {
    throw UndefinedHeading("track is stationary: speed below " + std::to_string(w.min_speed) +
                           " m/frame");
  }
  return wrap_degrees(rad_to_deg(std::atan2(ve, vn)));
}

}  // namespace seayaw

#pragma once

#include <cmath>
#include <numbers>

namespace seayaw {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Reduces an angle to [0, 2π).
inline double wrap_two_pi(double rad) {
  double r = std::fmod(rad, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Reduces an angle in degrees to [0, 360).
inline double wrap_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;
  return r;
}

/// Signed difference a - b reduced to (-π, π].
inline double signed_difference(double a, double b) {
  double d = wrap_two_pi(a - b);
  return d > kPi ? d - kTwoPi : d;
}

}  // namespace seayaw

#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace seayaw {

/// Heading estimators compared by the evaluation.
enum class Method { single, mode_mean, dist_mean, trajectory };

inline constexpr std::array<Method, 4> kAllMethods = {Method::single, Method::mode_mean,
                                                      Method::dist_mean, Method::trajectory};

constexpr std::string_view method_name(Method m) {
  switch (m) {
    case Method::single: return "single";
    case Method::mode_mean: return "mode-mean";
    case Method::dist_mean: return "dist-mean";
    case Method::trajectory: return "trajectory";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

/// One optional relative-yaw estimate (degrees) per method.
struct MethodEstimates {
  std::array<std::optional<double>, 4> yaw_deg;

  std::optional<double>& operator[](Method m) { return yaw_deg[static_cast<std::size_t>(m)]; }
  const std::optional<double>& operator[](Method m) const {
    return yaw_deg[static_cast<std::size_t>(m)];
  }
};

}  // namespace seayaw

#include "seayaw/orientation_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seayaw/angles.hpp"
#include "seayaw/errors.hpp"

namespace seayaw {

OrientationGrid::OrientationGrid(int n_cells) : n_cells_(n_cells), cell_width_(0.0) {
  if (n_cells < kMinCells) {
    throw DomainError("orientation grid needs at least " + std::to_string(kMinCells) +
                      " cells, got " + std::to_string(n_cells));
  }
  cell_width_ = kTwoPi / n_cells;
}

double OrientationGrid::center(int i) const noexcept {
  return (i + 0.5) * kTwoPi / n_cells_;
}

std::vector<double> OrientationGrid::centers() const {
  std::vector<double> out(static_cast<std::size_t>(n_cells_));
  for (int i = 0; i < n_cells_; ++i) out[static_cast<std::size_t>(i)] = center(i);
  return out;
}

int OrientationGrid::nearest_cell(double yaw) const {
  if (!std::isfinite(yaw)) throw DomainError("nearest_cell: yaw must be finite");
  const double r = wrap_two_pi(yaw);
  const int idx = static_cast<int>(std::floor(r / cell_width_));
  return std::clamp(idx, 0, n_cells_ - 1);
}

OrientationGrid make_grid(int n_cells) { return OrientationGrid(n_cells); }

double geodesic_distance(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("geodesic_distance: angles must be finite");
  }
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

}  // namespace seayaw

#pragma once

#include <vector>

namespace seayaw {

/// Uniform partition of the yaw circle into equal-measure cells.
///
/// Cell i covers [i·w, (i+1)·w) with w = 2π / n_cells and is represented by
/// its midpoint, so 0 rad lies on the boundary between the last and the first
/// cell. Grids are immutable values.
class OrientationGrid {
 public:
  static constexpr int kDefaultCells = 72;
  static constexpr int kMinCells = 4;

  /// Throws DomainError for n_cells < 4.
  explicit OrientationGrid(int n_cells = kDefaultCells);

  int n_cells() const noexcept { return n_cells_; }
  double cell_width() const noexcept { return cell_width_; }

  /// Midpoint of cell i, (i + 0.5) · 2π / n_cells.
  double center(int i) const noexcept;
  std::vector<double> centers() const;

  /// Cell containing yaw (reduced mod 2π). A yaw on a cell boundary belongs
  /// to the cell that starts there. Throws DomainError for non-finite yaw.
  int nearest_cell(double yaw) const;

  friend bool operator==(const OrientationGrid& a, const OrientationGrid& b) noexcept {
    return a.n_cells_ == b.n_cells_;
  }

 private:
  int n_cells_;
  double cell_width_;
};

OrientationGrid make_grid(int n_cells);

/// Shortest arc between two angles, in [0, π].
double geodesic_distance(double a, double b);

}  // namespace seayaw

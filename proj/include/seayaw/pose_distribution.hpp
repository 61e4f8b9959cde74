#pragma once

#include <span>
#include <vector>

#include "seayaw/angles.hpp"
#include "seayaw/orientation_grid.hpp"

namespace seayaw {

/// Normalized probability vector over the cells of an OrientationGrid.
///
/// Instances are only produced through the factories below, so every value
/// is non-negative, sums to one and matches its grid's cell count.
class PoseDistribution {
 public:
  /// Softmax of per-cell scores. Throws DomainError on length mismatch or
  /// non-finite input.
  static PoseDistribution from_logits(const OrientationGrid& grid, std::span<const double> logits);

  /// Divides by the sum. Throws DomainError on negative / non-finite entries
  /// and DegenerateDistribution when every entry is zero.
  static PoseDistribution normalize(const OrientationGrid& grid, std::span<const double> weights);
  /// Same, on the grid implied by the vector length.
  static PoseDistribution normalize(std::span<const double> weights);

  static PoseDistribution uniform(const OrientationGrid& grid);
  static PoseDistribution one_hot(const OrientationGrid& grid, int cell);

  const OrientationGrid& grid() const noexcept { return grid_; }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](int i) const noexcept { return probs_[static_cast<std::size_t>(i)]; }
  int size() const noexcept { return grid_.n_cells(); }

  /// Mass of cell i moved to cell (i + cells) mod n.
  PoseDistribution rotated(int cells) const;

 private:
  PoseDistribution(OrientationGrid grid, std::vector<double> probs)
      : grid_(grid), probs_(std::move(probs)) {}

  OrientationGrid grid_;
  std::vector<double> probs_;
};

struct ModeEstimate {
  double yaw;  ///< refined angle in [0, 2π)
  double prob; ///< probability of the argmax cell
  int cell;    ///< raw argmax cell
};

/// Argmax cell refined by a parabola through the log-probabilities of the
/// cell and its two circular neighbours. The vertex is clamped to half a cell.
ModeEstimate mode(const PoseDistribution& d);

/// Weighted circular mean of angles in [0, 2π). Throws UndefinedMean when the
/// resultant length is at most 1e-9 (times the total weight).
double circular_mean(std::span<const double> angles, std::span<const double> weights);
double circular_mean(const PoseDistribution& d);

inline constexpr double kDefaultFlipWindow = deg_to_rad(15.0);

/// Probability mass within ±half_window of the antipode of the mode. Cells
/// contribute in proportion to their overlap with the window.
double flip_score(const PoseDistribution& d, double half_window = kDefaultFlipWindow);

/// Shannon entropy in nats.
double entropy(const PoseDistribution& d);

}  // namespace seayaw

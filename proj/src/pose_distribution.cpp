#include "seayaw/pose_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seayaw/errors.hpp"

namespace seayaw {
namespace {

void check_length(const OrientationGrid& grid, std::size_t n) {
  if (n != static_cast<std::size_t>(grid.n_cells())) {
    throw DomainError("distribution has " + std::to_string(n) + " entries, grid has " +
                      std::to_string(grid.n_cells()) + " cells");
  }
}

}  // namespace

PoseDistribution PoseDistribution::from_logits(const OrientationGrid& grid,
                                               std::span<const double> logits) {
  check_length(grid, logits.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (double l : logits) {
    if (!std::isfinite(l)) throw DomainError("from_logits: non-finite logit");
    peak = std::max(peak, l);
  }
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - peak);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return PoseDistribution(grid, std::move(p));
}

PoseDistribution PoseDistribution::normalize(const OrientationGrid& grid,
                                             std::span<const double> weights) {
  check_length(grid, weights.size());
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw DomainError("normalize: entries must be finite and non-negative");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw DegenerateDistribution("normalize: all entries are zero");
  std::vector<double> p(weights.begin(), weights.end());
  for (double& v : p) v /= sum;
  return PoseDistribution(grid, std::move(p));
}

PoseDistribution PoseDistribution::normalize(std::span<const double> weights) {
  return normalize(OrientationGrid(static_cast<int>(weights.size())), weights);
}

PoseDistribution PoseDistribution::uniform(const OrientationGrid& grid) {
  const auto n = static_cast<std::size_t>(grid.n_cells());
  return PoseDistribution(grid, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

PoseDistribution PoseDistribution::one_hot(const OrientationGrid& grid, int cell) {
  if (cell < 0 || cell >= grid.n_cells()) throw DomainError("one_hot: cell out of range");
  std::vector<double> p(static_cast<std::size_t>(grid.n_cells()), 0.0);
  p[static_cast<std::size_t>(cell)] = 1.0;
  return PoseDistribution(grid, std::move(p));
}

PoseDistribution PoseDistribution::rotated(int cells) const {
  const int n = grid_.n_cells();
  const int shift = ((cells % n) + n) % n;
  std::vector<double> p(probs_.size());
  for (int i = 0; i < n; ++i) {
    p[static_cast<std::size_t>((i + shift) % n)] = probs_[static_cast<std::size_t>(i)];
  }
  return PoseDistribution(grid_, std::move(p));
}

ModeEstimate mode(const PoseDistribution& d) {
  const auto p = d.probs();
  const int n = d.size();
  const auto best = std::max_element(p.begin(), p.end());  // first maximum wins ties
  const int j = static_cast<int>(best - p.begin());

  constexpr double kFloor = std::numeric_limits<double>::min();
  const double lm = std::log(std::max(p[static_cast<std::size_t>((j + n - 1) % n)], kFloor));
  const double l0 = std::log(std::max(p[static_cast<std::size_t>(j)], kFloor));
  const double lp = std::log(std::max(p[static_cast<std::size_t>((j + 1) % n)], kFloor));

  double offset = 0.0;
  const double curvature = lm - 2.0 * l0 + lp;
  if (curvature < 0.0) offset = std::clamp((lm - lp) / (2.0 * curvature), -0.5, 0.5);

  const OrientationGrid& g = d.grid();
  return {wrap_two_pi(g.center(j) + offset * g.cell_width()), *best, j};
}

double circular_mean(std::span<const double> angles, std::span<const double> weights) {
  if (angles.size() != weights.size()) throw DomainError("circular_mean: size mismatch");
  double s = 0.0;
  double c = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    s += weights[i] * std::sin(angles[i]);
    c += weights[i] * std::cos(angles[i]);
    total += weights[i];
  }
  if (!(total > 0.0) || std::hypot(s, c) <= 1e-9 * total) {
    throw UndefinedMean("circular mean undefined: resultant vector vanishes");
  }
  return wrap_two_pi(std::atan2(s, c));
}

double circular_mean(const PoseDistribution& d) {
  return circular_mean(d.grid().centers(), d.probs());
}

double flip_score(const PoseDistribution& d, double half_window) {
  if (!(half_window > 0.0) || half_window > kPi / 2.0) {
    throw DomainError("flip_score: half window must lie in (0, π/2]");
  }
  const OrientationGrid& g = d.grid();
  const double antipode = mode(d).yaw + kPi;
  const double w = g.cell_width();
  double mass = 0.0;
  for (int i = 0; i < g.n_cells(); ++i) {
    const double delta = signed_difference(g.center(i), antipode);
    const double overlap =
        std::min(delta + w / 2.0, half_window) - std::max(delta - w / 2.0, -half_window);
    if (overlap > 0.0) mass += d[i] * std::min(overlap / w, 1.0);
  }
  return std::clamp(mass, 0.0, 1.0);
}

double entropy(const PoseDistribution& d) {
  double h = 0.0;
  for (double p : d.probs()) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace seayaw

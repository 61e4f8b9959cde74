#include "seayaw/temporal_fusion.hpp"

#include <algorithm>
#include <string>

#include "seayaw/errors.hpp"

namespace seayaw {
namespace {

// Rescales to unit sum and absorbs the rounding residue into the last entry,
// so a front-to-back accumulation yields exactly 1.
void make_unit_sum(std::vector<double>& w) {
  double sum = 0.0;
  for (double v : w) sum += v;
  for (double& v : w) v /= sum;
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) head += w[i];
  w.back() = 1.0 - head;
}

}  // namespace

void FusionParams::validate() const {
  if (k < 1) throw DomainError("fusion: k must be positive, got " + std::to_string(k));
  if (t < 0 || t >= k) {
    throw DomainError("fusion: t must satisfy 0 <= t < k, got t=" + std::to_string(t) +
                      " k=" + std::to_string(k));
  }
  if (!(flip_gate_threshold > 0.0) || flip_gate_threshold > kPi) {
    throw DomainError("fusion: flip gate threshold must lie in (0, π]");
  }
  if (relock_votes < 0) throw DomainError("fusion: relock_votes must be non-negative");
}

std::vector<double> weights(const FusionParams& params) {
  params.validate();
  std::vector<double> w(static_cast<std::size_t>(params.k), 0.0);
  for (int l = params.t; l < params.k; ++l) {
    w[static_cast<std::size_t>(l)] = 1.0 / (params.k - params.t);
  }
  make_unit_sum(w);
  return w;
}

FusionState FusionState::init(const PoseDistribution& first, const FusionParams& params) {
  params.validate();
  FusionState s(first);
  s.history_.push_back(first);
  s.frames_seen_ = 1;
  return s;
}

FusionState::Outcome FusionState::advance(const PoseDistribution& observed,
                                          const FusionParams& params) {
  if (!(observed.grid() == fused_.grid())) {
    throw GridMismatch("fusion: observation grid has " +
                       std::to_string(observed.grid().n_cells()) + " cells, state has " +
                       std::to_string(fused_.grid().n_cells()));
  }
  const int n = fused_.size();
  ++frames_seen_;
  Outcome out;
  PoseDistribution obs = observed;

  if (params.flip_policy != FlipPolicy::off) {
    if (n % 2 != 0) throw DomainError("flip gate needs an even number of grid cells");
    const double fused_yaw = mode(fused_).yaw;
    const double obs_yaw = mode(obs).yaw;
    bool suspect = geodesic_distance(obs_yaw, fused_yaw) > params.flip_gate_threshold &&
                   geodesic_distance(obs_yaw + kPi, fused_yaw) <= params.flip_gate_threshold;

    if (params.relock_votes > 0) {
      flip_evidence_ = suspect ? flip_evidence_ + 1 : std::max(0, flip_evidence_ - 1);
      if (flip_evidence_ >= params.relock_votes) {
        fused_ = fused_.rotated(n / 2);
        for (auto& h : history_) h = h.rotated(n / 2);
        flip_evidence_ = 0;
        ++relocks_;
        out.relocked = true;
        suspect = false;
      }
    }

    if (suspect) {
      out.flagged = true;
      ++flips_rejected_;
      if (params.flip_policy == FlipPolicy::drop) return out;
      obs = obs.rotated(n / 2);
    }
  }

  history_.push_back(obs);
  while (history_.size() > static_cast<std::size_t>(params.k) + 1) history_.pop_front();

  const int m = static_cast<int>(history_.size()) - 1;
  if (m < 1) {
    fused_ = obs;
    return out;
  }

  // Differences D_l pair with the newest m weights ω_{k-m}..ω_{k-1}.
  const std::vector<double> full = weights(params);
  std::vector<double> w(full.end() - m, full.end());
  double prefactor = 1.0;
  if (params.mode == FusionMode::convex) {
    make_unit_sum(w);
  } else {
    prefactor = 1.0 / params.k;
  }

  std::vector<double> raw(fused_.probs().begin(), fused_.probs().end());
  for (int l = 0; l < m; ++l) {
    const double wl = prefactor * w[static_cast<std::size_t>(l)];
    if (wl == 0.0) continue;
    const auto next = history_[static_cast<std::size_t>(l) + 1].probs();
    const auto prev = history_[static_cast<std::size_t>(l)].probs();
    for (int i = 0; i < n; ++i) {
      raw[static_cast<std::size_t>(i)] +=
          wl * (next[static_cast<std::size_t>(i)] - prev[static_cast<std::size_t>(i)]);
    }
  }
  double sum = 0.0;
  for (double& v : raw) {
    v = std::max(v, 0.0);
    sum += v;
  }
  fused_ = sum > 0.0 ? PoseDistribution::normalize(fused_.grid(), raw) : obs;
  return out;
}

StepResult step(FusionState state, const PoseDistribution& observed, const FusionParams& params) {
  const auto outcome = state.advance(observed, params);
  PoseDistribution posterior = state.fused();
  return {std::move(state), std::move(posterior), outcome.flagged};
}

double mode_running_mean(std::span<const double> modes, int window) {
  if (modes.empty()) throw EmptyInput("mode_running_mean: no modes");
  if (window < 1) throw DomainError("mode_running_mean: window must be positive");
  const std::size_t take = std::min(modes.size(), static_cast<std::size_t>(window));
  const auto tail = modes.subspan(modes.size() - take);
  const std::vector<double> ones(take, 1.0);
  return circular_mean(tail, ones);
}

}  // namespace seayaw

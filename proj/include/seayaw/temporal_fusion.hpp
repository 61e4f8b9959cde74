#pragma once

#include <deque>
#include <span>
#include <vector>

#include "seayaw/angles.hpp"
#include "seayaw/pose_distribution.hpp"

namespace seayaw {

/// How the weighted difference average enters the posterior update.
enum class FusionMode {
  convex,   ///< Σ ω'_l D_l with ω' renormalized over the available differences
  literal,  ///< (1/k) Σ ω_l D_l
};

/// What the flip gate does with an observation whose mode sits near the
/// antipode of the fused mode.
enum class FlipPolicy {
  correct,  ///< rotate the observation by π and fuse it
  drop,     ///< ignore the observation for this frame
  off,      ///< no gating
};

struct FusionParams {
  int k = 3;  ///< window length, in pairwise differences
  int t = 1;  ///< differences with index l < t get zero weight
  double flip_gate_threshold = 2.0 * kPi / 3.0;
  FusionMode mode = FusionMode::convex;
  FlipPolicy flip_policy = FlipPolicy::correct;
  /// Net count of flagged-over-agreeing observations that makes the gate
  /// decide the fused estimate itself is the flipped one and re-anchor it.
  /// 0 disables re-anchoring.
  int relock_votes = 8;

  /// Throws DomainError when 0 ≤ t < k or the threshold range is violated.
  void validate() const;
};

/// ω_l = 0 for l < t, 1/(k - t) otherwise. The entries sum to exactly 1 when
/// accumulated front to back.
std::vector<double> weights(const FusionParams& params);

/// Per-tracklet fusion state: the last k+1 accepted observations and the
/// current posterior.
class FusionState {
 public:
  static FusionState init(const PoseDistribution& first, const FusionParams& params);

  struct Outcome {
    bool flagged = false;   ///< observation judged a 180° miss-prediction
    bool relocked = false;  ///< fused estimate was re-anchored on its antipode
  };

  /// Consumes one observation. Throws GridMismatch for a foreign grid.
  Outcome advance(const PoseDistribution& observed, const FusionParams& params);

  const PoseDistribution& fused() const noexcept { return fused_; }
  const std::deque<PoseDistribution>& history() const noexcept { return history_; }
  int frames_seen() const noexcept { return frames_seen_; }
  int flips_rejected() const noexcept { return flips_rejected_; }
  int relocks() const noexcept { return relocks_; }
  int flip_evidence() const noexcept { return flip_evidence_; }

 private:
  explicit FusionState(const PoseDistribution& first) : fused_(first) {}

  std::deque<PoseDistribution> history_;
  PoseDistribution fused_;
  int frames_seen_ = 0;
  int flips_rejected_ = 0;
  int relocks_ = 0;
  int flip_evidence_ = 0;
};

struct StepResult {
  FusionState state;
  PoseDistribution posterior;
  bool flagged;
};

/// Pure transition: returns the advanced copy of `state`.
StepResult step(FusionState state, const PoseDistribution& observed, const FusionParams& params);

/// Circular mean of the last `window` modes. Throws EmptyInput on no modes
/// and UndefinedMean for an antipodal window.
double mode_running_mean(std::span<const double> modes, int window);

}  // namespace seayaw

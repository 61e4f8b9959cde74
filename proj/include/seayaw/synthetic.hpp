#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "seayaw/geometry.hpp"
#include "seayaw/pose_distribution.hpp"
#include "seayaw/tracking.hpp"

namespace seayaw {

/// Counter-based generator: the stream is a pure function of
/// (seed, boat, frame, channel), so boats and noise sources never perturb
/// each other.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t boat, std::uint64_t frame, std::uint64_t channel);

  std::uint64_t next_u64();
  double uniform();  ///< [0, 1)
  double normal();   ///< standard normal
  /// Best–Fisher rejection sampler; returns an angle in [0, 2π).
  double von_mises(double mu, double kappa);

 private:
  std::uint64_t state_;
};

/// probs_i ∝ exp(κ cos(c_i − μ)). Throws DomainError for κ ≤ 0.
PoseDistribution discretize_von_mises(const OrientationGrid& grid, double mu, double kappa);

enum class MotionKind { stationary, linear, turn };

/// Boat start state in world metres (east/north of the camera nadir).
struct BoatSpec {
  MotionKind kind = MotionKind::stationary;
  double east = 0.0;
  double north = 50.0;
  double heading_deg = 0.0;     ///< clockwise from north
  double speed = 0.0;           ///< metres per frame
  double turn_rate_deg = 0.0;   ///< degrees per frame, turn boats only
};

struct NoiseSpec {
  double kappa = 8.0;   ///< concentration of the emitted distribution
  double p_flip = 0.0;  ///< probability of an antipodal emission
  double p_miss = 0.0;  ///< probability of no detection
  /// Concentration of the emitted centre around the truth; unset means κ,
  /// 0 means the centre is exact.
  std::optional<double> jitter_kappa;
  double bbox_sigma_px = 0.0;  ///< Gaussian jitter of the box position

  double effective_jitter_kappa() const { return jitter_kappa.value_or(kappa); }
};

struct Scenario {
  std::uint64_t seed = 0;
  int n_frames = 100;
  int n_cells = OrientationGrid::kDefaultCells;
  std::vector<BoatSpec> boats;
  NoiseSpec noise;
  CameraPose camera;
  double boat_length_m = 6.0;

  /// Throws ConfigError when a field is outside its valid range.
  void validate() const;
};

/// A synthesized detection together with the per-cell scores it was built
/// from (the values written to the detection stream).
struct Emission {
  Detection detection;
  std::vector<double> logits;
  bool flipped = false;
};

struct BoatTruth {
  int boat = 0;
  double heading_abs_deg = 0.0;
  double yaw_rel_deg = 0.0;
  GroundPoint world;  ///< east/north metres
  GeoPoint geo;
  std::optional<BBox> bbox;  ///< noiseless box, absent when out of view
  std::optional<Emission> emission;
};

struct FrameTruth {
  int frame = 0;
  std::vector<BoatTruth> boats;
};

/// Integrates every boat's motion and emits detections. Identical scenarios
/// give identical output.
std::vector<FrameTruth> generate(const Scenario& s);

/// Relative share of each motion kind in a generated fleet.
struct FleetMix {
  double stationary = 1.0;
  double linear = 1.0;
  double turn = 1.0;
};

/// Deterministic fleet laid out on a jittered grid over the visible water,
/// with kinds interleaved in the given proportions.
std::vector<BoatSpec> make_fleet(std::uint64_t seed, int count, FleetMix mix,
                                 const CameraPose& camera);

/// Camera used by generated benchmarks: 60 m altitude, 45° pitch, 1920×1080.
CameraPose default_bench_camera();

}  // namespace seayaw

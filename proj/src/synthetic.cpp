#include "seayaw/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seayaw/angles.hpp"
#include "seayaw/errors.hpp"

namespace seayaw {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t z) { return finalize(z + kGolden); }

// Noise channels; each draws from its own counter stream.
enum Channel : std::uint64_t {
  kMiss = 1,
  kJitter = 2,
  kFlip = 3,
  kBox = 4,
  kScore = 5,
  kFleet = 100,
};

double round_to(double v, double step) { return std::round(v / step) * step; }

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t boat, std::uint64_t frame,
                       std::uint64_t channel)
    : state_(mix(mix(mix(mix(seed) ^ boat) ^ frame) ^ channel)) {}

std::uint64_t CounterRng::next_u64() {
  state_ += kGolden;
  return finalize(state_);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double CounterRng::von_mises(double mu, double kappa) {
  if (kappa < 1e-8) return wrap_two_pi(kTwoPi * uniform());
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  double f = 0.0;
  for (;;) {
    const double u1 = uniform();
    const double u2 = 1.0 - uniform();
    const double z = std::cos(kPi * u1);
    f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) break;
  }
  const double u3 = uniform();
  const double theta = std::acos(std::clamp(f, -1.0, 1.0));
  return wrap_two_pi(u3 < 0.5 ? mu - theta : mu + theta);
}

PoseDistribution discretize_von_mises(const OrientationGrid& grid, double mu, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("von Mises concentration must be positive");
  std::vector<double> logits(static_cast<std::size_t>(grid.n_cells()));
  for (int i = 0; i < grid.n_cells(); ++i) {
    logits[static_cast<std::size_t>(i)] = kappa * std::cos(grid.center(i) - mu);
  }
  return PoseDistribution::from_logits(grid, logits);
}

void Scenario::validate() const {
  if (n_frames < 1) throw ConfigError("scenario: n_frames must be positive");
  if (n_cells < OrientationGrid::kMinCells) throw ConfigError("scenario: n_cells must be at least 4");
  if (!(noise.kappa > 0.0)) throw ConfigError("scenario: kappa must be positive");
  if (!(noise.p_flip >= 0.0 && noise.p_flip < 1.0)) throw ConfigError("scenario: p_flip must lie in [0, 1)");
  if (!(noise.p_miss >= 0.0 && noise.p_miss < 1.0)) throw ConfigError("scenario: p_miss must lie in [0, 1)");
  if (!(noise.effective_jitter_kappa() >= 0.0)) throw ConfigError("scenario: jitter_kappa must be non-negative");
  if (!(noise.bbox_sigma_px >= 0.0)) throw ConfigError("scenario: bbox_sigma_px must be non-negative");
  if (!(boat_length_m > 0.0)) throw ConfigError("scenario: boat_length_m must be positive");
  for (const auto& b : boats) {
    if (!std::isfinite(b.east) || !std::isfinite(b.north) || !std::isfinite(b.heading_deg) ||
        !(b.speed >= 0.0) || !std::isfinite(b.turn_rate_deg)) {
      throw ConfigError("scenario: invalid boat specification");
    }
  }
  try {
    camera.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

std::vector<FrameTruth> generate(const Scenario& s) {
  s.validate();
  const OrientationGrid grid(s.n_cells);
  const CameraPose& cam = s.camera;
  const NoiseSpec& noise = s.noise;
  const double jitter_kappa = noise.effective_jitter_kappa();

  struct Motion {
    GroundPoint pos;
    double heading;
  };
  std::vector<Motion> motion;
  motion.reserve(s.boats.size());
  for (const auto& b : s.boats) motion.push_back({{b.east, b.north}, b.heading_deg});

  std::vector<FrameTruth> frames;
  frames.reserve(static_cast<std::size_t>(s.n_frames));
  for (int f = 0; f < s.n_frames; ++f) {
    FrameTruth ft;
    ft.frame = f;
    for (std::size_t b = 0; b < s.boats.size(); ++b) {
      const Motion& m = motion[b];
      BoatTruth bt;
      bt.boat = static_cast<int>(b);
      bt.heading_abs_deg = wrap_degrees(m.heading);
      bt.yaw_rel_deg = absolute_to_relative_heading(cam.heading, bt.heading_abs_deg);
      bt.world = m.pos;
      bt.geo = relative_to_gps(cam, m.pos);

      const GroundPoint local = world_to_camera(cam, m.pos);
      try {
        const Pixel foot = ground_to_pixel(cam, local);
        const double range = std::sqrt(local.x * local.x + local.y * local.y + cam.alt * cam.alt);
        const double w = cam.focal * s.boat_length_m / range;
        const double h = 0.5 * w;
        if (foot.u >= 0.0 && foot.u < cam.width && foot.v > 0.0 && foot.v <= cam.height) {
          bt.bbox = BBox{round_to(foot.u - w / 2.0, 1e-3), round_to(foot.v - h, 1e-3),
                         round_to(w, 1e-3), round_to(h, 1e-3)};
        }
      } catch (const NoIntersection&) {
      }

      const auto key_boat = static_cast<std::uint64_t>(b);
      const auto key_frame = static_cast<std::uint64_t>(f);
      if (bt.bbox && CounterRng(s.seed, key_boat, key_frame, kMiss).uniform() >= noise.p_miss) {
        double center = deg_to_rad(bt.yaw_rel_deg);
        if (jitter_kappa > 0.0) {
          center = CounterRng(s.seed, key_boat, key_frame, kJitter).von_mises(center, jitter_kappa);
        }
        Emission em;
        em.flipped = CounterRng(s.seed, key_boat, key_frame, kFlip).uniform() < noise.p_flip;
        if (em.flipped) center += kPi;
        em.logits.resize(static_cast<std::size_t>(grid.n_cells()));
        for (int i = 0; i < grid.n_cells(); ++i) {
          em.logits[static_cast<std::size_t>(i)] =
              round_to(noise.kappa * std::cos(grid.center(i) - center), 1e-4);
        }

        CounterRng box_rng(s.seed, key_boat, key_frame, kBox);
        BBox box = *bt.bbox;
        box.x += noise.bbox_sigma_px * box_rng.normal();
        box.y += noise.bbox_sigma_px * box_rng.normal();
        const double x0 = std::max(0.0, box.x);
        const double y0 = std::max(0.0, box.y);
        const double x1 = std::min<double>(cam.width, box.x + box.w);
        const double y1 = std::min<double>(cam.height, box.y + box.h);
        if (x1 - x0 > 1e-3 && y1 - y0 > 1e-3) {
          em.detection.frame = f;
          em.detection.bbox = BBox{round_to(x0, 1e-3), round_to(y0, 1e-3),
                                   round_to(x1 - x0, 1e-3), round_to(y1 - y0, 1e-3)};
          em.detection.score =
              round_to(0.5 + 0.5 * CounterRng(s.seed, key_boat, key_frame, kScore).uniform(), 1e-4);
          em.detection.orientation = PoseDistribution::from_logits(grid, em.logits);
          bt.emission = std::move(em);
        }
      }
      ft.boats.push_back(std::move(bt));
    }
    frames.push_back(std::move(ft));

    for (std::size_t b = 0; b < s.boats.size(); ++b) {
      const BoatSpec& spec = s.boats[b];
      Motion& m = motion[b];
      if (spec.kind == MotionKind::stationary) continue;
      const double h = deg_to_rad(m.heading);
      m.pos.x += spec.speed * std::sin(h);
      m.pos.y += spec.speed * std::cos(h);
      if (spec.kind == MotionKind::turn) m.heading += spec.turn_rate_deg;
    }
  }
  return frames;
}

std::vector<BoatSpec> make_fleet(std::uint64_t seed, int count, FleetMix mix,
                                 const CameraPose& camera) {
  if (count < 0) throw ConfigError("fleet: count must be non-negative");
  const double shares[3] = {mix.stationary, mix.linear, mix.turn};
  if (shares[0] < 0 || shares[1] < 0 || shares[2] < 0 || shares[0] + shares[1] + shares[2] <= 0) {
    throw ConfigError("fleet: mix shares must be non-negative and not all zero");
  }
  camera.validate();

  const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(2.0 * count))));
  const int rows = std::max(1, (count + cols - 1) / cols);
  int assigned[3] = {0, 0, 0};
  std::vector<BoatSpec> fleet;
  fleet.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // Sainte-Laguë apportionment interleaves the kinds in proportion.
    int kind = 0;
    double best = -1.0;
    for (int k = 0; k < 3; ++k) {
      const double q = shares[k] / (2.0 * assigned[k] + 1.0);
      if (q > best) {
        best = q;
        kind = k;
      }
    }
    ++assigned[kind];

    CounterRng rng(seed, static_cast<std::uint64_t>(i), 0, kFleet);
    const int c = i % cols;
    const int r = i / cols;
    const double du = (c + 0.5 + 0.6 * (rng.uniform() - 0.5)) / cols;
    const double dv = (r + 0.5 + 0.6 * (rng.uniform() - 0.5)) / rows;
    const Pixel px{camera.width * (0.12 + 0.76 * du), camera.height * (0.35 + 0.55 * dv)};
    const GroundPoint world = camera_to_world(camera, pixel_to_ground(camera, px));

    BoatSpec b;
    b.kind = static_cast<MotionKind>(kind);
    b.east = world.x;
    b.north = world.y;
    b.heading_deg = 360.0 * rng.uniform();
    if (b.kind == MotionKind::linear) {
      b.speed = 0.05 + 0.20 * rng.uniform();
    } else if (b.kind == MotionKind::turn) {
      b.speed = 0.05 + 0.15 * rng.uniform();
      const double rate = 0.5 + 1.5 * rng.uniform();
      b.turn_rate_deg = rng.uniform() < 0.5 ? -rate : rate;
    }
    fleet.push_back(b);
  }
  return fleet;
}

CameraPose default_bench_camera() {
  CameraPose c;
  c.lat = 48.0;
  c.lon = 9.0;
  c.alt = 60.0;
  c.heading = 170.0;
  c.pitch = 45.0;
  c.roll = 0.0;
  c.focal = 1200.0;
  c.cx = 960.0;
  c.cy = 540.0;
  c.width = 1920;
  c.height = 1080;
  return c;
}

}  // namespace seayaw

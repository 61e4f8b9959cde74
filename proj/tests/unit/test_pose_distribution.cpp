#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "seayaw/errors.hpp"
#include "seayaw/pose_distribution.hpp"

using namespace seayaw;

namespace {

std::vector<double> random_probs(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  for (double& v : p) v = u(rng);
  return p;
}

std::vector<double> von_mises_mixture(const OrientationGrid& g, double mu, double kappa, double w) {
  std::vector<double> p(g.n_cells());
  double a = 0.0;
  double b = 0.0;
  std::vector<double> main(g.n_cells()), anti(g.n_cells());
  for (int i = 0; i < g.n_cells(); ++i) {
    main[i] = std::exp(kappa * std::cos(g.center(i) - mu));
    anti[i] = std::exp(kappa * std::cos(g.center(i) - mu - kPi));
    a += main[i];
    b += anti[i];
  }
  for (int i = 0; i < g.n_cells(); ++i) p[i] = w * main[i] / a + (1 - w) * anti[i] / b;
  return p;
}

}  // namespace

TEST_CASE("from_logits examples") {
  const auto g = make_grid(4);
  const std::vector<double> zeros(4, 0.0);
  const auto u = PoseDistribution::from_logits(g, zeros);
  for (int i = 0; i < 4; ++i) CHECK(u[i] == 0.25);

  const std::vector<double> peaked{10, 0, 0, 0};
  const double e10 = std::exp(10.0);
  CHECK(PoseDistribution::from_logits(g, peaked)[0] == doctest::Approx(e10 / (e10 + 3)).epsilon(1e-14));
  CHECK(PoseDistribution::from_logits(g, peaked)[0] == doctest::Approx(0.99986).epsilon(1e-5));

  const std::vector<double> inf{std::numeric_limits<double>::infinity(), 0, 0, 0};
  CHECK_THROWS_AS(PoseDistribution::from_logits(g, inf), DomainError);
  const std::vector<double> short_logits{0, 0, 0};
  CHECK_THROWS_AS(PoseDistribution::from_logits(g, short_logits), DomainError);
}

TEST_CASE("normalize examples") {
  const std::vector<double> a{2, 0, 0, 0};
  const auto d = PoseDistribution::normalize(a);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 0.0);
  const std::vector<double> ones{1, 1, 1, 1};
  const auto flat = PoseDistribution::normalize(ones);
  for (double v : flat.probs()) CHECK(v == 0.25);
  const std::vector<double> zeros{0, 0, 0, 0};
  CHECK_THROWS_AS(PoseDistribution::normalize(zeros), DegenerateDistribution);
  const std::vector<double> neg{1, -1, 1, 1};
  CHECK_THROWS_AS(PoseDistribution::normalize(neg), DomainError);
  const std::vector<double> three{1, 1, 1};
  CHECK_THROWS_AS(PoseDistribution::normalize(three), DomainError);
}

TEST_CASE("mode examples") {
  const auto g4 = make_grid(4);
  const auto m = mode(PoseDistribution::uniform(g4));
  CHECK(m.cell == 0);
  CHECK(m.yaw == doctest::Approx(kPi / 4));

  const auto g = make_grid(72);
  CHECK(mode(PoseDistribution::one_hot(g, 36)).yaw == g.center(36));

  std::vector<double> p(72, 0.01);
  p[19] = 1;
  p[20] = 4;
  p[21] = 1;
  const auto sym = mode(PoseDistribution::normalize(g, p));
  CHECK(sym.cell == 20);
  CHECK(std::abs(sym.yaw - g.center(20)) < 1e-12);
}

TEST_CASE("mode vertex matches the closed-form parabola on log-probabilities") {
  const auto g = make_grid(72);
  std::vector<double> p(72, 0.001);
  p[9] = 2;
  p[10] = 5;
  p[11] = 3;
  const auto d = PoseDistribution::normalize(g, p);
  const double lm = std::log(d[9]), l0 = std::log(d[10]), lp = std::log(d[11]);
  const double offset = (lm - lp) / (2 * (lm - 2 * l0 + lp));
  CHECK(mode(d).yaw == doctest::Approx(g.center(10) + offset * g.cell_width()).epsilon(1e-12));
  CHECK(mode(d).yaw == doctest::Approx(oracle::refined_mode(std::vector<double>(d.probs().begin(), d.probs().end()))));
}

TEST_CASE("mode refinement stays within half a cell") {
  std::mt19937_64 rng(3);
  const auto g = make_grid(36);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto d = PoseDistribution::normalize(g, random_probs(rng, 36));
    const auto m = mode(d);
    CHECK(geodesic_distance(m.yaw, g.center(m.cell)) <= 0.5 * g.cell_width() + 1e-12);
  }
}

TEST_CASE("circular_mean examples") {
  const auto g = make_grid(72);
  CHECK(circular_mean(PoseDistribution::one_hot(g, 5)) == doctest::Approx(g.center(5)));
  const std::vector<double> anti{0.5, 0, 0.5, 0};
  CHECK_THROWS_AS(circular_mean(PoseDistribution::normalize(anti)), UndefinedMean);
  const std::vector<double> angles{0.0, kPi / 2};
  const std::vector<double> w{0.75, 0.25};
  CHECK(circular_mean(angles, w) == doctest::Approx(std::atan2(0.25, 0.75)));
  CHECK(circular_mean(angles, w) == doctest::Approx(0.3217505544));
}

TEST_CASE("flip_score examples") {
  const auto g = make_grid(72);
  CHECK(flip_score(PoseDistribution::one_hot(g, 3)) == 0.0);
  std::vector<double> half(72, 0.0);
  half[3] = 0.5;
  half[39] = 0.5;
  CHECK(flip_score(PoseDistribution::normalize(g, half)) == doctest::Approx(0.5));

  // Trapezoid quadrature of the continuous 0.7/0.3 mixture of von Mises(1.0, 8)
  // over [1 + pi - 15deg, 1 + pi + 15deg] gives 0.15964.
  double integral = 0.0;
  const int steps = 200000;
  const double lo = 1.0 + kPi - deg_to_rad(15), hi = 1.0 + kPi + deg_to_rad(15);
  const double i0 = std::cyl_bessel_i(0.0, 8.0);
  auto density = [&](double x) {
    return (0.7 * std::exp(8 * std::cos(x - 1.0)) + 0.3 * std::exp(8 * std::cos(x - 1.0 - kPi))) /
           (kTwoPi * i0);
  };
  for (int s = 0; s < steps; ++s) {
    const double a = lo + (hi - lo) * s / steps;
    const double b = lo + (hi - lo) * (s + 1) / steps;
    integral += 0.5 * (density(a) + density(b)) * (b - a);
  }
  CHECK(integral == doctest::Approx(0.15964).epsilon(1e-4));
  const auto mix = PoseDistribution::normalize(g, von_mises_mixture(g, 1.0, 8.0, 0.7));
  CHECK(std::abs(flip_score(mix) - integral) < 0.01);
}

TEST_CASE("flip_score lies in [0,1] and ignores a half-turn of symmetric mixtures") {
  std::mt19937_64 rng(5);
  const auto g = make_grid(72);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = PoseDistribution::normalize(g, random_probs(rng, 72));
    const double s = flip_score(d);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::uniform_real_distribution<double> weight(0.55, 0.95);
  for (int trial = 0; trial < 500; ++trial) {
    const int cell = static_cast<int>(ang(rng) / g.cell_width()) % 72;
    const auto d = PoseDistribution::normalize(g, von_mises_mixture(g, g.center(cell), 6.0, weight(rng)));
    CHECK(std::abs(flip_score(d) - flip_score(d.rotated(36))) < 1e-9);
    CHECK(std::abs(flip_score(d) - flip_score(d.rotated(7))) < 1e-9);
  }
  CHECK_THROWS_AS(flip_score(PoseDistribution::uniform(g), 0.0), DomainError);
}

TEST_CASE("entropy examples and bounds") {
  const auto g = make_grid(72);
  CHECK(entropy(PoseDistribution::one_hot(g, 0)) == 0.0);
  CHECK(entropy(PoseDistribution::uniform(g)) == doctest::Approx(std::log(72.0)));
  CHECK(entropy(PoseDistribution::uniform(g)) == doctest::Approx(4.2767).epsilon(1e-4));
  const std::vector<double> half{0.5, 0.5, 0, 0};
  CHECK(entropy(PoseDistribution::normalize(half)) == doctest::Approx(std::log(2.0)));

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = PoseDistribution::normalize(g, random_probs(rng, 72));
    CHECK(entropy(d) >= 0.0);
    CHECK(entropy(d) < std::log(72.0));
  }
}

TEST_CASE("softmax is shift invariant") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> z(0.0, 5.0);
  const auto g = make_grid(72);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> l(72);
    for (double& v : l) v = z(rng);
    const double c = z(rng) * 20;
    std::vector<double> shifted = l;
    for (double& v : shifted) v += c;
    const auto a = PoseDistribution::from_logits(g, l);
    const auto b = PoseDistribution::from_logits(g, shifted);
    for (int i = 0; i < 72; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
  }
}

TEST_CASE("mode and circular mean are rotation equivariant") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> shift(-200, 200);
  for (int n : {8, 36, 72}) {
    const auto g = make_grid(n);
    for (int trial = 0; trial < 500; ++trial) {
      const auto d = PoseDistribution::normalize(g, random_probs(rng, n));
      const int m = shift(rng);
      const auto r = d.rotated(m);
      const double step = m * g.cell_width();
      CHECK(geodesic_distance(mode(r).yaw, mode(d).yaw + step) < 1e-9);
      CHECK(geodesic_distance(circular_mean(r), circular_mean(d) + step) < 1e-9);
    }
  }
}

TEST_CASE("raw argmax equals a brute-force maximum") {
  std::mt19937_64 rng(19);
  const auto g = make_grid(72);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto p = random_probs(rng, 72);
    int best = 0;
    for (int i = 1; i < 72; ++i) {
      if (p[i] > p[best]) best = i;
    }
    CHECK(mode(PoseDistribution::normalize(g, p)).cell == best);
  }
}

TEST_CASE("distributions from random inputs satisfy the invariants") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> z(0.0, 30.0);
  const auto g = make_grid(72);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> l(72);
    for (double& v : l) v = z(rng);
    const auto d = PoseDistribution::from_logits(g, l);
    double sum = 0.0;
    for (double v : d.probs()) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK(d.size() == 72);
  }
}

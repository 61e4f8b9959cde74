#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "seayaw/angles.hpp"
#include "seayaw/errors.hpp"
#include "seayaw/geometry.hpp"

using namespace seayaw;

namespace {

CameraPose camera(double pitch, double alt, double roll = 0.0) {
  CameraPose c;
  c.lat = 48.0;
  c.lon = 9.0;
  c.alt = alt;
  c.heading = 170.0;
  c.pitch = pitch;
  c.roll = roll;
  c.focal = 1200.0;
  c.cx = 960.0;
  c.cy = 540.0;
  return c;
}

}  // namespace

TEST_CASE("rotate_relative examples") {
  auto p = rotate_relative({3, 4}, 0.0);
  CHECK(p.x == 3.0);
  CHECK(p.y == 4.0);
  p = rotate_relative({1, 0}, 90.0);
  CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(1.0));
  p = rotate_relative({10, 20}, 170.0);
  const double c = std::cos(deg_to_rad(170.0)), s = std::sin(deg_to_rad(170.0));
  CHECK(p.x == doctest::Approx(10 * c - 20 * s));
  CHECK(p.y == doctest::Approx(10 * s + 20 * c));
  CHECK(std::abs(p.x - -13.32) < 0.01);
  CHECK(std::abs(p.y - -17.96) < 0.01);
}

TEST_CASE("rotation matrix is orthogonal with unit determinant") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ang(-720.0, 720.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const double th = ang(rng);
    const auto c0 = rotate_relative({1, 0}, th);
    const auto c1 = rotate_relative({0, 1}, th);
    CHECK(std::abs(c0.x * c0.x + c0.y * c0.y - 1.0) < 1e-12);
    CHECK(std::abs(c1.x * c1.x + c1.y * c1.y - 1.0) < 1e-12);
    CHECK(std::abs(c0.x * c1.x + c0.y * c1.y) < 1e-12);
    CHECK(std::abs(c0.x * c1.y - c1.x * c0.y - 1.0) < 1e-12);
  }
}

TEST_CASE("rotation preserves length") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(-360.0, 360.0);
  std::uniform_real_distribution<double> coord(-5000.0, 5000.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const GroundPoint p{coord(rng), coord(rng)};
    const auto r = rotate_relative(p, ang(rng));
    CHECK(std::abs(std::hypot(r.x, r.y) - std::hypot(p.x, p.y)) < 1e-9);
  }
}

TEST_CASE("camera frame maps forward onto the compass heading") {
  CameraPose cam;
  cam.heading = 90.0;
  const auto east = camera_to_world(cam, {0, 10});
  CHECK(east.x == doctest::Approx(10.0));
  CHECK(std::abs(east.y) < 1e-12);
  cam.heading = 170.0;
  const auto w = camera_to_world(cam, {3, 7});
  const auto back = world_to_camera(cam, w);
  CHECK(back.x == doctest::Approx(3.0));
  CHECK(back.y == doctest::Approx(7.0));
}

TEST_CASE("relative_to_gps examples") {
  const double r = kMeanEarthRadius;
  CameraPose cam;
  auto g = relative_to_gps(cam, {0, r * kPi / 180}, r);
  CHECK(g.lat == doctest::Approx(1.0));
  CHECK(g.lon == doctest::Approx(0.0));
  cam.lat = 60.0;
  g = relative_to_gps(cam, {r * kPi / 180, 0}, r);
  CHECK(g.lon == doctest::Approx(2.0));
  cam.lat = 48.0;
  cam.lon = 9.0;
  g = relative_to_gps(cam, {100, 100}, r);
  CHECK(g.lat == doctest::Approx(48.0 + 100.0 / r * 180.0 / kPi).epsilon(1e-15));
  CHECK(g.lon ==
        doctest::Approx(9.0 + 100.0 / r * 180.0 / kPi / std::cos(deg_to_rad(48.0))).epsilon(1e-15));
  CHECK(std::abs(g.lat - 48.000899) < 1e-6);
  CHECK(std::abs(g.lon - 9.001344) < 1e-6);
}

TEST_CASE("relative_to_gps guards the poles and the radius") {
  CameraPose cam;
  cam.lat = 89.5;
  CHECK_THROWS_AS(relative_to_gps(cam, {1, 1}), DomainError);
  cam.lat = 10.0;
  CHECK_THROWS_AS(relative_to_gps(cam, {1, 1}, 0.0), DomainError);
}

TEST_CASE("gps mapping round trip stays under a millimetre") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-7000.0, 7000.0);
  std::uniform_real_distribution<double> lat(-80.0, 80.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  for (int trial = 0; trial < 10000; ++trial) {
    CameraPose cam;
    cam.lat = lat(rng);
    cam.lon = lon(rng);
    const GroundPoint p{coord(rng), coord(rng)};
    const auto back = gps_to_relative(cam, relative_to_gps(cam, p));
    CHECK(std::hypot(back.x - p.x, back.y - p.y) < 1e-3);
  }
}

TEST_CASE("pixel_to_ground examples") {
  auto nadir = camera(90.0, 50.0);
  auto p = pixel_to_ground(nadir, {nadir.cx, nadir.cy});
  CHECK(std::abs(p.x) < 1e-9);
  CHECK(std::abs(p.y) < 1e-9);
  p = pixel_to_ground(nadir, {nadir.cx + nadir.focal, nadir.cy});
  CHECK(p.x == doctest::Approx(50.0));

  const auto oblique = camera(40.0, 50.0);
  p = pixel_to_ground(oblique, {oblique.cx, oblique.cy});
  CHECK(p.y == doctest::Approx(50.0 / std::tan(deg_to_rad(40.0))));
  CHECK(std::abs(p.y - 59.588) < 1e-3);
  CHECK(std::abs(p.x) < 1e-12);
}

TEST_CASE("rays above the horizon do not reach the water") {
  const auto cam = camera(10.0, 50.0);
  const double horizon = cam.cy - cam.focal * std::tan(deg_to_rad(10.0));
  CHECK_THROWS_AS(pixel_to_ground(cam, {cam.cx, horizon - 1.0}), NoIntersection);
  CHECK_THROWS_AS(pixel_to_ground(cam, {cam.cx, horizon}), NoIntersection);
  CHECK_NOTHROW(pixel_to_ground(cam, {cam.cx, horizon + 1.0}));
  CHECK_THROWS_AS(ground_to_pixel(camera(45.0, 50.0), {0.0, -1000.0}), NoIntersection);
}

TEST_CASE("pixel and ground round trip") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pitch(5.0, 90.0);
  std::uniform_real_distribution<double> alt(5.0, 300.0);
  std::uniform_real_distribution<double> roll(-30.0, 30.0);
  std::uniform_real_distribution<double> col(0.0, 1920.0);
  std::uniform_real_distribution<double> row(0.0, 1080.0);
  int tested = 0;
  while (tested < 10000) {
    const auto cam = camera(pitch(rng), alt(rng), roll(rng));
    const Pixel px{col(rng), row(rng)};
    GroundPoint g;
    try {
      g = pixel_to_ground(cam, px);
    } catch (const NoIntersection&) {
      continue;
    }
    if (std::hypot(g.x, g.y) > 20000.0) continue;
    const auto back = ground_to_pixel(cam, g);
    CHECK(std::abs(back.u - px.u) < 1e-6);
    CHECK(std::abs(back.v - px.v) < 1e-6);
    ++tested;
  }
}

TEST_CASE("ground error per pixel grows towards the horizon") {
  const auto cam = camera(5.0, 50.0);
  const double horizon = cam.cy - cam.focal * std::tan(deg_to_rad(5.0));
  double prev = 0.0;
  for (double off = 400.0; off >= 1.0; off *= 0.8) {
    const double v = horizon + off;
    const double d = std::abs(pixel_to_ground(cam, {cam.cx, v}).y -
                              pixel_to_ground(cam, {cam.cx, v + 0.01}).y) / 0.01;
    CHECK(d > prev);
    prev = d;
  }
  CHECK(prev > 1000.0);
}

TEST_CASE("roll_correction examples") {
  const double cx = 960, cy = 540;
  auto p = roll_correction({1000, 300}, 0.0, cx, cy);
  CHECK(p.u == 1000);
  CHECK(p.v == 300);
  p = roll_correction({cx + 10, cy}, 180.0, cx, cy);
  CHECK(p.u == doctest::Approx(cx - 10));
  CHECK(p.v == doctest::Approx(cy));
  p = roll_correction({cx + 100, cy}, 30.0, cx, cy);
  CHECK(std::abs(p.u - (cx + 86.60)) < 0.01);
  CHECK(std::abs(p.v - (cy - 50.0)) < 0.01);
}

TEST_CASE("heading conversion examples") {
  CHECK(relative_to_absolute_heading(0, 0) == doctest::Approx(180.0));
  CHECK(relative_to_absolute_heading(0, 180) == doctest::Approx(0.0));
  CHECK(relative_to_absolute_heading(170, 280) == doctest::Approx(270.0));
  CHECK(absolute_to_relative_heading(170, 270) == doctest::Approx(280.0));
}

TEST_CASE("relative to absolute heading is a bijection") {
  for (int theta = -360; theta <= 720; theta += 17) {
    std::set<long long> seen;
    for (int yaw = 0; yaw < 360; ++yaw) {
      const double h = relative_to_absolute_heading(theta, yaw);
      CHECK(h >= 0.0);
      CHECK(h < 360.0);
      seen.insert(std::llround(h * 1e6));
      CHECK(absolute_to_relative_heading(theta, h) == doctest::Approx(yaw).epsilon(1e-9));
    }
    CHECK(seen.size() == 360);
  }
}

TEST_CASE("geolocate composes projection, rotation and the gps mapping") {
  const auto cam = camera(40.0, 50.0);
  const auto geo = geolocate(cam, {cam.cx, cam.cy});
  const auto world = camera_to_world(cam, {0.0, 50.0 / std::tan(deg_to_rad(40.0))});
  const auto expect = relative_to_gps(cam, world);
  CHECK(geo.lat == doctest::Approx(expect.lat).epsilon(1e-14));
  CHECK(geo.lon == doctest::Approx(expect.lon).epsilon(1e-14));
}

TEST_CASE("camera validation") {
  CameraPose cam;
  CHECK_NOTHROW(cam.validate());
  cam.alt = 0.0;
  CHECK_THROWS_AS(cam.validate(), DomainError);
  cam = CameraPose{};
  cam.pitch = 0.0;
  CHECK_THROWS_AS(cam.validate(), DomainError);
  cam = CameraPose{};
  cam.focal = -1.0;
  CHECK_THROWS_AS(cam.validate(), DomainError);
  cam = CameraPose{};
  cam.lat = 95.0;
  CHECK_THROWS_AS(cam.validate(), DomainError);
}

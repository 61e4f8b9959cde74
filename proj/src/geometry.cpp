#include "seayaw/geometry.hpp"

#include <cmath>
#include <string>

#include "seayaw/angles.hpp"
#include "seayaw/errors.hpp"

namespace seayaw {

void CameraPose::validate() const {
  if (!(lat >= -90.0 && lat <= 90.0)) throw DomainError("camera: latitude outside [-90, 90]");
  if (!(lon >= -180.0 && lon <= 180.0)) throw DomainError("camera: longitude outside [-180, 180]");
  if (!(alt > 0.0)) throw DomainError("camera: altitude must be positive");
  if (!(pitch > 0.0 && pitch <= 90.0)) throw DomainError("camera: pitch outside (0, 90]");
  if (!(focal > 0.0)) throw DomainError("camera: focal length must be positive");
  if (!std::isfinite(heading) || !std::isfinite(roll) || !std::isfinite(cx) ||
      !std::isfinite(cy)) {
    throw DomainError("camera: non-finite field");
  }
  if (width <= 0 || height <= 0) throw DomainError("camera: image size must be positive");
}

GroundPoint rotate_relative(GroundPoint p, double theta_deg) {
  const double th = deg_to_rad(theta_deg);
  const double c = std::cos(th);
  const double s = std::sin(th);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

GroundPoint camera_to_world(const CameraPose& cam, GroundPoint p) {
  return rotate_relative(p, -cam.heading);
}

GroundPoint world_to_camera(const CameraPose& cam, GroundPoint p) {
  return rotate_relative(p, cam.heading);
}

namespace {

void check_geo_args(const CameraPose& cam, double r) {
  if (!(std::abs(cam.lat) < 89.0)) throw DomainError("geolocation undefined at |lat| >= 89°");
  if (!(r > 0.0)) throw DomainError("earth radius must be positive");
}

}  // namespace

GeoPoint relative_to_gps(const CameraPose& cam, GroundPoint rotated, double earth_radius) {
  check_geo_args(cam, earth_radius);
  const double to_deg = 180.0 / kPi;
  GeoPoint g;
  g.lat = cam.lat + rotated.y / earth_radius * to_deg;
  g.lon = cam.lon + rotated.x / earth_radius * to_deg / std::cos(cam.lat * kPi / 180.0);
  return g;
}

GroundPoint gps_to_relative(const CameraPose& cam, GeoPoint geo, double earth_radius) {
  check_geo_args(cam, earth_radius);
  const double to_rad = kPi / 180.0;
  return {(geo.lon - cam.lon) * to_rad * earth_radius * std::cos(cam.lat * to_rad),
          (geo.lat - cam.lat) * to_rad * earth_radius};
}

Pixel roll_correction(Pixel p, double roll_deg, double cx, double cy) {
  const double a = deg_to_rad(-roll_deg);
  const double c = std::cos(a);
  const double s = std::sin(a);
  const double du = p.u - cx;
  const double dv = p.v - cy;
  return {cx + c * du - s * dv, cy + s * du + c * dv};
}

// Local frame: X right, Y forward (horizontal), Z up. The optical axis is
// (0, cos β, -sin β) and the image-down axis (0, -sin β, -cos β).
GroundPoint pixel_to_ground(const CameraPose& cam, Pixel p) {
  const Pixel level = roll_correction(p, cam.roll, cam.cx, cam.cy);
  const double a = (level.u - cam.cx) / cam.focal;
  const double b = (level.v - cam.cy) / cam.focal;
  const double beta = deg_to_rad(cam.pitch);
  const double descent = std::sin(beta) + b * std::cos(beta);
  if (!(descent > 1e-12)) {
    throw NoIntersection("pixel (" + std::to_string(p.u) + ", " + std::to_string(p.v) +
                         ") looks at or above the horizon");
  }
  const double s = cam.alt / descent;
  return {s * a, s * (std::cos(beta) - b * std::sin(beta))};
}

Pixel ground_to_pixel(const CameraPose& cam, GroundPoint p) {
  const double beta = deg_to_rad(cam.pitch);
  const double depth = p.y * std::cos(beta) + cam.alt * std::sin(beta);
  if (!(depth > 1e-12)) throw NoIntersection("ground point lies behind the camera");
  const double a = p.x / depth;
  const double b = (cam.alt * std::cos(beta) - p.y * std::sin(beta)) / depth;
  const Pixel level{cam.cx + cam.focal * a, cam.cy + cam.focal * b};
  return roll_correction(level, -cam.roll, cam.cx, cam.cy);
}

double relative_to_absolute_heading(double theta_cam_deg, double yaw_rel_deg) {
  return wrap_degrees(theta_cam_deg + 180.0 + yaw_rel_deg);
}

double absolute_to_relative_heading(double theta_cam_deg, double heading_deg) {
  return wrap_degrees(heading_deg - theta_cam_deg - 180.0);
}

GeoPoint geolocate(const CameraPose& cam, Pixel p, double earth_radius) {
  return relative_to_gps(cam, camera_to_world(cam, pixel_to_ground(cam, p)), earth_radius);
}

}  // namespace seayaw

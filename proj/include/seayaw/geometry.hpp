#pragma once

namespace seayaw {

inline constexpr double kMeanEarthRadius = 6371008.8;

/// Georeferenced camera. Angles in degrees: heading clockwise from true
/// north, pitch below the horizontal (90 = nadir).
struct CameraPose {
  double lat = 0.0;
  double lon = 0.0;
  double alt = 50.0;  ///< metres above the water plane
  double heading = 0.0;
  double pitch = 45.0;
  double roll = 0.0;
  double focal = 1000.0;  ///< pixels
  double cx = 960.0;
  double cy = 540.0;
  int width = 1920;
  int height = 1080;

  /// Throws DomainError when a field is outside its valid range.
  void validate() const;
};

/// Ground offset in metres. In the camera frame x points right and y forward
/// (horizontal); after camera_to_world x is east and y is north.
struct GroundPoint {
  double x = 0.0;
  double y = 0.0;
};

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

/// (x_r, y_r) = [cos θ, -sin θ; sin θ, cos θ] (x, y), θ in degrees.
GroundPoint rotate_relative(GroundPoint p, double theta_deg);

/// Camera-frame ground offset to east/north, rotating by minus the compass
/// heading.
GroundPoint camera_to_world(const CameraPose& cam, GroundPoint p);
GroundPoint world_to_camera(const CameraPose& cam, GroundPoint p);

/// Flat local-tangent mapping of an east/north offset to latitude/longitude.
/// Throws DomainError for |lat| ≥ 89° or r ≤ 0.
GeoPoint relative_to_gps(const CameraPose& cam, GroundPoint rotated,
                         double earth_radius = kMeanEarthRadius);
/// Inverse of relative_to_gps with the same camera latitude and radius.
GroundPoint gps_to_relative(const CameraPose& cam, GeoPoint geo,
                            double earth_radius = kMeanEarthRadius);

/// Rotates a pixel about (cx, cy) by -roll degrees.
Pixel roll_correction(Pixel p, double roll_deg, double cx, double cy);

/// Intersects the ray through a pixel with the water plane. Throws
/// NoIntersection for rays at or above the horizon.
GroundPoint pixel_to_ground(const CameraPose& cam, Pixel p);
/// Forward projection of a camera-frame ground point. Throws NoIntersection
/// for points behind the image plane.
Pixel ground_to_pixel(const CameraPose& cam, GroundPoint p);

/// Absolute heading (degrees from north) of a boat whose relative yaw is
/// measured with 0 meaning the bow faces the camera.
double relative_to_absolute_heading(double theta_cam_deg, double yaw_rel_deg);
double absolute_to_relative_heading(double theta_cam_deg, double heading_deg);

/// pixel_to_ground, camera_to_world and relative_to_gps in one call.
GeoPoint geolocate(const CameraPose& cam, Pixel p, double earth_radius = kMeanEarthRadius);

}  // namespace seayaw

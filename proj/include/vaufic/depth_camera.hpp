#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "vaufic/spatial_math.hpp"
#include "vaufic/surface_world.hpp"

namespace vaufic {

using Rng = std::mt19937_64;

class EmptyViewError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pinhole depth camera. The optical axis is the camera +z axis; image
/// columns run along camera +x and rows along camera +y.
struct CameraModel {
  Pose mount;  // tool (ee) -> camera
  double fov_h = 20.0 * 3.14159265358979323846 / 180.0;  // rad
  double fov_v = 15.0 * 3.14159265358979323846 / 180.0;  // rad
  int cols = 48;
  int rows = 36;
  double range_min = 0.1;  // m
  double range_max = 1.0;  // m
  double noise_sigma = 0.0;  // m, along the ray
  std::uint64_t seed = 1;

  void validate() const;
  /// Unit ray direction of pixel (u, v) in the camera frame.
  Vec3 ray(int u, int v) const;
};

struct PointCloud {
  std::vector<Vec3> points;  // camera frame, m
  double timestamp = 0.0;    // s
};

/// Ray-casts the height field from `camera_pose_in_base`. Noise is drawn from
/// `rng`. Throws EmptyViewError when fewer than 10% of the pixels return.
PointCloud render(const CameraModel& camera, const Pose& camera_pose_in_base,
                  const HeightField& surface, Rng& rng, double timestamp = 0.0);

/// Same as above with a fresh generator seeded from `camera.seed`.
PointCloud render(const CameraModel& camera, const Pose& camera_pose_in_base,
                  const HeightField& surface);

/// First intersection distance of a base-frame ray with the surface, if any,
/// within [t_min, t_max]. Bisection tolerance is 1e-6 m.
std::optional<double> intersect_ray(const HeightField& surface, const Vec3& origin,
                                    const Vec3& direction, double t_min, double t_max);

}  // namespace vaufic

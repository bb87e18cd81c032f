#include "vaufic/depth_camera.hpp"

#include <cmath>
#include <optional>

#include "vaufic/logging.hpp"

namespace vaufic {

namespace {

constexpr double kMarchStep = 1e-3;       // m along the ray
constexpr double kBisectionTol = 1e-6;    // m along the ray
constexpr double kMinValidFraction = 0.1;

// Signed vertical clearance of the ray point above the surface; nullopt when
// the point leaves the domain.
std::optional<double> clearance(const HeightField& s, const Vec3& p) {
  if (!s.contains(p.x(), p.y())) return std::nullopt;
  return p.z() - height(s, p.x(), p.y());
}

}  // namespace

void CameraModel::validate() const {
  const double pi = 3.14159265358979323846;
  if (!(fov_h > 0.0 && fov_h < pi) || !(fov_v > 0.0 && fov_v < pi)) {
    throw std::invalid_argument("camera field of view must lie in (0, pi)");
  }
  if (cols < 8 || rows < 8) throw std::invalid_argument("camera resolution must be at least 8x8");
  if (!(range_min < range_max) || range_min < 0.0) {
    throw std::invalid_argument("camera range_min must be below range_max");
  }
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("camera noise_sigma must be >= 0");
}

Vec3 CameraModel::ray(int u, int v) const {
  const double sx = std::tan(0.5 * fov_h) * (2.0 * (u + 0.5) / cols - 1.0);
  const double sy = std::tan(0.5 * fov_v) * (2.0 * (v + 0.5) / rows - 1.0);
  return Vec3(sx, sy, 1.0).normalized();
}

std::optional<double> intersect_ray(const HeightField& s, const Vec3& origin, const Vec3& dir,
                                    double t_min, double t_max) {
  // Restrict marching to the slab [z_min, z_max] that contains the surface.
  double lo = t_min, hi = t_max;
  if (dir.z() < 0.0) {
    lo = std::max(lo, (s.z_max() - origin.z()) / dir.z());
    hi = std::min(hi, (s.z_min() - origin.z()) / dir.z());
  } else if (origin.z() > s.z_max()) {
    return std::nullopt;
  }
  if (lo > hi) return std::nullopt;

  // Points outside the patch count as clearance: the ray may still enter it.
  const auto f_lo = clearance(s, origin + lo * dir);
  if (f_lo && *f_lo <= 0.0) return lo;

  double a = lo;
  while (a < hi) {
    const double b = std::min(hi, a + kMarchStep);
    const auto f_b = clearance(s, origin + b * dir);
    if (f_b && *f_b <= 0.0) {
      double left = a, right = b;
      while (right - left > kBisectionTol) {
        const double mid = 0.5 * (left + right);
        const auto f_mid = clearance(s, origin + mid * dir);
        if (f_mid && *f_mid > 0.0) {
          left = mid;
        } else {
          right = mid;
        }
      }
      return 0.5 * (left + right);
    }
    a = b;
  }
  return std::nullopt;
}

PointCloud render(const CameraModel& camera, const Pose& pose, const HeightField& surface,
                  Rng& rng, double timestamp) {
  camera.validate();
  PointCloud cloud;
  cloud.timestamp = timestamp;
  cloud.points.reserve(static_cast<std::size_t>(camera.cols) * camera.rows);

  std::normal_distribution<double> noise(0.0, 1.0);
  const Mat3& r = pose.rotation.matrix();
  int below_min = 0;
  // Search beyond range_max so noisy returns straddling the limit are still
  // generated and then filtered on camera z.
  const double t_cap = camera.range_max * 4.0;

  for (int v = 0; v < camera.rows; ++v) {
    for (int u = 0; u < camera.cols; ++u) {
      const Vec3 d_cam = camera.ray(u, v);
      const auto t = intersect_ray(surface, pose.position, r * d_cam, 0.0, t_cap);
      if (!t) continue;
      double depth = *t;
      if (camera.noise_sigma > 0.0) depth += camera.noise_sigma * noise(rng);
      const Vec3 p = depth * d_cam;
      if (p.z() < camera.range_min) {
        ++below_min;
        continue;
      }
      if (p.z() > camera.range_max) continue;
      cloud.points.push_back(p);
    }
  }

  const double pixels = static_cast<double>(camera.cols) * camera.rows;
  if (below_min > 0.5 * pixels) {
    spdlog::warn("depth camera: {} of {} pixels closer than range_min", below_min,
              static_cast<int>(pixels));
  }
  if (cloud.points.size() < kMinValidFraction * pixels) {
    throw EmptyViewError("depth camera: only " + std::to_string(cloud.points.size()) + " of " +
                         std::to_string(static_cast<int>(pixels)) + " pixels returned");
  }
  return cloud;
}

PointCloud render(const CameraModel& camera, const Pose& pose, const HeightField& surface) {
  Rng rng(camera.seed);
  return render(camera, pose, surface, rng);
}

}  // namespace vaufic

#include "vaufic/surface_world.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vaufic {

namespace {

constexpr double kSlipSpeed = 1e-5;  // m/s

void require_inside(const HeightField& s, double x, double y) {
  if (!s.contains(x, y)) {
    throw DomainError("surface query (" + std::to_string(x) + ", " + std::to_string(y) +
                      ") outside the height-field domain");
  }
}

}  // namespace

HeightField HeightField::flat(double z, double half_extent) {
  HeightField s;
  s.kind = SurfaceKind::flat;
  s.amplitude = 0.0;
  s.offset = z;
  s.x_min = s.y_min = -half_extent;
  s.x_max = s.y_max = half_extent;
  return s;
}

void HeightField::validate() const {
  if (!(k_n > 0.0)) throw std::invalid_argument("surface.k_n must be > 0");
  if (!(mu >= 0.0)) throw std::invalid_argument("surface.mu must be >= 0");
  if (!(d_n >= 0.0)) throw std::invalid_argument("surface.d_n must be >= 0");
  if (!(x_min < x_max) || !(y_min < y_max)) throw std::invalid_argument("surface bounds are empty");
  if (kind == SurfaceKind::sinusoid && !(period > 0.0)) {
    throw std::invalid_argument("surface.period must be > 0");
  }
}

bool HeightField::contains(double x, double y) const {
  return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
}

double HeightField::z_min() const {
  return kind == SurfaceKind::flat ? offset : offset - std::abs(amplitude);
}

double HeightField::z_max() const {
  return kind == SurfaceKind::flat ? offset : offset + std::abs(amplitude);
}

double height(const HeightField& s, double x, double y) {
  require_inside(s, x, y);
  if (s.kind == SurfaceKind::flat) return s.offset;
  return s.amplitude * std::sin(std::numbers::pi / s.period * y + s.phase) + s.offset;
}

Eigen::Vector2d height_gradient(const HeightField& s, double x, double y) {
  require_inside(s, x, y);
  if (s.kind == SurfaceKind::flat) return Eigen::Vector2d::Zero();
  const double k = std::numbers::pi / s.period;
  return {0.0, s.amplitude * k * std::cos(k * y + s.phase)};
}

Vec3 analytic_normal(const HeightField& s, double x, double y) {
  const Eigen::Vector2d g = height_gradient(s, x, y);
  return Vec3(-g.x(), -g.y(), 1.0).normalized();
}

ContactReport contact_wrench(const HeightField& s, const Pose& tool_pose, const Vec6& tool_twist,
                             double tool_radius) {
  ContactReport report;
  const Vec3& c = tool_pose.position;
  if (!s.contains(c.x(), c.y())) return report;

  const Vec3 n = analytic_normal(s, c.x(), c.y());
  report.normal = n;
  const double vertical = height(s, c.x(), c.y()) + tool_radius - c.z();
  const double penetration = vertical * n.z();
  if (!(penetration > 0.0)) return report;

  const Vec3 v = tool_twist.head<3>();
  const double penetration_rate = -v.dot(n);
  const double fn = std::max(0.0, s.k_n * penetration + s.d_n * penetration_rate);

  Vec3 force = fn * n;
  const Vec3 v_t = v - v.dot(n) * n;
  const double slip = v_t.norm();
  if (slip > kSlipSpeed) force -= s.mu * fn * v_t / slip;

  report.in_contact = true;
  report.penetration = penetration;
  report.wrench_on_tool = Wrench{force, Vec3::Zero(), Frame::base};
  return report;
}

}  // namespace vaufic

#pragma once

#include <stdexcept>

#include "vaufic/spatial_math.hpp"

namespace vaufic {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class SurfaceKind { flat, sinusoid };

/// Height field z = h(x, y) over a rectangular patch.
///
/// The sinusoid is h = amplitude * sin(pi * y / period + phase) + offset, so
/// `period` is the half wavelength along y. The flat kind is h = offset.
struct HeightField {
  SurfaceKind kind = SurfaceKind::sinusoid;
  double amplitude = 0.02;  // m
  double period = 0.19;     // m
  double phase = 0.44;      // rad
  double offset = 0.02;     // m
  double x_min = -0.13, x_max = 0.13;    // m
  double y_min = -0.255, y_max = 0.255;  // m
  double mu = 0.5;       // Coulomb friction, unitless
  double k_n = 1.0e4;    // N/m
  double d_n = 50.0;     // N s/m

  static HeightField paper_sinusoid() { return HeightField{}; }
  static HeightField flat(double z, double half_extent = 1.0);

  /// Throws std::invalid_argument on non-physical parameters.
  void validate() const;
  bool contains(double x, double y) const;
  double z_min() const;
  double z_max() const;
};

double height(const HeightField& s, double x, double y);
/// Gradient (dh/dx, dh/dy).
Eigen::Vector2d height_gradient(const HeightField& s, double x, double y);
/// normalize([-dh/dx, -dh/dy, 1]).
Vec3 analytic_normal(const HeightField& s, double x, double y);

struct ContactReport {
  bool in_contact = false;
  double penetration = 0.0;  // m
  Vec3 normal = Vec3::UnitZ();
  Wrench wrench_on_tool = Wrench::zero(Frame::base);
};

/// Penalty contact between a spherical tool (center at the pose origin) and
/// the surface. `tool_twist` is [v; w] in the base frame.
ContactReport contact_wrench(const HeightField& s, const Pose& tool_pose, const Vec6& tool_twist,
                             double tool_radius);

}  // namespace vaufic

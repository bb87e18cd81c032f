#pragma once

#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

namespace vaufic {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

class FrameMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Orthonormal 3x3 matrix with determinant +1. Construction validates to 1e-9.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  static Rotation identity() { return Rotation(); }
  /// Throws std::invalid_argument if `m` is not a proper rotation to 1e-9.
  static Rotation from_matrix(const Mat3& m);
  /// Re-orthonormalizes `m` (nearest rotation) before wrapping it.
  static Rotation from_matrix_projected(const Mat3& m);
  static Rotation about_axis(const Vec3& axis, double angle);
  static Rotation from_quaternion(const Eigen::Quaterniond& q);

  const Mat3& matrix() const { return m_; }
  Vec3 col(int i) const { return m_.col(i); }
  Rotation transpose() const { return Rotation(m_.transpose(), Unchecked{}); }
  Eigen::Quaterniond quaternion() const;

  Rotation operator*(const Rotation& other) const {
    return Rotation(m_ * other.m_, Unchecked{});
  }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  bool operator==(const Rotation& other) const { return m_ == other.m_; }

 private:
  struct Unchecked {};
  Rotation(const Mat3& m, Unchecked) : m_(m) {}
  Mat3 m_;

  friend Rotation rotation_exp(const Vec3& rotvec);
};

struct Pose {
  Rotation rotation;
  Vec3 position = Vec3::Zero();
};

enum class Frame { base, ee, camera };

std::string_view to_string(Frame f);

struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
  Frame frame = Frame::base;

  static Wrench zero(Frame f) { return Wrench{Vec3::Zero(), Vec3::Zero(), f}; }
  static Wrench from_vector(const Vec6& v, Frame f) {
    return Wrench{v.head<3>(), v.tail<3>(), f};
  }
  Vec6 vector() const {
    Vec6 v;
    v << force, torque;
    return v;
  }
  /// Throws FrameMismatch when the tag differs from `expected`.
  const Wrench& expect(Frame expected, std::string_view who) const;

  Wrench operator+(const Wrench& o) const;
  Wrench operator*(double s) const { return Wrench{force * s, torque * s, frame}; }
};

/// Symmetric 3x3 matrix; symmetry checked to 1e-12 relative to its magnitude.
class SymMat3 {
 public:
  explicit SymMat3(const Mat3& m);
  const Mat3& matrix() const { return m_; }

 private:
  Mat3 m_;
};

struct SymEigen {
  Vec3 values;   // sorted |l1| >= |l2| >= |l3|
  Mat3 vectors;  // column i pairs with values(i)
};

/// Eigen-decomposition of a symmetric 3x3 matrix. Each eigenvector is unit
/// norm with its largest-magnitude component made positive.
SymEigen eig_sym3(const SymMat3& m);

Mat3 skew(const Vec3& v);

/// Axis-angle vector of `r`, norm in [0, pi]. At an angle of pi (within 1e-7)
/// the axis is chosen with its largest-magnitude component positive.
Vec3 rotation_log(const Rotation& r);
Rotation rotation_exp(const Vec3& rotvec);

/// Geodesic angle between two rotations, radians in [0, pi].
double rotation_angle(const Rotation& a, const Rotation& b);

/// (target * init^T)^zeta * init via the axis-angle of the relative rotation.
Rotation rotation_power(const Rotation& init, const Rotation& target, double zeta);

/// Applies blockdiag(R, R) to the wrench and re-tags it. `w` must be in `from`.
Wrench rotate_wrench(const Rotation& r, const Wrench& w, Frame from, Frame to);

Vec6 rotate6(const Rotation& r, const Vec6& v);

/// Pose error x - x_d as [p - p_d; log(R * R_d^T)].
Vec6 pose_error(const Pose& actual, const Pose& desired);

}  // namespace vaufic

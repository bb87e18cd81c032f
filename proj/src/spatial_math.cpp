#include "vaufic/spatial_math.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace vaufic {

namespace {

constexpr double kRotationTol = 1e-9;
constexpr double kPiTieBand = 1e-7;

// Flip so the largest-magnitude component is positive.
Vec3 canonical_sign(const Vec3& v) {
  Eigen::Index i = 0;
  v.cwiseAbs().maxCoeff(&i);
  return v(i) < 0.0 ? Vec3(-v) : v;
}

}  // namespace

std::string_view to_string(Frame f) {
  switch (f) {
    case Frame::base: return "base";
    case Frame::ee: return "ee";
    case Frame::camera: return "camera";
  }
  return "?";
}

Rotation Rotation::from_matrix(const Mat3& m) {
  const double orth = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (!std::isfinite(orth) || orth > kRotationTol || std::abs(det - 1.0) > kRotationTol) {
    throw std::invalid_argument("matrix is not a proper rotation");
  }
  return Rotation(m, Unchecked{});
}

Rotation Rotation::from_matrix_projected(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return Rotation(u * v.transpose(), Unchecked{});
}

Rotation Rotation::about_axis(const Vec3& axis, double angle) {
  return rotation_exp(axis.normalized() * angle);
}

Rotation Rotation::from_quaternion(const Eigen::Quaterniond& q) {
  return Rotation(q.normalized().toRotationMatrix(), Unchecked{});
}

Eigen::Quaterniond Rotation::quaternion() const {
  Eigen::Quaterniond q(m_);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return q;
}

const Wrench& Wrench::expect(Frame expected, std::string_view who) const {
  if (frame != expected) {
    throw FrameMismatch(std::string(who) + ": wrench in frame '" + std::string(to_string(frame)) +
                        "', expected '" + std::string(to_string(expected)) + "'");
  }
  return *this;
}

Wrench Wrench::operator+(const Wrench& o) const {
  o.expect(frame, "wrench sum");
  return Wrench{force + o.force, torque + o.torque, frame};
}

SymMat3::SymMat3(const Mat3& m) : m_(m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("matrix is not symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymEigen eig_sym3(const SymMat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(m.matrix());
  const Vec3 vals = solver.eigenvalues();
  const Mat3 vecs = solver.eigenvectors();

  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(vals(a)) > std::abs(vals(b)); });

  SymEigen out;
  for (int i = 0; i < 3; ++i) {
    out.values(i) = vals(order[i]);
    out.vectors.col(i) = canonical_sign(vecs.col(order[i]).normalized());
  }
  return out;
}

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

Vec3 rotation_log(const Rotation& r) {
  const Eigen::Quaterniond q = r.quaternion();  // w >= 0
  const Vec3 v = q.vec();
  const double sin_half = v.norm();
  const double angle = 2.0 * std::atan2(sin_half, q.w());
  if (sin_half < 1e-12) {
    // angle ~ 2*|v|; first-order series keeps the sign information of v
    return 2.0 * v;
  }
  Vec3 axis = v / sin_half;
  if (std::numbers::pi - angle < kPiTieBand) axis = canonical_sign(axis);
  return axis * angle;
}

Rotation rotation_exp(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) {
    const Mat3 k = skew(rotvec);
    return Rotation::from_matrix_projected(Mat3::Identity() + k + 0.5 * k * k);
  }
  const Eigen::AngleAxisd aa(angle, rotvec / angle);
  return Rotation(aa.toRotationMatrix(), Rotation::Unchecked{});
}

double rotation_angle(const Rotation& a, const Rotation& b) {
  return rotation_log(b * a.transpose()).norm();
}

Rotation rotation_power(const Rotation& init, const Rotation& target, double zeta) {
  if (!(zeta >= 0.0 && zeta <= 1.0)) {
    throw std::invalid_argument("rotation_power: zeta must lie in [0, 1]");
  }
  if (zeta == 0.0) return init;
  if (zeta == 1.0) return target;
  const Vec3 rel = rotation_log(target * init.transpose());
  return rotation_exp(zeta * rel) * init;
}

Wrench rotate_wrench(const Rotation& r, const Wrench& w, Frame from, Frame to) {
  w.expect(from, "rotate_wrench");
  return Wrench{r * w.force, r * w.torque, to};
}

Vec6 rotate6(const Rotation& r, const Vec6& v) {
  Vec6 out;
  out << r * Vec3(v.head<3>()), r * Vec3(v.tail<3>());
  return out;
}

Vec6 pose_error(const Pose& actual, const Pose& desired) {
  Vec6 e;
  e << actual.position - desired.position,
      rotation_log(actual.rotation * desired.rotation.transpose());
  return e;
}

}  // namespace vaufic

#include "vaufic/ufic_controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vaufic {

void ControllerConfig::validate() const {
  if ((k_max.array() < 0.0).any()) throw std::invalid_argument("controller.k_max must be >= 0");
  if ((damping.array() < 0.0).any()) throw std::invalid_argument("controller.damping must be >= 0");
  if ((kp.array() < 0.0).any()) throw std::invalid_argument("controller.kp must be >= 0");
  if ((ki.array() < 0.0).any()) throw std::invalid_argument("controller.ki must be >= 0");
  if (!(integral_limit >= 0.0)) throw std::invalid_argument("controller.integral_limit must be >= 0");
  if (!(filter_T > 0.0)) throw std::invalid_argument("controller.filter_T must be > 0");
  if (!(d_floor > 0.0)) throw std::invalid_argument("controller.d_floor must be > 0");
}

Mat3 stiffness_from_alignment(double rho_align, const Rotation& r_ee, const Vec3& k_max_t) {
  const Mat3& r = r_ee.matrix();
  return rho_align * r * k_max_t.asDiagonal() * r.transpose();
}

Mat6 variable_stiffness(double rho_align, const Rotation& r_ee, const Vec6& k_max) {
  Mat6 k = Mat6::Zero();
  k.topLeftCorner<3, 3>() = stiffness_from_alignment(rho_align, r_ee, k_max.head<3>());
  k.bottomRightCorner<3, 3>() = stiffness_from_alignment(1.0, r_ee, k_max.tail<3>());
  return k;
}

Mat6 damping_matrix(const Mat6& k_c, const Mat6& m_c, const Vec6& coeffs, double d_floor) {
  const Vec6 km = (k_c.diagonal().cwiseMax(0.0).array() * m_c.diagonal().array()).sqrt();
  Vec6 d = 2.0 * coeffs.cwiseProduct(km);
  d.array() += d_floor;
  return d.asDiagonal();
}

Wrench impedance_wrench(const Vec6& x_tilde, const Vec6& x_dot, const Mat6& k_c, const Mat6& d_c) {
  return Wrench::from_vector(-k_c * x_tilde - d_c * x_dot, Frame::base);
}

Wrench force_wrench(const Wrench& f_d_ee, const Wrench& f_ext_ee, ControllerState& state,
                    const Rotation& r_ee, double dt, const ControllerConfig& cfg) {
  f_d_ee.expect(Frame::ee, "force_wrench desired");
  f_ext_ee.expect(Frame::ee, "force_wrench measured");
  if (!(dt > 0.0)) throw std::invalid_argument("force_wrench: dt must be > 0");

  const Vec6 err = f_ext_ee.vector() - f_d_ee.vector();
  state.integral = (state.integral + err * dt)
                       .cwiseMax(-cfg.integral_limit)
                       .cwiseMin(cfg.integral_limit);
  const Vec6 f_ee =
      f_d_ee.vector() - cfg.kp.cwiseProduct(err) - cfg.ki.cwiseProduct(state.integral);
  return rotate_wrench(r_ee, Wrench::from_vector(f_ee, Frame::ee), Frame::ee, Frame::base);
}

Rotation desired_orientation(const Vec3& n_s_base, const Rotation& r_ee) {
  const Vec3 z = n_s_base.normalized();
  Vec3 x = r_ee.col(0) - r_ee.col(0).dot(z) * z;
  if (x.norm() < 1e-6) {
    // Tool x is parallel to the normal; build the frame from tool y instead.
    const Vec3 y = (r_ee.col(1) - r_ee.col(1).dot(z) * z).normalized();
    x = y.cross(z);
  }
  x.normalize();
  Mat3 m;
  m.col(0) = x;
  m.col(1) = z.cross(x);
  m.col(2) = z;
  return Rotation::from_matrix_projected(m);
}

void start_orientation_filter(ControllerState& state, const Rotation& r_init, const Rotation& r_d) {
  state.r_init = r_init;
  state.r_d = r_d;
  state.t_f = 0.0;
  state.filter_active = true;
}

Rotation orientation_filter(ControllerState& state, double dt, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("orientation_filter: T must be > 0");
  if (state.t_f >= T) {
    state.filter_active = false;
    return state.r_d;
  }
  const Rotation out = rotation_power(state.r_init, state.r_d, std::clamp(state.t_f / T, 0.0, 1.0));
  state.t_f += dt;
  return out;
}

ImpedanceParts impedance_parts(const Vec6& x_tilde, const Vec6& x_dot, const Mat6& k_const,
                               const Mat6& k_var, const Mat6& d_c) {
  return ImpedanceParts{-k_const * x_tilde, -k_var * x_tilde, -d_c * x_dot};
}

Wrench compose_command(const ImpedanceParts& parts, const Wrench& f_f, const Gates& gates) {
  f_f.expect(Frame::base, "compose_command");
  const Vec6 f = parts.spring_const + parts.damper + gates.sigma_i * parts.spring_var +
                 gates.force_gain() * f_f.vector();
  return Wrench::from_vector(f, Frame::base);
}

}  // namespace vaufic

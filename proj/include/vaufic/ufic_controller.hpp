#pragma once

#include "vaufic/spatial_math.hpp"

namespace vaufic {

struct ControllerConfig {
  Vec6 k_max = (Vec6() << 1000, 1000, 10, 200, 200, 200).finished();  // N/m, N m/rad
  Vec6 damping = (Vec6() << 0.7, 0.7, 0.7, 1, 1, 1).finished();
  Vec6 kp = Vec6::Constant(0.6);
  Vec6 ki = Vec6::Constant(0.3);
  double integral_limit = 30.0;  // per component
  double filter_T = 1.0;         // s
  double d_floor = 5.0;          // N s/m per axis

  void validate() const;
};

struct ControllerState {
  Vec6 integral = Vec6::Zero();
  Pose x_d;
  Rotation r_init;
  Rotation r_d;
  double t_f = 0.0;
  bool filter_active = false;
  Wrench f_d_ee = Wrench::zero(Frame::ee);
};

/// rho * R * diag(k_max_t) * R^T.
Mat3 stiffness_from_alignment(double rho_align, const Rotation& r_ee, const Vec3& k_max_t);

/// Full 6x6 variable stiffness: shaped translational block and the
/// rotational block held at its maximum, both expressed in the base frame.
Mat6 variable_stiffness(double rho_align, const Rotation& r_ee, const Vec6& k_max);

/// 2 * diag(coeffs) * sqrt(diag(K) .* diag(M)) + d_floor * I.
Mat6 damping_matrix(const Mat6& k_c, const Mat6& m_c, const Vec6& coeffs, double d_floor = 5.0);

/// -K x_tilde - D x_dot, base frame.
Wrench impedance_wrench(const Vec6& x_tilde, const Vec6& x_dot, const Mat6& k_c, const Mat6& d_c);

/// PI force law in the ee frame, rotated to base. `f_ext_ee` is the wrench
/// the tool applies to the environment, so pressing harder than f_d lowers
/// the command. Updates and clamps the integral in `state`.
Wrench force_wrench(const Wrench& f_d_ee, const Wrench& f_ext_ee, ControllerState& state,
                    const Rotation& r_ee, double dt, const ControllerConfig& cfg);

/// Rotation whose z column is `n_s_base` and whose x column is the tool x
/// axis projected onto the plane orthogonal to it (tool y when x is parallel).
Rotation desired_orientation(const Vec3& n_s_base, const Rotation& r_ee);

/// Starts a new filter transition from `r_init` toward `r_d`.
void start_orientation_filter(ControllerState& state, const Rotation& r_init, const Rotation& r_d);

/// Returns the filtered rotation at the current filter clock, then advances
/// the clock by dt. Returns r_d exactly once t_f >= T.
Rotation orientation_filter(ControllerState& state, double dt, double T);

struct ImpedanceParts {
  Vec6 spring_const = Vec6::Zero();  // -K_const x_tilde
  Vec6 spring_var = Vec6::Zero();    // -K_var x_tilde
  Vec6 damper = Vec6::Zero();        // -D x_dot

  Wrench total() const { return Wrench::from_vector(spring_const + spring_var + damper, Frame::base); }
};

ImpedanceParts impedance_parts(const Vec6& x_tilde, const Vec6& x_dot, const Mat6& k_const,
                               const Mat6& k_var, const Mat6& d_c);

struct Gates {
  double rho_frc = 1.0;
  int lambda = 1;
  double sigma_f = 1.0;
  double sigma_i = 1.0;

  /// Scale actually applied to f_f.
  double force_gain() const { return rho_frc * (lambda + sigma_f * (1 - lambda)); }
};

/// spring_const + damper + sigma_i * spring_var + rho_frc (lambda + sigma_f (1 - lambda)) f_f.
Wrench compose_command(const ImpedanceParts& parts, const Wrench& f_f, const Gates& gates);

}  // namespace vaufic

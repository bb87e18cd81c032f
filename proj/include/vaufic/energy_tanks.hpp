#pragma once

#include <vector>

#include "vaufic/spatial_math.hpp"

namespace vaufic {

struct TankConfig {
  double x0 = 2.0;        // sqrt(J)
  double s_upper = 2.0;   // J
  double s_lower = 1.0;   // J
  double ramp_eps = 0.2;  // J

  static TankConfig force_default() { return TankConfig{2.0, 2.0, 1.0, 0.2}; }
  static TankConfig impedance_default() { return TankConfig{7.0, 32.0, 1.0, 0.2}; }

  /// Throws std::invalid_argument naming `prefix` and the offending field.
  void validate(const char* prefix) const;
};

struct TankState {
  double x_t = 2.0;
  double s_upper = 2.0;
  double s_lower = 1.0;
  double eps = 0.2;

  static TankState from_config(const TankConfig& c) {
    return TankState{c.x0, c.s_upper, c.s_lower, c.ramp_eps};
  }
  double energy() const { return 0.5 * x_t * x_t; }
};

struct TankOutputs {
  double sigma = 1.0;
  double beta = 1.0;
  int lambda = 0;
};

struct TankStep {
  TankState state;
  TankOutputs outputs;  // evaluated on the state before the step
  double clamped = 0.0;  // J removed (+) or added (-) by the band clamp
};

/// 1 iff x_dot . f_f < 0.
int lambda_selector(const Vec6& x_dot, const Wrench& f_f);

/// 0 at or below s_lower, linear ramp over eps, 1 above.
double valve_sigma(double s_t, double s_lower, double eps);

/// 1 at or below s_upper - eps, linear ramp down to 0 at s_upper, 0 above.
double gate_beta(double s_t, double s_upper, double eps);

TankOutputs tank_outputs(const TankState& tank);

/// Adds `delta_e` joules and clamps the stored energy to the band.
TankStep tank_apply(const TankState& tank, const TankOutputs& outputs, double delta_e);

/// Force tank over one step with continuous-time power evaluated at x_dot:
/// lambda beta (x_dot' D x_dot - x_dot' f_f) - sigma (1 - lambda) x_dot' f_f.
TankStep force_tank_step(const TankState& tank, const Vec6& x_dot, const Mat6& d_c,
                         const Wrench& f_f, double dt);

/// Impedance tank over one step: beta x_dot' D x_dot + sigma x_tilde' K_var' x_dot.
TankStep impedance_tank_step(const TankState& tank, const Vec6& x_dot, const Vec6& x_tilde,
                             const Mat6& d_c, const Mat6& k_var, double dt);

/// Discrete form used by the closed loop, driven by the work actually done
/// over the step. `e_diss` is the damper dissipation share offered to this
/// tank and `w_force` the work of rho_frc * f_f on the robot. With lambda = 1
/// a positive `w_force` is still paid in full.
TankStep force_tank_exchange(const TankState& tank, const TankOutputs& out, double e_diss,
                             double w_force);

/// `w_spring` is (K_var x_tilde)' x_dot dt, i.e. the work the variable spring
/// takes back from the robot.
TankStep impedance_tank_exchange(const TankState& tank, const TankOutputs& out, double e_diss,
                                 double w_spring);

struct AuditRecord {
  double t = 0.0;
  Vec6 twist = Vec6::Zero();
  Vec6 f_ext_on_robot = Vec6::Zero();  // base frame
  double e_kin = 0.0;
  double e_spring = 0.0;
  double s_i = 0.0;
  double s_f = 0.0;

  double storage() const { return e_kin + e_spring + s_i + s_f; }
};

struct AuditReport {
  std::size_t ticks = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // J, max over ticks of dS - W
  double worst_t = 0.0;
  double total_supplied = 0.0;

  bool passed() const { return violations == 0; }
};

/// Flags every tick where the storage grows by more than the supplied work
/// f_ext(k)' twist(k+1) dt plus `tol`.
AuditReport passivity_audit(const std::vector<AuditRecord>& log, double tol = 1e-4);

}  // namespace vaufic

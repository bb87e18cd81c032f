#include "vaufic/energy_tanks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vaufic {

void TankConfig::validate(const char* prefix) const {
  const std::string p(prefix);
  if (!(s_lower > 0.0)) throw std::invalid_argument(p + ".s_lower must be > 0");
  if (!(s_upper > s_lower)) throw std::invalid_argument(p + ".s_upper must exceed s_lower");
  if (!(ramp_eps > 0.0)) throw std::invalid_argument(p + ".ramp_eps must be > 0");
  if (!(x0 > 0.0)) throw std::invalid_argument(p + ".x0 must be > 0");
  const double s0 = 0.5 * x0 * x0;
  if (s0 < s_lower || s0 > s_upper) {
    throw std::invalid_argument(p + ".x0 puts the initial energy outside [s_lower, s_upper]");
  }
}

int lambda_selector(const Vec6& x_dot, const Wrench& f_f) {
  return x_dot.dot(f_f.vector()) < 0.0 ? 1 : 0;
}

double valve_sigma(double s_t, double s_lower, double eps) {
  if (s_t <= s_lower) return 0.0;
  return std::min(1.0, (s_t - s_lower) / eps);
}

double gate_beta(double s_t, double s_upper, double eps) {
  if (s_t >= s_upper) return 0.0;
  return std::min(1.0, (s_upper - s_t) / eps);
}

TankOutputs tank_outputs(const TankState& tank) {
  const double s = tank.energy();
  return TankOutputs{valve_sigma(s, tank.s_lower, tank.eps), gate_beta(s, tank.s_upper, tank.eps), 0};
}

TankStep tank_apply(const TankState& tank, const TankOutputs& outputs, double delta_e) {
  if (!(tank.x_t > 0.0)) throw std::logic_error("energy tank state x_t must stay positive");
  const double s = tank.energy() + delta_e;
  const double s_clamped = std::clamp(s, tank.s_lower, tank.s_upper);
  TankStep step{tank, outputs, s - s_clamped};
  step.state.x_t = std::sqrt(2.0 * s_clamped);
  return step;
}

TankStep force_tank_step(const TankState& tank, const Vec6& x_dot, const Mat6& d_c,
                         const Wrench& f_f, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("force_tank_step: dt must be > 0");
  TankOutputs out = tank_outputs(tank);
  out.lambda = lambda_selector(x_dot, f_f);
  const double p_force = x_dot.dot(f_f.vector());
  const double p_diss = x_dot.dot(d_c * x_dot);
  const double power =
      out.lambda * out.beta * (p_diss - p_force) - out.sigma * (1 - out.lambda) * p_force;
  return tank_apply(tank, out, power * dt);
}

TankStep impedance_tank_step(const TankState& tank, const Vec6& x_dot, const Vec6& x_tilde,
                             const Mat6& d_c, const Mat6& k_var, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("impedance_tank_step: dt must be > 0");
  const TankOutputs out = tank_outputs(tank);
  const double p_diss = x_dot.dot(d_c * x_dot);
  const double p_spring = (k_var * x_tilde).dot(x_dot);
  return tank_apply(tank, out, (out.beta * p_diss + out.sigma * p_spring) * dt);
}

TankStep force_tank_exchange(const TankState& tank, const TankOutputs& out, double e_diss,
                             double w_force) {
  double delta = 0.0;
  if (out.lambda == 1) {
    delta = out.beta * std::max(0.0, e_diss);
    delta += w_force > 0.0 ? -w_force : -out.beta * w_force;
  } else {
    delta = -out.sigma * w_force;
  }
  return tank_apply(tank, out, delta);
}

TankStep impedance_tank_exchange(const TankState& tank, const TankOutputs& out, double e_diss,
                                 double w_spring) {
  return tank_apply(tank, out, out.beta * std::max(0.0, e_diss) + out.sigma * w_spring);
}

AuditReport passivity_audit(const std::vector<AuditRecord>& log, double tol) {
  AuditReport rep;
  if (log.size() < 2) return rep;
  rep.ticks = log.size() - 1;
  bool first = true;
  for (std::size_t k = 0; k + 1 < log.size(); ++k) {
    const double dt = log[k + 1].t - log[k].t;
    const double supplied = log[k].f_ext_on_robot.dot(log[k + 1].twist) * dt;
    const double excess = log[k + 1].storage() - log[k].storage() - supplied;
    rep.total_supplied += supplied;
    if (excess > tol) ++rep.violations;
    if (first || excess > rep.worst_excess) {
      rep.worst_excess = excess;
      rep.worst_t = log[k].t;
      first = false;
    }
  }
  return rep;
}

}  // namespace vaufic

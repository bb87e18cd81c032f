#include "vaufic/alignment_monitor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vaufic {

void MonitorConfig::validate() const {
  if (!(alpha >= 0.0)) throw std::invalid_argument("monitor.alpha must be >= 0");
  if (!(xi >= 0.0)) throw std::invalid_argument("monitor.xi must be >= 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("monitor.gamma must be >= 0");
  if (!(c_m > 0.0)) throw std::invalid_argument("monitor.c_m must be > 0");
  if (!(rho_min > 0.0)) throw std::invalid_argument("monitor.rho_min must be > 0");
  if (!(delta_c > 0.0)) throw std::invalid_argument("monitor.delta_c must be > 0");
  if (!(rho_trigger >= 0.0 && rho_trigger < 1.0)) {
    throw std::invalid_argument("monitor.rho_trigger must lie in [0, 1)");
  }
}

double alignment_metric(const Wrench& f_ext_ee, const Vec6& x_tilde_ee, double theta, double l_s,
                        const MonitorConfig& cfg) {
  f_ext_ee.expect(Frame::ee, "alignment_metric");
  const double work = std::abs(f_ext_ee.vector().dot(x_tilde_ee));
  return std::abs(cfg.alpha * work + cfg.xi * theta + cfg.gamma * l_s);
}

double normalized_coefficient(double c, double c_m) { return 1.0 - c / c_m; }

double rho_align_step(double rho_align, double h, double dt, const MonitorConfig& cfg) {
  if (!(dt > 0.0)) throw std::invalid_argument("rho_align_step: dt must be > 0");
  const double rho = h * rho_align + cfg.rho_min;
  double rate = rho;
  if (rho_align >= 1.0) {
    rate = std::min(rho, 0.0);
  } else if (rho_align <= 0.0) {
    rate = std::max(rho, 0.0);
  }
  return std::clamp(rho_align + rate * dt, 0.0, 1.0);
}

double rho_frc(const Wrench& f_d_ee, const Vec6& x_tilde_ee, double delta_c) {
  f_d_ee.expect(Frame::ee, "rho_frc");
  if (f_d_ee.vector().dot(x_tilde_ee) <= 0.0) return 1.0;
  const double z = x_tilde_ee(2);
  if (z > 0.0 && z <= delta_c) return 0.5 * (1.0 + std::cos(3.14159265358979323846 * z / delta_c));
  return 0.0;
}

bool realignment_trigger(const ShapingState& state, const MonitorConfig& cfg) {
  return state.rho_align <= cfg.rho_trigger;
}

}  // namespace vaufic

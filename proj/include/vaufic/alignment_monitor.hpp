#pragma once

#include "vaufic/spatial_math.hpp"

namespace vaufic {

struct MonitorConfig {
  double alpha = 1.0;
  double xi = 0.08;
  double gamma = 10.0;
  double c_m = 0.9;
  double rho_min = 0.001;
  double delta_c = 0.04;       // m
  double rho_trigger = 1e-3;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct ShapingState {
  double rho_align = 0.0;
  double rho_frc = 1.0;
  double c = 0.0;
  double h = 1.0;
};

/// |alpha * |f_ext . x_tilde| + xi * theta + gamma * l_s| using the full
/// 6-vector inner product. Both inputs are in the ee frame.
double alignment_metric(const Wrench& f_ext_ee, const Vec6& x_tilde_ee, double theta, double l_s,
                        const MonitorConfig& cfg);

/// 1 - C / C_m, unclamped.
double normalized_coefficient(double c, double c_m);

/// One explicit Euler step of the saturated rho_align dynamics, clamped to [0, 1].
double rho_align_step(double rho_align, double h, double dt, const MonitorConfig& cfg);

/// Force shaping gate from the desired wrench and the ee-frame pose error.
double rho_frc(const Wrench& f_d_ee, const Vec6& x_tilde_ee, double delta_c);

bool realignment_trigger(const ShapingState& state, const MonitorConfig& cfg);

}  // namespace vaufic

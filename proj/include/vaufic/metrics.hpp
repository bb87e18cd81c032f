#pragma once

#include <optional>
#include <vector>

#include "vaufic/telemetry.hpp"

namespace vaufic {

struct ErrorStats {
  double mae = 0.0;
  double rmse = 0.0;
  std::size_t samples = 0;
};

/// MAE = mean |e|, RMSE = sqrt(mean e^2). Empty input gives nullopt.
std::optional<ErrorStats> error_stats(const std::vector<double>& errors);

struct RangeStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct Metrics {
  std::size_t ticks = 0;
  std::size_t contact_ticks = 0;
  // Contact phase only (in contact with rho_frc > 0.5); nullopt when empty.
  std::optional<ErrorStats> position[3];  // p - p_d, base x/y/z
  std::optional<ErrorStats> force_z;      // f_ext_z - f_d_z, ee frame
  std::optional<ErrorStats> surface_z;    // z - (h + r - f_d / k_n)
  RangeStats s_i, s_f, rho_align, rho_frc;
};

bool in_contact_phase(const TelemetryRow& row);

Metrics compute_metrics(const std::vector<TelemetryRow>& rows);

}  // namespace vaufic

#include <string>

#include "vaufic/energy_tanks.hpp"

namespace vaufic {

/// Plain-text report: per-axis position errors, force errors, surface
/// tracking, tank ranges, shaping statistics and the passivity audit.
/// `wall_seconds` is printed when known.
std::string format_report(const Metrics& m, const AuditReport& audit, double wall_seconds = -1.0);

}  // namespace vaufic

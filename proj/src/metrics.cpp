#include "vaufic/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vaufic {

namespace {

RangeStats range_of(const std::vector<TelemetryRow>& rows, double TelemetryRow::*field) {
  RangeStats r;
  if (rows.empty()) return r;
  r.min = std::numeric_limits<double>::infinity();
  r.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& row : rows) {
    const double v = row.*field;
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
    sum += v;
  }
  r.mean = sum / static_cast<double>(rows.size());
  return r;
}

}  // namespace

std::optional<ErrorStats> error_stats(const std::vector<double>& errors) {
  if (errors.empty()) return std::nullopt;
  double abs_sum = 0.0, sq_sum = 0.0;
  for (double e : errors) {
    abs_sum += std::abs(e);
    sq_sum += e * e;
  }
  const auto n = static_cast<double>(errors.size());
  return ErrorStats{abs_sum / n, std::sqrt(sq_sum / n), errors.size()};
}

bool in_contact_phase(const TelemetryRow& row) { return row.in_contact && row.rho_frc > 0.5; }

Metrics compute_metrics(const std::vector<TelemetryRow>& rows) {
  Metrics m;
  m.ticks = rows.size();
  std::vector<double> pos[3], force, surf;
  for (const auto& row : rows) {
    if (!in_contact_phase(row)) continue;
    ++m.contact_ticks;
    for (int a = 0; a < 3; ++a) pos[a].push_back(row.position(a) - row.x_d(a));
    force.push_back(row.f_ext_ee(2) - row.f_d_z);
    surf.push_back(row.position.z() - row.z_ref);
  }
  for (int a = 0; a < 3; ++a) m.position[a] = error_stats(pos[a]);
  m.force_z = error_stats(force);
  m.surface_z = error_stats(surf);
  m.s_i = range_of(rows, &TelemetryRow::s_i);
  m.s_f = range_of(rows, &TelemetryRow::s_f);
  m.rho_align = range_of(rows, &TelemetryRow::rho_align);
  m.rho_frc = range_of(rows, &TelemetryRow::rho_frc);
  return m;
}

}  // namespace vaufic

#include <sstream>

namespace vaufic {

namespace {

void stats_line(std::ostringstream& out, const char* label, const std::optional<ErrorStats>& s,
                const char* unit) {
  out << "  " << label << ": ";
  if (!s) {
    out << "n/a (empty contact phase)\n";
    return;
  }
  out << "MAE " << s->mae << ' ' << unit << ", RMSE " << s->rmse << ' ' << unit << '\n';
}

void range_line(std::ostringstream& out, const char* label, const RangeStats& r) {
  out << "  " << label << ": min " << r.min << ", max " << r.max << ", mean " << r.mean << '\n';
}

}  // namespace

std::string format_report(const Metrics& m, const AuditReport& audit, double wall_seconds) {
  std::ostringstream out;
  out.precision(6);
  out << "ticks: " << m.ticks << " (contact phase " << m.contact_ticks << ")\n";
  out << "position tracking (contact phase)\n";
  stats_line(out, "x", m.position[0], "m");
  stats_line(out, "y", m.position[1], "m");
  stats_line(out, "z", m.position[2], "m");
  out << "force tracking (contact phase)\n";
  stats_line(out, "z force", m.force_z, "N");
  out << "surface following (contact phase)\n";
  stats_line(out, "z - z_ref", m.surface_z, "m");
  out << "tanks\n";
  range_line(out, "S_i [J]", m.s_i);
  range_line(out, "S_f [J]", m.s_f);
  out << "shaping\n";
  range_line(out, "rho_align", m.rho_align);
  range_line(out, "rho_frc", m.rho_frc);
  out << "passivity audit\n";
  out << "  ticks " << audit.ticks << ", violations " << audit.violations << ", worst excess "
      << audit.worst_excess << " J at t=" << audit.worst_t << " s\n";
  out << "  result: " << (audit.passed() ? "PASS" : "FAIL") << '\n';
  if (wall_seconds >= 0.0) out << "wall clock: " << wall_seconds << " s\n";
  return out.str();
}

}  // namespace vaufic

#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vaufic/energy_tanks.hpp"
#include "vaufic/spatial_math.hpp"
#include "vaufic/surface_world.hpp"

namespace vaufic {

class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& what, std::size_t row) : std::runtime_error(what), row_(row) {}
  /// 1-based line number in the file (the header is line 1).
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// One control tick. Pose, twist and storages are the values at the start of
/// the tick; wrenches and gates are the ones applied during it.
struct TelemetryRow {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Eigen::Vector4d quat = Eigen::Vector4d(1, 0, 0, 0);  // w, x, y, z
  Vec6 twist = Vec6::Zero();
  Vec6 f_cmd = Vec6::Zero();     // base frame
  Vec6 f_ext_ee = Vec6::Zero();  // tool on environment, ee frame
  double f_d_z = 0.0;
  double rho_align = 0.0;
  double rho_frc = 0.0;
  double c = 0.0;
  double h = 0.0;
  double theta = 0.0;
  double l_s = 0.0;
  double s_i = 0.0;
  double s_f = 0.0;
  double sigma_i = 0.0;
  double sigma_f = 0.0;
  int lambda = 0;
  double beta_i = 0.0;
  double beta_f = 0.0;
  bool perception_fresh = false;
  Vec3 x_d = Vec3::Zero();
  double e_kin = 0.0;
  double e_spring = 0.0;
  double surface_h = 0.0;
  double z_ref = 0.0;
  bool in_contact = false;
  bool realign = false;

  bool operator==(const TelemetryRow&) const = default;
};

const std::vector<std::string>& telemetry_columns();

void write_telemetry(std::ostream& out, const std::vector<TelemetryRow>& rows);
void write_telemetry(const std::filesystem::path& path, const std::vector<TelemetryRow>& rows);

/// Throws CsvError with the offending line number on malformed input or a
/// header that lacks a required column.
std::vector<TelemetryRow> read_telemetry(std::istream& in);
std::vector<TelemetryRow> read_telemetry(const std::filesystem::path& path);

/// Audit records rebuilt from the logged rows (contact wrench mapped back to
/// the base frame as acting on the robot).
std::vector<AuditRecord> audit_records(const std::vector<TelemetryRow>& rows);

/// Writes trajectory_profile.csv, shaping.csv, forces.csv and tanks.csv into
/// `dir` and returns their paths. The profile table evaluates `surface` at the
/// tool position.
std::vector<std::filesystem::path> export_plots(const std::vector<TelemetryRow>& rows,
                                                const HeightField& surface,
                                                const std::filesystem::path& dir);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace vaufic

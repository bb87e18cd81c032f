#include "vaufic/telemetry.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace vaufic {

namespace {

constexpr std::size_t kFlushEvery = 1000;

// Column order; each entry reads or writes one scalar of a row.
struct Column {
  const char* name;
  double (*get)(const TelemetryRow&);
  void (*set)(TelemetryRow&, double);
};

#define VAUF_COL(name, expr)                                         \
  Column {                                                           \
    name, [](const TelemetryRow& r) -> double { return r.expr; },    \
        [](TelemetryRow& r, double v) { r.expr = v; }                \
  }
#define VAUF_FLAG(name, member)                                                      \
  Column {                                                                           \
    name, [](const TelemetryRow& r) -> double { return r.member ? 1.0 : 0.0; },      \
        [](TelemetryRow& r, double v) { r.member = v != 0.0; }                       \
  }

const std::vector<Column> kColumns = {
    VAUF_COL("t", t),
    VAUF_COL("px", position(0)), VAUF_COL("py", position(1)), VAUF_COL("pz", position(2)),
    VAUF_COL("qw", quat(0)), VAUF_COL("qx", quat(1)), VAUF_COL("qy", quat(2)), VAUF_COL("qz", quat(3)),
    VAUF_COL("vx", twist(0)), VAUF_COL("vy", twist(1)), VAUF_COL("vz", twist(2)),
    VAUF_COL("wx", twist(3)), VAUF_COL("wy", twist(4)), VAUF_COL("wz", twist(5)),
    VAUF_COL("fcmd_fx", f_cmd(0)), VAUF_COL("fcmd_fy", f_cmd(1)), VAUF_COL("fcmd_fz", f_cmd(2)),
    VAUF_COL("fcmd_tx", f_cmd(3)), VAUF_COL("fcmd_ty", f_cmd(4)), VAUF_COL("fcmd_tz", f_cmd(5)),
    VAUF_COL("fext_fx", f_ext_ee(0)), VAUF_COL("fext_fy", f_ext_ee(1)), VAUF_COL("fext_fz", f_ext_ee(2)),
    VAUF_COL("fext_tx", f_ext_ee(3)), VAUF_COL("fext_ty", f_ext_ee(4)), VAUF_COL("fext_tz", f_ext_ee(5)),
    VAUF_COL("fd_z", f_d_z),
    VAUF_COL("rho_align", rho_align), VAUF_COL("rho_frc", rho_frc),
    VAUF_COL("C", c), VAUF_COL("h", h), VAUF_COL("theta", theta), VAUF_COL("l_s", l_s),
    VAUF_COL("S_i", s_i), VAUF_COL("S_f", s_f),
    VAUF_COL("sigma_i", sigma_i), VAUF_COL("sigma_f", sigma_f),
    Column{"lambda", [](const TelemetryRow& r) -> double { return r.lambda; },
           [](TelemetryRow& r, double v) { r.lambda = static_cast<int>(v); }},
    VAUF_COL("beta_i", beta_i), VAUF_COL("beta_f", beta_f),
    VAUF_FLAG("perception_fresh", perception_fresh),
    VAUF_COL("xd_x", x_d(0)), VAUF_COL("xd_y", x_d(1)), VAUF_COL("xd_z", x_d(2)),
    VAUF_COL("e_kin", e_kin), VAUF_COL("e_spring", e_spring),
    VAUF_COL("surface_h", surface_h), VAUF_COL("z_ref", z_ref),
    VAUF_FLAG("in_contact", in_contact), VAUF_FLAG("realign", realign),
};

#undef VAUF_COL
#undef VAUF_FLAG

double parse_double(std::string_view field, std::size_t line, const std::string& column) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = field.data() + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw CsvError("telemetry line " + std::to_string(line) + ": column '" + column +
                       "' holds '" + std::string(field) + "', not a number",
                   line);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

const std::vector<std::string>& telemetry_columns() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (std::size_t i = 0; i < kColumns.size(); ++i) n.emplace_back(kColumns[i].name);
    return n;
  }();
  return names;
}

void write_telemetry(std::ostream& out, const std::vector<TelemetryRow>& rows) {
  const std::size_t n = kColumns.size();
  for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << kColumns[i].name;
  out << '\n';
  std::string line;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    line.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (i) line += ',';
      line += format_double(kColumns[i].get(rows[r]));
    }
    line += '\n';
    out << line;
    if ((r + 1) % kFlushEvery == 0) out.flush();
  }
  out.flush();
}

void write_telemetry(const std::filesystem::path& path, const std::vector<TelemetryRow>& rows) {
  auto out = open_out(path);
  write_telemetry(out, rows);
}

std::vector<TelemetryRow> read_telemetry(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("telemetry: empty file, no header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split(line);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(std::string(header[i]), i);

  const std::size_t n = kColumns.size();
  std::vector<std::size_t> where(n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto it = index.find(kColumns[c].name);
    if (it == index.end()) {
      throw CsvError(std::string("telemetry header lacks column '") + kColumns[c].name + "'", 1);
    }
    where[c] = it->second;
  }

  std::vector<TelemetryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw CsvError("telemetry line " + std::to_string(line_no) + ": expected " +
                         std::to_string(header.size()) + " fields, found " +
                         std::to_string(fields.size()),
                     line_no);
    }
    TelemetryRow row;
    for (std::size_t c = 0; c < n; ++c) {
      kColumns[c].set(row, parse_double(fields[where[c]], line_no, kColumns[c].name));
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<TelemetryRow> read_telemetry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open telemetry file " + path.string(), 0);
  return read_telemetry(in);
}

std::vector<AuditRecord> audit_records(const std::vector<TelemetryRow>& rows) {
  std::vector<AuditRecord> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const Eigen::Quaterniond q(row.quat(0), row.quat(1), row.quat(2), row.quat(3));
    const Mat3 r = q.normalized().toRotationMatrix();
    AuditRecord rec;
    rec.t = row.t;
    rec.twist = row.twist;
    rec.f_ext_on_robot.head<3>() = -r * row.f_ext_ee.head<3>();
    rec.f_ext_on_robot.tail<3>() = -r * row.f_ext_ee.tail<3>();
    rec.e_kin = row.e_kin;
    rec.e_spring = row.e_spring;
    rec.s_i = row.s_i;
    rec.s_f = row.s_f;
    out.push_back(rec);
  }
  return out;
}

std::vector<std::filesystem::path> export_plots(const std::vector<TelemetryRow>& rows,
                                                const HeightField& surface,
                                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<std::filesystem::path> paths = {
      dir / "trajectory_profile.csv", dir / "shaping.csv", dir / "forces.csv", dir / "tanks.csv"};

  auto profile = open_out(paths[0]);
  profile << "t,y,z_tool,h_y,z_ref,in_contact\n";
  auto shaping = open_out(paths[1]);
  shaping << "t,rho_align,rho_frc,C,h,theta,l_s,realign\n";
  auto forces = open_out(paths[2]);
  forces << "t,fext_x,fext_y,fext_z,fd_z,fcmd_x,fcmd_y,fcmd_z\n";
  auto tanks = open_out(paths[3]);
  tanks << "t,S_i,S_f,sigma_i,sigma_f,beta_i,beta_f,lambda\n";

  auto f = [](double v) { return format_double(v); };
  for (const auto& r : rows) {
    const double x = r.position.x(), y = r.position.y();
    const double h_y = surface.contains(x, y) ? height(surface, x, y) : std::nan("");
    profile << f(r.t) << ',' << f(y) << ',' << f(r.position.z()) << ',' << f(h_y) << ','
            << f(r.z_ref) << ',' << (r.in_contact ? 1 : 0) << '\n';
    shaping << f(r.t) << ',' << f(r.rho_align) << ',' << f(r.rho_frc) << ',' << f(r.c) << ','
            << f(r.h) << ',' << f(r.theta) << ',' << f(r.l_s) << ',' << (r.realign ? 1 : 0) << '\n';
    forces << f(r.t) << ',' << f(r.f_ext_ee(0)) << ',' << f(r.f_ext_ee(1)) << ','
           << f(r.f_ext_ee(2)) << ',' << f(r.f_d_z) << ',' << f(r.f_cmd(0)) << ','
           << f(r.f_cmd(1)) << ',' << f(r.f_cmd(2)) << '\n';
    tanks << f(r.t) << ',' << f(r.s_i) << ',' << f(r.s_f) << ',' << f(r.sigma_i) << ','
          << f(r.sigma_f) << ',' << f(r.beta_i) << ',' << f(r.beta_f) << ',' << r.lambda << '\n';
  }
  return paths;
}

}  // namespace vaufic

#include "vaufic/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace vaufic {

namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

std::string trim(std::string_view s) {
  auto b = s.begin(), e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

double to_double(const ConfigEntry& e, std::string_view text) {
  double v = 0.0;
  const char* b = text.data();
  const char* end = text.data() + text.size();
  if (b != end && *b == '+') ++b;
  const auto res = std::from_chars(b, end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("config key '" + e.key + "': '" + std::string(text) + "' is not a number",
                      e.key);
  }
  return v;
}

double number(const ConfigEntry& e) { return to_double(e, e.value); }

std::vector<double> numbers(const ConfigEntry& e, std::size_t count) {
  std::string text = e.value;
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(e, tok));
  if (out.size() != count) {
    throw ConfigError("config key '" + e.key + "' needs " + std::to_string(count) +
                          " numbers, got " + std::to_string(out.size()),
                      e.key);
  }
  return out;
}

Vec6 vec6(const ConfigEntry& e) {
  const auto v = numbers(e, 6);
  return Eigen::Map<const Vec6>(v.data());
}

long integer(const ConfigEntry& e) {
  const double v = number(e);
  if (v != std::floor(v)) {
    throw ConfigError("config key '" + e.key + "' must be an integer", e.key);
  }
  return static_cast<long>(v);
}

bool boolean(const ConfigEntry& e) {
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + e.key + "' must be true or false", e.key);
}

using Setter = std::function<void(Scenario&, const ConfigEntry&)>;

void add_tank(std::map<std::string, Setter>& m, const std::string& prefix,
              TankConfig Scenario::*tank) {
  m[prefix + ".x0"] = [tank](Scenario& s, const ConfigEntry& e) { (s.*tank).x0 = number(e); };
  m[prefix + ".s_upper"] = [tank](Scenario& s, const ConfigEntry& e) { (s.*tank).s_upper = number(e); };
  m[prefix + ".s_lower"] = [tank](Scenario& s, const ConfigEntry& e) { (s.*tank).s_lower = number(e); };
  m[prefix + ".ramp_eps"] = [tank](Scenario& s, const ConfigEntry& e) { (s.*tank).ramp_eps = number(e); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    m["scenario.base"] = [](Scenario&, const ConfigEntry&) {};
    m["scenario.name"] = [](Scenario& s, const ConfigEntry& e) { s.name = e.value; };

    m["surface.kind"] = [](Scenario& s, const ConfigEntry& e) {
      if (e.value == "flat") {
        s.surface.kind = SurfaceKind::flat;
      } else if (e.value == "sinusoid") {
        s.surface.kind = SurfaceKind::sinusoid;
      } else {
        throw ConfigError("config key 'surface.kind' must be flat or sinusoid", e.key);
      }
    };
    m["surface.amplitude"] = [](Scenario& s, const ConfigEntry& e) { s.surface.amplitude = number(e); };
    m["surface.period"] = [](Scenario& s, const ConfigEntry& e) { s.surface.period = number(e); };
    m["surface.phase"] = [](Scenario& s, const ConfigEntry& e) { s.surface.phase = number(e); };
    m["surface.offset"] = [](Scenario& s, const ConfigEntry& e) { s.surface.offset = number(e); };
    m["surface.x_min"] = [](Scenario& s, const ConfigEntry& e) { s.surface.x_min = number(e); };
    m["surface.x_max"] = [](Scenario& s, const ConfigEntry& e) { s.surface.x_max = number(e); };
    m["surface.y_min"] = [](Scenario& s, const ConfigEntry& e) { s.surface.y_min = number(e); };
    m["surface.y_max"] = [](Scenario& s, const ConfigEntry& e) { s.surface.y_max = number(e); };
    m["surface.mu"] = [](Scenario& s, const ConfigEntry& e) { s.surface.mu = number(e); };
    m["surface.k_n"] = [](Scenario& s, const ConfigEntry& e) { s.surface.k_n = number(e); };
    m["surface.d_n"] = [](Scenario& s, const ConfigEntry& e) { s.surface.d_n = number(e); };

    m["camera.fov_deg"] = [](Scenario& s, const ConfigEntry& e) {
      const auto v = numbers(e, 2);
      s.camera.fov_h = v[0] * kDeg;
      s.camera.fov_v = v[1] * kDeg;
    };
    m["camera.cols"] = [](Scenario& s, const ConfigEntry& e) { s.camera.cols = static_cast<int>(integer(e)); };
    m["camera.rows"] = [](Scenario& s, const ConfigEntry& e) { s.camera.rows = static_cast<int>(integer(e)); };
    m["camera.noise_sigma"] = [](Scenario& s, const ConfigEntry& e) { s.camera.noise_sigma = number(e); };
    m["camera.range_min"] = [](Scenario& s, const ConfigEntry& e) { s.camera.range_min = number(e); };
    m["camera.range_max"] = [](Scenario& s, const ConfigEntry& e) { s.camera.range_max = number(e); };
    m["camera.mount_offset"] = [](Scenario& s, const ConfigEntry& e) {
      s.camera.mount.position = Vec3(0.0, 0.0, -number(e));
    };

    m["perception.k"] = [](Scenario& s, const ConfigEntry& e) { s.perception.k = static_cast<int>(integer(e)); };
    m["perception.angle_thresh_deg"] = [](Scenario& s, const ConfigEntry& e) {
      s.perception.angle_thresh = number(e) * kDeg;
    };
    m["perception.min_segment_size"] = [](Scenario& s, const ConfigEntry& e) {
      s.perception.min_segment_size = static_cast<int>(integer(e));
    };

    m["controller.k_max"] = [](Scenario& s, const ConfigEntry& e) { s.controller.k_max = vec6(e); };
    m["controller.damping"] = [](Scenario& s, const ConfigEntry& e) { s.controller.damping = vec6(e); };
    m["controller.kp"] = [](Scenario& s, const ConfigEntry& e) { s.controller.kp = vec6(e); };
    m["controller.ki"] = [](Scenario& s, const ConfigEntry& e) { s.controller.ki = vec6(e); };
    m["controller.integral_limit"] = [](Scenario& s, const ConfigEntry& e) {
      s.controller.integral_limit = number(e);
    };
    m["controller.filter_T"] = [](Scenario& s, const ConfigEntry& e) { s.controller.filter_T = number(e); };
    m["controller.d_floor"] = [](Scenario& s, const ConfigEntry& e) { s.controller.d_floor = number(e); };

    m["monitor.alpha"] = [](Scenario& s, const ConfigEntry& e) { s.monitor.alpha = number(e); };
    m["monitor.xi"] = [](Scenario& s, const ConfigEntry& e) { s.monitor.xi = number(e); };
    m["monitor.gamma"] = [](Scenario& s, const ConfigEntry& e) { s.monitor.gamma = number(e); };
    m["monitor.c_m"] = [](Scenario& s, const ConfigEntry& e) { s.monitor.c_m = number(e); };
    m["monitor.rho_min"] = [](Scenario& s, const ConfigEntry& e) { s.monitor.rho_min = number(e); };
    m["monitor.delta_c"] = [](Scenario& s, const ConfigEntry& e) { s.monitor.delta_c = number(e); };
    m["monitor.rho_trigger"] = [](Scenario& s, const ConfigEntry& e) { s.monitor.rho_trigger = number(e); };
    m["monitor.rho_align0"] = [](Scenario& s, const ConfigEntry& e) { s.rho_align0 = number(e); };

    add_tank(m, "tanks.force", &Scenario::tank_force);
    add_tank(m, "tanks.impedance", &Scenario::tank_impedance);
    m["tanks.disable_valves"] = [](Scenario& s, const ConfigEntry& e) { s.disable_valves = boolean(e); };

    m["policy.amplitude"] = [](Scenario& s, const ConfigEntry& e) { s.policy.amplitude = number(e); };
    m["policy.omega"] = [](Scenario& s, const ConfigEntry& e) { s.policy.omega = number(e); };
    m["policy.drift"] = [](Scenario& s, const ConfigEntry& e) { s.policy.drift = number(e); };
    m["policy.force"] = [](Scenario& s, const ConfigEntry& e) { s.policy.force = number(e); };

    m["plant.m_c"] = [](Scenario& s, const ConfigEntry& e) { s.plant.m_c = vec6(e); };
    m["plant.tool_radius"] = [](Scenario& s, const ConfigEntry& e) { s.plant.tool_radius = number(e); };
    m["plant.max_speed"] = [](Scenario& s, const ConfigEntry& e) { s.plant.max_speed = number(e); };

    m["start.x"] = [](Scenario& s, const ConfigEntry& e) { s.start.x = number(e); };
    m["start.y"] = [](Scenario& s, const ConfigEntry& e) { s.start.y = number(e); };
    m["start.clearance"] = [](Scenario& s, const ConfigEntry& e) { s.start.clearance = number(e); };
    m["start.tilt_deg"] = [](Scenario& s, const ConfigEntry& e) { s.start.tilt = number(e) * kDeg; };

    m["runtime.duration"] = [](Scenario& s, const ConfigEntry& e) { s.duration = number(e); };
    m["runtime.dt_control"] = [](Scenario& s, const ConfigEntry& e) { s.dt_control = number(e); };
    m["runtime.dt_perception"] = [](Scenario& s, const ConfigEntry& e) { s.dt_perception = number(e); };
    m["runtime.contact_settle"] = [](Scenario& s, const ConfigEntry& e) { s.contact_settle = number(e); };
    m["runtime.seed"] = [](Scenario& s, const ConfigEntry& e) {
      const long v = integer(e);
      if (v < 0) throw ConfigError("config key 'runtime.seed' must be >= 0", e.key);
      s.seed = static_cast<std::uint64_t>(v);
    };
    return m;
  }();
  return table;
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::string_view text, const std::string& origin) {
  std::vector<ConfigEntry> out;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto cut = raw.find_first_of("#;");
    const std::string line = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": missing key before '='");
    out.push_back(ConfigEntry{section.empty() ? key : section + "." + key,
                              trim(line.substr(eq + 1)), line_no});
  }
  return out;
}

ConfigEntry parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || trim(text.substr(0, eq)).empty()) {
    throw ConfigError("override '" + text + "' must look like key=value");
  }
  return ConfigEntry{trim(text.substr(0, eq)), trim(text.substr(eq + 1)), 0};
}

Scenario scenario_from_entries(const std::vector<ConfigEntry>& entries) {
  Scenario s = Scenario::reference();
  for (const auto& e : entries) {
    if (e.key != "scenario.base") continue;
    if (e.value == "reference") {
      s = Scenario::reference();
    } else if (e.value == "flat") {
      s = Scenario::flat();
    } else {
      throw ConfigError("config key 'scenario.base' must be reference or flat", e.key);
    }
  }
  const auto& table = setters();
  for (const auto& e : entries) {
    const auto it = table.find(e.key);
    if (it == table.end()) {
      const std::string at = e.line > 0 ? " (line " + std::to_string(e.line) + ")" : "";
      throw ConfigError("unknown config key '" + e.key + "'" + at, e.key);
    }
    it->second(s, e);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, const std::vector<ConfigEntry>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto entries = parse_config(buf.str(), path.string());
  entries.insert(entries.end(), overrides.begin(), overrides.end());
  Scenario s = scenario_from_entries(entries);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  return s;
}

std::vector<std::string> scenario_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

}  // namespace vaufic

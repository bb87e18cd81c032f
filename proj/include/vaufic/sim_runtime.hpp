#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vaufic/alignment_monitor.hpp"
#include "vaufic/depth_camera.hpp"
#include "vaufic/energy_tanks.hpp"
#include "vaufic/perception.hpp"
#include "vaufic/spatial_math.hpp"
#include "vaufic/surface_world.hpp"
#include "vaufic/telemetry.hpp"
#include "vaufic/ufic_controller.hpp"

namespace vaufic {

class SimAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlantConfig {
  Vec6 m_c = (Vec6() << 5, 5, 5, 0.3, 0.3, 0.3).finished();  // kg, kg m^2
  double tool_radius = 0.01;                                   // m
  double max_speed = 10.0;                                     // m/s, abort above

  void validate() const;
};

struct PlantState {
  Pose pose;
  Vec6 twist = Vec6::Zero();  // [v; w], base frame
};

struct PolicyConfig {
  double amplitude = 0.04;  // m
  double omega = 2.0;       // rad/s
  double drift = 0.005;     // m/s
  double force = 15.0;      // N along ee z

  void validate() const;
};

struct PolicySample {
  Vec6 x_offset = Vec6::Zero();  // task frame
  Wrench f_d_ee = Wrench::zero(Frame::ee);
};

struct StartConfig {
  double x = 0.0;          // m
  double y = -0.10;        // m
  double clearance = 0.04;  // m between tool and surface
  double tilt = 20.0 * 3.14159265358979323846 / 180.0;  // rad about base x
};

struct Scenario {
  std::string name = "reference";
  HeightField surface;
  CameraModel camera;
  PerceptionConfig perception;
  ControllerConfig controller;
  MonitorConfig monitor;
  double rho_align0 = 0.0;
  TankConfig tank_force = TankConfig::force_default();
  TankConfig tank_impedance = TankConfig::impedance_default();
  bool disable_valves = false;
  PolicyConfig policy;
  PlantConfig plant;
  StartConfig start;
  double duration = 20.0;       // s
  double dt_control = 0.001;    // s
  double dt_perception = 0.3;   // s
  double contact_settle = 0.2;  // s in contact before the task frame latches
  std::uint64_t seed = 1;

  /// Camera mounted behind the tool along -z_ee, looking along +z_ee.
  static CameraModel default_camera(double mount_offset = 0.25);
  static Scenario reference();
  static Scenario flat();

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;
  int perception_stride() const;
};

/// Offsets [A sin(wt), A (cos(wt) - 1) - v t, 0, 0, 0, 0] and the constant
/// desired wrench along ee z.
PolicySample wiping_policy(double t, const PolicyConfig& cfg = {});

/// Semi-implicit Euler on the floating Cartesian body. Throws SimAbort on a
/// non-finite wrench.
PlantState plant_step(const PlantState& state, const Vec6& m_diag, const Wrench& f_cmd,
                      const Wrench& f_ext, double dt);

struct RunResult {
  std::vector<TelemetryRow> rows;
  bool aborted = false;
  std::string abort_reason;
  double wall_seconds = 0.0;
  int perception_updates = 0;
  int perception_failures = 0;
  double tank_clamped = 0.0;  // J discarded by the band clamps
};

RunResult run_scenario(const Scenario& scenario);

}  // namespace vaufic

#include "vaufic/sim_runtime.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include "vaufic/logging.hpp"

namespace vaufic {

namespace {

Rotation nominal_orientation() {
  return Rotation::from_matrix(Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal().toDenseMatrix());
}

Vec6 to_ee(const Rotation& r, const Vec6& v) { return rotate6(r.transpose(), v); }

Pose camera_pose(const Pose& tool, const Pose& mount) {
  return Pose{tool.rotation * mount.rotation, tool.position + tool.rotation * mount.position};
}

struct PendingCloud {
  PointCloud cloud;
  Rotation camera_rotation;
};

}  // namespace

void PlantConfig::validate() const {
  if ((m_c.array() <= 0.0).any()) throw std::invalid_argument("plant.m_c must be > 0");
  if (!(tool_radius > 0.0)) throw std::invalid_argument("plant.tool_radius must be > 0");
  if (!(max_speed > 0.0)) throw std::invalid_argument("plant.max_speed must be > 0");
}

void PolicyConfig::validate() const {
  if (!(amplitude >= 0.0)) throw std::invalid_argument("policy.amplitude must be >= 0");
  if (!(force >= 0.0)) throw std::invalid_argument("policy.force must be >= 0");
  if (!std::isfinite(omega) || !std::isfinite(drift)) {
    throw std::invalid_argument("policy.omega and policy.drift must be finite");
  }
}

CameraModel Scenario::default_camera(double mount_offset) {
  CameraModel cam;
  cam.mount.position = Vec3(0.0, 0.0, -mount_offset);
  cam.noise_sigma = 0.001;
  return cam;
}

Scenario Scenario::reference() {
  Scenario s;
  s.camera = default_camera();
  return s;
}

Scenario Scenario::flat() {
  Scenario s = reference();
  s.name = "flat";
  s.surface = HeightField::flat(0.0, 0.3);
  s.start = StartConfig{0.0, 0.0, 0.002, 0.0};
  s.rho_align0 = 1.0;
  s.policy.amplitude = 0.0;
  s.policy.drift = 0.0;
  return s;
}

void Scenario::validate() const {
  surface.validate();
  camera.validate();
  perception.validate();
  controller.validate();
  monitor.validate();
  tank_force.validate("tanks.force");
  tank_impedance.validate("tanks.impedance");
  policy.validate();
  plant.validate();
  if (!(rho_align0 >= 0.0 && rho_align0 <= 1.0)) {
    throw std::invalid_argument("monitor.rho_align0 must lie in [0, 1]");
  }
  if (!(duration > 0.0)) throw std::invalid_argument("runtime.duration must be > 0");
  if (!(dt_control > 0.0 && dt_control <= 0.01)) {
    throw std::invalid_argument("runtime.dt_control must lie in (0, 0.01]");
  }
  const double ratio = dt_perception / dt_control;
  if (!(dt_perception > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw std::invalid_argument("runtime.dt_perception must be an integer multiple of runtime.dt_control");
  }
  if (!(contact_settle >= 0.0)) throw std::invalid_argument("runtime.contact_settle must be >= 0");
  if (!surface.contains(start.x, start.y)) {
    throw std::invalid_argument("start.x/start.y lie outside the surface patch");
  }
  if (!(start.clearance > -plant.tool_radius)) {
    throw std::invalid_argument("start.clearance must exceed -plant.tool_radius");
  }
}

int Scenario::perception_stride() const {
  return static_cast<int>(std::lround(dt_perception / dt_control));
}

PolicySample wiping_policy(double t, const PolicyConfig& cfg) {
  PolicySample s;
  s.x_offset(0) = cfg.amplitude * std::sin(cfg.omega * t);
  s.x_offset(1) = cfg.amplitude * (std::cos(cfg.omega * t) - 1.0) - cfg.drift * t;
  s.f_d_ee.force = Vec3(0.0, 0.0, cfg.force);
  return s;
}

PlantState plant_step(const PlantState& state, const Vec6& m_diag, const Wrench& f_cmd,
                      const Wrench& f_ext, double dt) {
  f_cmd.expect(Frame::base, "plant_step command");
  f_ext.expect(Frame::base, "plant_step contact");
  if (!(dt > 0.0)) throw std::invalid_argument("plant_step: dt must be > 0");
  const Vec6 total = f_cmd.vector() + f_ext.vector();
  if (!total.allFinite()) throw SimAbort("plant_step: non-finite wrench");

  PlantState next;
  next.twist = state.twist + total.cwiseQuotient(m_diag) * dt;
  next.pose.position = state.pose.position + next.twist.head<3>() * dt;
  next.pose.rotation = rotation_exp(next.twist.tail<3>() * dt) * state.pose.rotation;
  return next;
}

RunResult run_scenario(const Scenario& sc) {
  sc.validate();
  const auto wall_start = std::chrono::steady_clock::now();

  const double dt = sc.dt_control;
  const auto ticks = static_cast<long>(std::llround(sc.duration / dt));
  const int stride = sc.perception_stride();
  const Mat6 m_c = sc.plant.m_c.asDiagonal();
  const Mat6 k_const = Mat6::Zero();
  const Rotation r_task = nominal_orientation();
  const double r_tool = sc.plant.tool_radius;

  RunResult result;
  result.rows.reserve(static_cast<std::size_t>(ticks));

  PlantState plant;
  plant.pose.rotation = Rotation::about_axis(Vec3::UnitX(), sc.start.tilt) * r_task;
  plant.pose.position = Vec3(sc.start.x, sc.start.y,
                             height(sc.surface, sc.start.x, sc.start.y) + r_tool + sc.start.clearance);

  ControllerState ctrl;
  ctrl.x_d = plant.pose;
  Rotation r_input = plant.pose.rotation;

  ShapingState shaping;
  shaping.rho_align = sc.rho_align0;
  TankState tank_f = TankState::from_config(sc.tank_force);
  TankState tank_i = TankState::from_config(sc.tank_impedance);

  Rng rng(sc.seed);
  CameraModel camera = sc.camera;
  std::optional<PendingCloud> pending;
  PerceptionResult percept;  // invalid until the first successful update
  Vec3 n_up = Vec3::UnitZ();  // latest perceived normal, base frame, upward

  bool task_latched = false;
  Vec3 task_origin = Vec3::Zero();
  double t_latch = 0.0;
  double contact_time = 0.0;
  bool trigger_prev = false;
  bool orientation_pending = false;

  auto policy_time = [&](double t) { return task_latched ? t - t_latch : 0.0; };

  for (long k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Rotation& r_ee = plant.pose.rotation;

    const ContactReport contact = contact_wrench(sc.surface, plant.pose, plant.twist, r_tool);
    const Wrench f_env = contact.wrench_on_tool;
    const Vec6 f_ext_ee_v = -to_ee(r_ee, f_env.vector());
    const Wrench f_ext_ee = Wrench::from_vector(f_ext_ee_v, Frame::ee);
    contact_time = contact.in_contact ? contact_time + dt : 0.0;

    // Perception: process the cloud captured one cadence ago, then capture.
    bool fresh = false;
    if (k % stride == 0) {
      if (pending) {
        try {
          percept = perceive(pending->cloud, sc.perception);
          const Vec3 n_base = pending->camera_rotation * percept.n_s_camera;
          n_up = n_base.z() < 0.0 ? -n_base : n_base;
          fresh = true;
          ++result.perception_updates;
        } catch (const NoSegmentError& e) {
          spdlog::debug("perception at t={:.3f}: {}", t, e.what());
          ++result.perception_failures;
        } catch (const DegenerateSegmentError& e) {
          spdlog::debug("perception at t={:.3f}: {}", t, e.what());
          ++result.perception_failures;
        } catch (const std::invalid_argument& e) {
          spdlog::debug("perception at t={:.3f}: {}", t, e.what());
          ++result.perception_failures;
        }
        pending.reset();
      }
      const Pose cam_pose = camera_pose(plant.pose, camera.mount);
      try {
        pending = PendingCloud{render(camera, cam_pose, sc.surface, rng, t), cam_pose.rotation};
      } catch (const EmptyViewError& e) {
        spdlog::debug("camera at t={:.3f}: {}", t, e.what());
        ++result.perception_failures;
      } catch (const DomainError& e) {
        spdlog::debug("camera at t={:.3f}: {}", t, e.what());
        ++result.perception_failures;
      }
    }

    // Policy and realignment.
    const PolicySample pol = wiping_policy(policy_time(t), sc.policy);
    const bool trigger = realignment_trigger(shaping, sc.monitor);
    if (trigger) {
      ctrl.x_d.position = plant.pose.position;
      if (task_latched) task_origin = plant.pose.position - r_task * pol.x_offset.head<3>();
      if (!trigger_prev) orientation_pending = true;
    } else if (task_latched) {
      ctrl.x_d.position = task_origin + r_task * pol.x_offset.head<3>();
    }
    if (orientation_pending && percept.valid) {
      start_orientation_filter(ctrl, r_input, desired_orientation(-n_up, r_input));
      orientation_pending = false;
    }
    trigger_prev = trigger;
    if (ctrl.filter_active) r_input = orientation_filter(ctrl, dt, sc.controller.filter_T);
    ctrl.x_d.rotation = r_input;

    if (!task_latched && !trigger && !ctrl.filter_active && !orientation_pending &&
        contact_time >= sc.contact_settle) {
      task_latched = true;
      t_latch = t;
      task_origin = plant.pose.position;
      ctrl.x_d.position = task_origin;
    }

    // Errors and monitor.
    const Vec6 x_tilde = pose_error(plant.pose, ctrl.x_d);
    const Vec6 x_tilde_ee = to_ee(r_ee, x_tilde);
    const double theta = percept.valid ? percept.theta : 0.0;
    const double l_s = percept.valid ? percept.l_s : 0.0;
    shaping.c = alignment_metric(f_ext_ee, x_tilde_ee, theta, l_s, sc.monitor);
    shaping.h = normalized_coefficient(shaping.c, sc.monitor.c_m);
    shaping.rho_frc = rho_frc(pol.f_d_ee, x_tilde_ee, sc.monitor.delta_c);

    // Controller.
    const Mat6 k_var = variable_stiffness(shaping.rho_align, r_ee, sc.controller.k_max);
    const Mat6 d_c = damping_matrix(k_var, m_c, sc.controller.damping, sc.controller.d_floor);
    const Wrench f_f = force_wrench(pol.f_d_ee, f_ext_ee, ctrl, r_ee, dt, sc.controller);
    const ImpedanceParts parts = impedance_parts(x_tilde, plant.twist, k_const, k_var, d_c);

    TankOutputs out_i = tank_outputs(tank_i);
    TankOutputs out_f = tank_outputs(tank_f);
    out_f.lambda = lambda_selector(plant.twist, f_f);
    if (sc.disable_valves) {
      out_i.sigma = 1.0;
      out_f.sigma = 1.0;
    }
    const Gates gates{shaping.rho_frc, out_f.lambda, out_f.sigma, out_i.sigma};
    const Wrench f_cmd = compose_command(parts, f_f, gates);

    TelemetryRow row;
    row.t = t;
    row.position = plant.pose.position;
    const Eigen::Quaterniond q = r_ee.quaternion();
    row.quat = Eigen::Vector4d(q.w(), q.x(), q.y(), q.z());
    row.twist = plant.twist;
    row.f_cmd = f_cmd.vector();
    row.f_ext_ee = f_ext_ee_v;
    row.f_d_z = pol.f_d_ee.force.z();
    row.rho_align = shaping.rho_align;
    row.rho_frc = shaping.rho_frc;
    row.c = shaping.c;
    row.h = shaping.h;
    row.theta = theta;
    row.l_s = l_s;
    row.s_i = tank_i.energy();
    row.s_f = tank_f.energy();
    row.sigma_i = out_i.sigma;
    row.sigma_f = out_f.sigma;
    row.lambda = out_f.lambda;
    row.beta_i = out_i.beta;
    row.beta_f = out_f.beta;
    row.perception_fresh = fresh;
    row.x_d = ctrl.x_d.position;
    row.e_kin = 0.5 * plant.twist.dot(m_c * plant.twist);
    row.e_spring = 0.5 * x_tilde.dot(k_const * x_tilde);
    const Vec3& p = plant.pose.position;
    if (sc.surface.contains(p.x(), p.y())) {
      row.surface_h = height(sc.surface, p.x(), p.y());
    } else {
      row.surface_h = std::nan("");
    }
    row.z_ref = row.surface_h + r_tool - pol.f_d_ee.force.z() / sc.surface.k_n;
    row.in_contact = contact.in_contact;
    row.realign = trigger;
    result.rows.push_back(row);

    // Plant, then settle the tanks against the work actually done.
    PlantState next;
    try {
      next = plant_step(plant, sc.plant.m_c, f_cmd, f_env, dt);
    } catch (const SimAbort& e) {
      result.aborted = true;
      result.abort_reason = std::string(e.what()) + " at t=" + format_double(t);
      break;
    }
    if (!(next.twist.norm() <= sc.plant.max_speed)) {
      result.aborted = true;
      result.abort_reason = "plant diverged: twist norm " + format_double(next.twist.norm()) +
                            " at t=" + format_double(t);
      break;
    }
    const Vec6& v_next = next.twist;
    const double e_diss = (d_c * plant.twist).dot(v_next) * dt;
    const double w_spring = (k_var * x_tilde).dot(v_next) * dt;
    const double w_force = (shaping.rho_frc * f_f.vector()).dot(v_next) * dt;
    const TankStep step_i = impedance_tank_exchange(tank_i, out_i, e_diss, w_spring);
    const TankStep step_f =
        force_tank_exchange(tank_f, out_f, (1.0 - out_i.beta) * std::max(0.0, e_diss), w_force);
    tank_i = step_i.state;
    tank_f = step_f.state;
    result.tank_clamped += step_i.clamped + step_f.clamped;

    shaping.rho_align = rho_align_step(shaping.rho_align, shaping.h, dt, sc.monitor);
    plant = next;
  }

  if (result.aborted) spdlog::error("simulation aborted: {}", result.abort_reason);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  spdlog::info("{}: {} ticks in {:.2f} s, {} perception updates, {} failed", sc.name,
               result.rows.size(), result.wall_seconds, result.perception_updates,
               result.perception_failures);
  return result;
}

}  // namespace vaufic

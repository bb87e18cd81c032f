#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "vaufic/metrics.hpp"
#include "vaufic/sim_runtime.hpp"

using namespace vaufic;
using oracle::kPi;

TEST_CASE("wiping_policy") {
  const PolicySample p0 = wiping_policy(0.0);
  CHECK(p0.x_offset.isZero());
  CHECK((p0.f_d_ee.vector() - (Vec6() << 0, 0, 15, 0, 0, 0).finished()).norm() == 0.0);
  CHECK(p0.f_d_ee.frame == Frame::ee);

  const PolicySample p = wiping_policy(kPi / 2);
  CHECK(std::abs(p.x_offset(0)) < 1e-15);
  CHECK(p.x_offset(1) == doctest::Approx(0.04 * (std::cos(kPi) - 1) - 0.005 * kPi / 2).epsilon(1e-12));
  CHECK(p.x_offset(1) == doctest::Approx(-0.0879).epsilon(1e-3));
  CHECK(p.x_offset.tail<4>().isZero());

  for (double t : {0.3, 4.0, 17.5}) CHECK(wiping_policy(t).f_d_ee.vector() == p0.f_d_ee.vector());
}

TEST_CASE("plant_step") {
  const Vec6 m = PlantConfig{}.m_c;
  const Wrench none = Wrench::zero(Frame::base);

  SUBCASE("uniform motion") {
    PlantState s;
    s.twist << 0.1, -0.2, 0.05, 0, 0, 0;
    const PlantState n = plant_step(s, m, none, none, 0.001);
    CHECK(n.twist == s.twist);
    CHECK((n.pose.position - Vec3(1e-4, -2e-4, 5e-5)).norm() < 1e-15);
  }
  SUBCASE("constant force from rest") {
    PlantState s;
    const Wrench f = Wrench{Vec3(10, 0, 0), Vec3::Zero(), Frame::base};
    for (int i = 0; i < 1000; ++i) s = plant_step(s, m, f, none, 0.001);
    CHECK(s.twist(0) == doctest::Approx(10.0 / 5.0).epsilon(1e-3));
    CHECK(s.pose.position.x() == doctest::Approx(0.5 * 2.0 * 1.0).epsilon(2e-3));
  }
  SUBCASE("spin about z for one second") {
    PlantState s;
    s.twist(5) = kPi;
    for (int i = 0; i < 1000; ++i) s = plant_step(s, m, none, none, 0.001);
    CHECK((s.pose.rotation.matrix() - oracle::rodrigues(Vec3::UnitZ(), kPi)).norm() < 1e-9);
  }
  SUBCASE("non-finite wrench aborts") {
    const Wrench bad{Vec3(std::numeric_limits<double>::quiet_NaN(), 0, 0), Vec3::Zero(), Frame::base};
    CHECK_THROWS_AS(plant_step(PlantState{}, m, bad, none, 0.001), SimAbort);
    const Wrench inf{Vec3::Zero(), Vec3(0, std::numeric_limits<double>::infinity(), 0), Frame::base};
    CHECK_THROWS_AS(plant_step(PlantState{}, m, none, inf, 0.001), SimAbort);
  }
  SUBCASE("frame tags") {
    CHECK_THROWS_AS(plant_step(PlantState{}, m, Wrench::zero(Frame::ee), none, 0.001), FrameMismatch);
  }
}

TEST_CASE("scenario validation") {
  Scenario s = Scenario::reference();
  CHECK_NOTHROW(s.validate());
  CHECK(s.perception_stride() == 300);
  s.duration = -1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = Scenario::reference();
  s.rho_align0 = 2;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("runs are deterministic") {
  Scenario s = Scenario::reference();
  s.duration = 1.5;
  const RunResult a = run_scenario(s);
  const RunResult b = run_scenario(s);
  REQUIRE_FALSE(a.aborted);
  REQUIRE(a.rows.size() == b.rows.size());
  CHECK(a.rows == b.rows);
  CHECK(a.perception_updates >= 4);
}

TEST_CASE("reference scenario completes") {
  const RunResult r = run_scenario(Scenario::reference());
  CHECK_FALSE(r.aborted);
  CHECK(r.rows.size() >= 20000u);
  for (const auto& row : r.rows) {
    REQUIRE(row.s_i >= 1.0 - 1e-9);
    REQUIRE(row.s_i <= 32.0 + 1e-9);
    REQUIRE(row.s_f >= 1.0 - 1e-9);
    REQUIRE(row.s_f <= 2.0 + 1e-9);
  }
}

TEST_CASE("flat scenario from an aligned start") {
  const RunResult r = run_scenario(Scenario::flat());
  REQUIRE_FALSE(r.aborted);
  double t_reach = -1;
  double sum = 0;
  std::size_t n = 0;
  for (const auto& row : r.rows) {
    if (t_reach < 0 && row.rho_align > 0.99) t_reach = row.t;
    if (row.t >= 10.0) {
      sum += std::abs(row.f_ext_ee(2) - row.f_d_z);
      ++n;
    }
  }
  CHECK(t_reach >= 0.0);
  CHECK(t_reach <= 3.0);
  REQUIRE(n > 0);
  CHECK(sum / n < 0.5);
}

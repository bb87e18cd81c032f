#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vaufic/alignment_monitor.hpp"

using namespace vaufic;

namespace {

Vec6 v6(double a, double b, double c, double d = 0, double e = 0, double f = 0) {
  return (Vec6() << a, b, c, d, e, f).finished();
}

Wrench ee(const Vec6& v) { return Wrench::from_vector(v, Frame::ee); }

}  // namespace

TEST_CASE("alignment_metric") {
  const MonitorConfig cfg;
  CHECK(alignment_metric(Wrench::zero(Frame::ee), Vec6::Zero(), 0, 0, cfg) == 0.0);
  CHECK(alignment_metric(ee(v6(0, 0, -10)), v6(0, 0, 0.005), 0.1, 0.01, cfg) ==
        doctest::Approx(0.158).epsilon(1e-12));
  CHECK(alignment_metric(ee(v6(0, 0, -10)), v6(0, 0, 0.005), 0.0, 0.0, cfg) ==
        doctest::Approx(0.05).epsilon(1e-12));
  CHECK_THROWS_AS(alignment_metric(Wrench::zero(Frame::base), Vec6::Zero(), 0, 0, cfg), FrameMismatch);
}

TEST_CASE("normalized_coefficient") {
  CHECK(normalized_coefficient(0.0, 0.9) == 1.0);
  CHECK(normalized_coefficient(0.45, 0.9) == doctest::Approx(0.5));
  CHECK(normalized_coefficient(1.8, 0.9) == doctest::Approx(-1.0));
}

TEST_CASE("rho_align_step examples") {
  const MonitorConfig cfg;
  CHECK(rho_align_step(1.0, 0.8, 0.001, cfg) == 1.0);
  CHECK(rho_align_step(0.0, -3.0, 0.001, cfg) == doctest::Approx(0.001 * 0.001).epsilon(1e-12));
  CHECK(rho_align_step(0.0, 0.7, 0.001, cfg) == doctest::Approx(0.001 * 0.001).epsilon(1e-12));
  CHECK(rho_align_step(0.5, 0.8, 0.001, cfg) == doctest::Approx(0.500401).epsilon(1e-12));
  CHECK(rho_align_step(1.0, -1.0, 0.001, cfg) == doctest::Approx(1.0 - 0.999 * 0.001).epsilon(1e-12));
  CHECK_THROWS_AS(rho_align_step(0.5, 0.5, 0.0, cfg), std::invalid_argument);
}

TEST_CASE("rho_align stays in [0, 1] and moves continuously under random h") {
  const MonitorConfig cfg;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uh(-3.0, 1.0);
  const double dt = 0.001;
  double rho = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double h = uh(rng);
    const double next = rho_align_step(rho, h, dt, cfg);
    REQUIRE(next >= 0.0);
    REQUIRE(next <= 1.0);
    REQUIRE(std::abs(next - rho) <= (std::abs(h) + cfg.rho_min) * dt + 1e-15);
    rho = next;
  }
}

TEST_CASE("rho_align is monotone and converges for positive h") {
  const MonitorConfig cfg;
  double rho = 0.2;
  double prev = rho;
  int steps = 0;
  while (rho < 1.0 && steps < 100000) {
    rho = rho_align_step(rho, 1.0, 0.001, cfg);
    CHECK(rho >= prev);
    prev = rho;
    ++steps;
  }
  CHECK(rho == 1.0);
  // Growth is about exponential at rate 1, so ln(1 / 0.2) s plus a margin.
  CHECK(steps * 0.001 < std::log(5.0) + 0.1);
}

TEST_CASE("rho_frc branches") {
  const Wrench f_d = ee(v6(0, 0, 15));
  CHECK(rho_frc(f_d, v6(0, 0, -0.01), 0.04) == 1.0);
  CHECK(rho_frc(f_d, v6(0, 0, 0.02), 0.04) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rho_frc(f_d, v6(0, 0, 0.05), 0.04) == 0.0);
  CHECK(rho_frc(f_d, v6(0, 0, 0.04), 0.04) == doctest::Approx(0.0).epsilon(1e-12));

  // Continuous and non-increasing across the band.
  double prev = 1.0;
  for (int i = 1; i <= 400; ++i) {
    const double z = 0.04 * i / 400;
    const double r = rho_frc(f_d, v6(0, 0, z), 0.04);
    CHECK(r <= prev);
    CHECK(prev - r <= oracle::kPi / 2 / 400 + 1e-12);
    prev = r;
  }
  CHECK_THROWS_AS(rho_frc(Wrench::zero(Frame::base), Vec6::Zero(), 0.04), FrameMismatch);
}

TEST_CASE("realignment_trigger") {
  const MonitorConfig cfg;
  ShapingState s;
  s.rho_align = 0.0;
  CHECK(realignment_trigger(s, cfg));
  s.rho_align = 0.5;
  CHECK_FALSE(realignment_trigger(s, cfg));
  s.rho_align = 1e-4;
  CHECK(realignment_trigger(s, cfg));
}

TEST_CASE("monitor config validation") {
  MonitorConfig cfg;
  cfg.c_m = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = MonitorConfig{};
  cfg.rho_trigger = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_NOTHROW(MonitorConfig{}.validate());
}

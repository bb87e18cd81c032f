#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vaufic/spatial_math.hpp"

using namespace vaufic;
using oracle::kPi;

namespace {

Rotation random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> a(0.0, kPi * 0.999);
  return Rotation::from_matrix(oracle::rodrigues(Vec3(n(rng), n(rng), n(rng)), a(rng)));
}

}  // namespace

TEST_CASE("rotation construction rejects non-rotations") {
  CHECK_NOTHROW(Rotation::from_matrix(Mat3::Identity()));
  CHECK_THROWS_AS(Rotation::from_matrix(2.0 * Mat3::Identity()), std::invalid_argument);
  Mat3 reflect = Mat3::Identity();
  reflect(2, 2) = -1.0;
  CHECK_THROWS_AS(Rotation::from_matrix(reflect), std::invalid_argument);
  const Rotation r = Rotation::from_matrix_projected(oracle::rodrigues(Vec3::UnitY(), 0.3) * 1.001);
  CHECK((r.matrix().transpose() * r.matrix() - Mat3::Identity()).norm() < 1e-12);
}

TEST_CASE("rotation_power endpoints") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Rotation a = random_rotation(rng), b = random_rotation(rng);
    CHECK(rotation_power(a, b, 0.0) == a);
    CHECK(rotation_power(a, b, 1.0) == b);
  }
  CHECK_THROWS_AS(rotation_power(Rotation(), Rotation(), 1.5), std::invalid_argument);
  CHECK_THROWS_AS(rotation_power(Rotation(), Rotation(), -0.1), std::invalid_argument);
}

TEST_CASE("rotation_power halfway to 90 degrees about z is 45 degrees") {
  const Rotation target = Rotation::from_matrix(oracle::rodrigues(Vec3::UnitZ(), kPi / 2));
  const Rotation half = rotation_power(Rotation(), target, 0.5);
  CHECK((half.matrix() - oracle::rodrigues(Vec3::UnitZ(), kPi / 4)).norm() < 1e-12);
}

TEST_CASE("rotation_power follows the geodesic") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> z(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Rotation a = random_rotation(rng), b = random_rotation(rng);
    const double zeta = z(rng);
    const double full = oracle::angle_of(a.matrix().transpose() * b.matrix());
    const double part = oracle::angle_of(a.matrix().transpose() * rotation_power(a, b, zeta).matrix());
    CHECK(std::abs(part - zeta * full) < 1e-9);
  }
}

TEST_CASE("rotation_power at a half turn picks the canonical axis") {
  const Rotation target = Rotation::from_matrix(oracle::rodrigues(Vec3(0, -1, 0), kPi));
  const Rotation mid = rotation_power(Rotation(), target, 0.5);
  // Axis made positive in its largest component: +y.
  CHECK((mid.matrix() - oracle::rodrigues(Vec3::UnitY(), kPi / 2)).norm() < 1e-9);
}

TEST_CASE("eig_sym3 on diagonal and isotropic matrices") {
  const SymEigen d = eig_sym3(SymMat3(Vec3(3, 2, 1).asDiagonal()));
  CHECK(d.values(0) == doctest::Approx(3));
  CHECK(d.values(1) == doctest::Approx(2));
  CHECK(d.values(2) == doctest::Approx(1));
  CHECK((d.vectors - Mat3::Identity()).norm() < 1e-12);

  const SymEigen iso = eig_sym3(SymMat3(Mat3::Identity()));
  CHECK((iso.values - Vec3::Ones()).norm() < 1e-12);
  CHECK((iso.vectors.transpose() * iso.vectors - Mat3::Identity()).norm() < 1e-12);
  for (int c = 0; c < 3; ++c) {
    Eigen::Index idx;
    iso.vectors.col(c).cwiseAbs().maxCoeff(&idx);
    CHECK(iso.vectors(idx, c) > 0.0);
  }
}

TEST_CASE("eig_sym3 sorts by magnitude and reconstructs") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Mat3 a;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) a(r, c) = n(rng);
    const Mat3 m = 0.5 * (a + a.transpose());
    const SymEigen e = eig_sym3(SymMat3(m));
    CHECK(std::abs(e.values(0)) >= std::abs(e.values(1)));
    CHECK(std::abs(e.values(1)) >= std::abs(e.values(2)));
    const Mat3 rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    CHECK((rec - m).norm() <= 1e-8 * m.norm());
    for (int c = 0; c < 3; ++c) {
      CHECK((m * e.vectors.col(c) - e.values(c) * e.vectors.col(c)).norm() <= 1e-8 * m.norm());
      Eigen::Index idx;
      e.vectors.col(c).cwiseAbs().maxCoeff(&idx);
      CHECK(e.vectors(idx, c) > 0.0);
    }
    const auto ref = oracle::jacobi_eigenvalues(m);
    for (int c = 0; c < 3; ++c) CHECK(e.values(c) == doctest::Approx(ref[c]).epsilon(1e-9));
  }
}

TEST_CASE("eig_sym3 on a planar point covariance") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> pts;
  for (int i = 0; i < 1000; ++i) pts.emplace_back(u(rng), u(rng), 0.0);
  const Mat3 cov = oracle::covariance(pts);
  const SymEigen e = eig_sym3(SymMat3(cov));
  CHECK(std::abs(e.values(2)) < 1e-9 * cov.trace());
}

TEST_CASE("SymMat3 rejects asymmetric input") {
  Mat3 m = Mat3::Identity();
  m(0, 1) = 1e-3;
  CHECK_THROWS_AS(SymMat3{m}, std::invalid_argument);
}

TEST_CASE("rotate_wrench") {
  const Wrench w{Vec3(1, 2, 3), Vec3(-1, 0.5, 2), Frame::ee};
  const Wrench same = rotate_wrench(Rotation(), w, Frame::ee, Frame::base);
  CHECK(same.force == w.force);
  CHECK(same.torque == w.torque);
  CHECK(same.frame == Frame::base);

  const Rotation rz = Rotation::about_axis(Vec3::UnitZ(), kPi / 2);
  const Wrench fx{Vec3(1, 0, 0), Vec3::Zero(), Frame::ee};
  CHECK((rotate_wrench(rz, fx, Frame::ee, Frame::base).force - Vec3(0, 1, 0)).norm() < 1e-15);

  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Rotation r = random_rotation(rng);
    const Wrench there = rotate_wrench(r, w, Frame::ee, Frame::base);
    const Wrench back = rotate_wrench(r.transpose(), there, Frame::base, Frame::ee);
    CHECK((back.vector() - w.vector()).norm() < 1e-12);
    CHECK(there.force.norm() == doctest::Approx(w.force.norm()).epsilon(1e-12));
    CHECK(there.torque.norm() == doctest::Approx(w.torque.norm()).epsilon(1e-12));
  }
}

TEST_CASE("wrench frame tags are enforced") {
  const Wrench w = Wrench::zero(Frame::ee);
  CHECK_THROWS_AS(rotate_wrench(Rotation(), w, Frame::base, Frame::ee), FrameMismatch);
  CHECK_THROWS_AS(w + Wrench::zero(Frame::base), FrameMismatch);
  CHECK_NOTHROW(w.expect(Frame::ee, "test"));
  CHECK_THROWS_AS(w.expect(Frame::camera, "test"), FrameMismatch);
}

TEST_CASE("rotation_log basic values") {
  CHECK(rotation_log(Rotation()).norm() == 0.0);
  const Vec3 v = rotation_log(Rotation::from_matrix(oracle::rodrigues(Vec3::UnitX(), kPi / 2)));
  CHECK((v - Vec3(kPi / 2, 0, 0)).norm() < 1e-12);
}

TEST_CASE("rotation exp and log round trip against Rodrigues") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> a(0.0, kPi);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 axis = Vec3(n(rng), n(rng), n(rng)).normalized();
    const double angle = a(rng);
    const Mat3 ref = oracle::rodrigues(axis, angle);
    CHECK((rotation_exp(axis * angle).matrix() - ref).norm() < 1e-12);
    const Rotation r = Rotation::from_matrix(ref);
    const Vec3 log = rotation_log(r);
    CHECK(log.norm() <= kPi + 1e-12);
    CHECK((rotation_exp(log).matrix() - ref).norm() < 1e-9);
  }
  // Half turn.
  const Rotation half = Rotation::from_matrix(oracle::rodrigues(Vec3(0, 0, -1), kPi));
  const Vec3 hl = rotation_log(half);
  CHECK((hl - Vec3(0, 0, kPi)).norm() < 1e-9);
}

TEST_CASE("pose_error is actual minus desired") {
  Pose desired;
  desired.position = Vec3(0.1, 0.2, 0.3);
  Pose actual = desired;
  actual.position += Vec3(0.01, 0.0, -0.02);
  actual.rotation = Rotation::about_axis(Vec3::UnitZ(), 0.1) * desired.rotation;
  const Vec6 e = pose_error(actual, desired);
  CHECK((e.head<3>() - Vec3(0.01, 0.0, -0.02)).norm() < 1e-15);
  CHECK((e.tail<3>() - Vec3(0, 0, 0.1)).norm() < 1e-12);
}

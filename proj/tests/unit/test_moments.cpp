#include <random>

#include <doctest.h>
#include <Eigen/Eigenvalues>

#include "qndsqueeze/errors.hpp"
#include "qndsqueeze/moments.hpp"

using namespace qnd;

TEST_CASE("coherent spin states") {
  const MomentState zero = css_atoms(0.0);
  CHECK(zero.mean.isZero());
  CHECK(zero.cov.isZero());

  const MomentState four = css_atoms(4.0);
  CHECK(four.mean == Eigen::Vector3d(0.0, 2.0, 0.0));
  CHECK(four.variance(0) == 1.0);
  CHECK(four.variance(1) == 0.0);
  CHECK(four.variance(2) == 1.0);
  CHECK(four.cov(0, 2) == 0.0);

  CHECK(css_atoms(1.4e6).variance(2) == 3.5e5);
  CHECK_THROWS_AS(css_atoms(-1.0), DomainError);
}

TEST_CASE("coherent light states") {
  CHECK(css_light(0.0, 1).cov.isZero());
  const MomentState eight = css_light(8.0, 1);
  CHECK(eight.cov.diagonal() == Eigen::Vector3d(2.0, 2.0, 2.0));
  CHECK(eight.mean.x() == 4.0);
  CHECK(css_light(8.0, -1).mean.x() == -4.0);
  CHECK_THROWS_AS(css_light(8.0, 0), DomainError);
}

TEST_CASE("rotation angle bookkeeping") {
  RotationAngle a = RotationAngle::scalar(0.3);
  CHECK(a.mean() == 0.3);
  CHECK(a.variance() == 0.0);
  a.add_term("S_z", 2.0, 1.0, 4.0).add_term("F_z", -3.0, 0.5, 1.0);
  CHECK(a.mean() == doctest::Approx(0.3 + 2.0 - 1.5));
  CHECK(a.variance() == doctest::Approx(4.0 * 4.0 + 9.0 * 1.0));
  CHECK_THROWS_AS(a.add_term("x", 1.0, 0.0, -1.0), DomainError);
}

TEST_CASE("rotate_z") {
  const MomentState light = css_light(1e4, 1);

  SUBCASE("identity angle leaves the state unchanged") {
    const MomentState out = rotate_z(light, RotationAngle::scalar(0.0));
    CHECK(out.mean == light.mean);
    CHECK(out.cov == light.cov);
  }

  SUBCASE("scalar angles preserve the covariance spectrum") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::Matrix3d m;
      for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = g(rng);
      MomentState s = light;
      s.cov = m * m.transpose();
      const MomentState out = rotate_z(s, RotationAngle::scalar(g(rng)));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> before(s.cov);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> after(out.cov);
      for (int i = 0; i < 3; ++i) {
        CHECK(after.eigenvalues()(i) == doctest::Approx(before.eigenvalues()(i)).epsilon(1e-12));
      }
      CHECK((out.cov - out.cov.transpose()).norm() < 1e-12);
    }
  }

  SUBCASE("operator angle adds noise along the rotated direction") {
    const double n_ph = 1e4;
    const double n_at = 1e3;
    const double k = 1e-4;
    RotationAngle theta = RotationAngle::scalar(0.0);
    theta.add_term("F_z", -k, 0.0, n_at / 4.0);
    const MomentState out = rotate_z(light, theta);
    const double kappa_sq = 0.25 * k * k * n_at * n_ph;
    CHECK(out.variance(1) - n_ph / 4.0 == doctest::Approx(n_ph / 4.0 * kappa_sq).epsilon(1e-12));
    CHECK(out.mean == light.mean);
    CHECK(out.variance(0) == light.variance(0));
  }
}

TEST_CASE("output beamsplitter") {
  const MomentState light = css_light(10.0, 1);
  const MomentState out = output_beamsplitter(light);
  CHECK(out.mean == Eigen::Vector3d(0.0, -5.0, 0.0));
  CHECK(out.cov == light.cov);

  SUBCASE("S_y maps onto S_dz") {
    MomentState s = light;
    s.cov(1, 1) = 7.0;
    CHECK(output_beamsplitter(s).variance(2) == 7.0);
  }

  SUBCASE("inverse recovers the input") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    MomentState s = light;
    s.mean = {g(rng), g(rng), g(rng)};
    Eigen::Matrix3d m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = g(rng);
    s.cov = m * m.transpose();
    const MomentState back = inverse_output_beamsplitter(output_beamsplitter(s));
    CHECK(back.mean == s.mean);
    CHECK(back.cov == s.cov);
  }

  CHECK_THROWS_AS(output_beamsplitter(css_atoms(10.0)), UsageError);
}

TEST_CASE("linear observable merges shared sources") {
  LinearObservable y;
  y.add("F_z", 2.0, 3.0).add("F_z", 1.0, 3.0).add("S_y", 1.0, 5.0);
  CHECK(y.coefficient("F_z") == 3.0);
  CHECK(y.variance() == doctest::Approx(9.0 * 3.0 + 5.0));
}

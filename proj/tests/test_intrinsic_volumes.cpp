#include <doctest.h>

#include <cmath>
#include <random>

#include "conerf/intrinsic_volumes.hpp"

using namespace conerf::geom;

TEST_CASE("sphere intrinsic volumes, closed values through k = 6") {
  const double pi = M_PI;
  auto check_seq = [](const std::vector<double>& got, const std::vector<double>& want) {
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) {
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
  };
  check_seq(sphere_intrinsic_volumes(1), {2.0});
  check_seq(sphere_intrinsic_volumes(2), {0.0, 2.0 * pi});
  check_seq(sphere_intrinsic_volumes(3), {2.0, 0.0, 4.0 * pi});
  check_seq(sphere_intrinsic_volumes(4), {0.0, 3.0 * pi, 0.0, 2.0 * pi * pi});
  check_seq(sphere_intrinsic_volumes(5), {2.0, 0.0, 8.0 * pi, 0.0, 8.0 * pi * pi / 3.0});
  check_seq(sphere_intrinsic_volumes(6),
            {0.0, 15.0 * pi / 4.0, 0.0, 5.0 * pi * pi, 0.0, pi * pi * pi});
}

TEST_CASE("ball and box intrinsic volumes") {
  const auto ball3 = intrinsic_volumes(Shape::ball(3, 12.5));
  CHECK(ball3[0] == doctest::Approx(1.0));
  CHECK(ball3[1] == doctest::Approx(4.0 * 12.5));  // Euclidean ball: 4R
  CHECK(ball3[2] == doctest::Approx(2.0 * M_PI * 12.5 * 12.5));
  CHECK(ball3[3] == doctest::Approx(4.0 / 3.0 * M_PI * std::pow(12.5, 3)));

  const auto ball1 = intrinsic_volumes(Shape::ball(1, 3.0));
  CHECK(ball1[0] == doctest::Approx(1.0));
  CHECK(ball1[1] == doctest::Approx(6.0));

  const auto box2 = intrinsic_volumes(Shape::box({2.0, 5.0}));
  CHECK(box2[0] == doctest::Approx(1.0));
  CHECK(box2[1] == doctest::Approx(7.0));
  CHECK(box2[2] == doctest::Approx(10.0));
}

TEST_CASE("tube volumes") {
  // Tube around a disk of radius 1 at r = 1 is a disk of radius 2.
  CHECK(tube_volume(Shape::ball(2, 1.0), 1.0) == doctest::Approx(4.0 * M_PI).epsilon(1e-12));
  // Unit square offset by 1: 1 + 4 sides + 4 quarter circles.
  CHECK(tube_volume(Shape::box({1.0, 1.0}), 1.0) == doctest::Approx(1.0 + 4.0 + M_PI).epsilon(1e-12));
  // r = 0 recovers the Lebesgue measure.
  CHECK(tube_volume(Shape::box({2.0, 3.0}), 0.0) == doctest::Approx(6.0));
  // Exact ball identity omega_D (R + r)^D for D <= 4.
  for (int D = 1; D <= 4; ++D) {
    const double R = 1.7, r = 0.4;
    CHECK(tube_volume(Shape::ball(D, R), r) ==
          doctest::Approx(unit_ball_volume(D) * std::pow(R + r, D)).epsilon(1e-12));
  }
  // Spherical shell around S^2.
  const double r = 0.25;
  const double shell = 4.0 / 3.0 * M_PI * (std::pow(1.0 + r, 3) - std::pow(1.0 - r, 3));
  CHECK(tube_volume(Shape::sphere_surface(3), r) == doctest::Approx(shell).epsilon(1e-12));
}

TEST_CASE("detr basics") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  CHECK(detr(eye, 0) == doctest::Approx(1.0));
  CHECK(detr(eye, 1) == doctest::Approx(3.0));
  CHECK(detr(eye, 2) == doctest::Approx(3.0));
  CHECK(detr(eye, 3) == doctest::Approx(1.0));

  Eigen::MatrixXd diag = Eigen::Vector3d(2.0, 3.0, 5.0).asDiagonal();
  CHECK(detr(diag, 2) == doctest::Approx(2.0 * 3.0 + 2.0 * 5.0 + 3.0 * 5.0));
}

TEST_CASE("detr characteristic polynomial identity") {
  // det(A + xI) = sum_j detr_{d-j}(A) x^j on random symmetric matrices.
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 4;
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = unif(gen);
    for (double x : {-0.8, 0.3, 1.9}) {
      const Eigen::MatrixXd shifted = a + x * Eigen::MatrixXd::Identity(d, d);
      double poly = 0.0;
      for (int j = 0; j <= d; ++j) poly += detr(a, d - j) * std::pow(x, j);
      CHECK(shifted.determinant() == doctest::Approx(poly).epsilon(1e-10));
    }
  }
}

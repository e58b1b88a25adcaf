#include <doctest.h>

#include <cmath>
#include <random>

#include "conerf/nnls.hpp"

using namespace conerf;

TEST_CASE("coordinate clipping on the identity design") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);

  Eigen::VectorXd z(2);
  z << 3.0, -1.0;
  FitResult fit = nnls(eye, z);
  CHECK(fit.beta[0] == doctest::Approx(3.0));
  CHECK(fit.beta[1] == doctest::Approx(0.0));
  CHECK(fit.chibar == doctest::Approx(3.0));
  CHECK(fit.active_dim == 1);

  z << 1.0, 2.0;
  fit = nnls(eye, z);
  CHECK(fit.chibar == doctest::Approx(std::sqrt(5.0)));
  CHECK(fit.active_dim == 2);

  z << -1.0, -2.0;
  fit = nnls(eye, z);
  CHECK(fit.chibar == doctest::Approx(0.0));
  CHECK(fit.active_dim == 0);
  CHECK(fit.residual_norm == doctest::Approx(z.norm()));
}

TEST_CASE("point on an edge") {
  Eigen::MatrixXd gens(3, 2);
  gens << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
  const Eigen::VectorXd z = 2.5 * gens.col(0);
  const FitResult fit = all_subsets_project(gens, z);
  CHECK(fit.chibar == doctest::Approx(2.5));
  CHECK(fit.active_dim == 1);
}

TEST_CASE("duplicated column keeps chibar unique") {
  Eigen::MatrixXd gens(3, 3);
  gens.col(0) << 1.0, 0.0, 0.0;
  gens.col(1) << 1.0, 0.0, 0.0;  // duplicate
  gens.col(2) << 0.0, 1.0, 0.0;
  Eigen::VectorXd z(3);
  z << 2.0, 1.5, -0.3;
  const FitResult a = nnls(gens, z);
  const FitResult b = all_subsets_project(gens, z);
  CHECK(a.chibar == doctest::Approx(b.chibar).epsilon(1e-10));
  CHECK(a.chibar == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("oracle equivalence on random instances") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> pick_n(2, 10);
  std::uniform_int_distribution<int> pick_m(1, 6);
  int kkt_failures = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const int n = pick_n(gen);
    const int m = pick_m(gen);
    Eigen::MatrixXd X(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) X(i, j) = normal(gen);
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = normal(gen);

    const FitResult fast = nnls(X, z);
    const FitResult oracle = all_subsets_project(X, z);
    CHECK(std::fabs(fast.chibar - oracle.chibar) <= 1e-8);
    CHECK((fast.fitted - oracle.fitted).norm() <= 1e-8 * (1.0 + oracle.fitted.norm()));
    CHECK(fast.active_dim == oracle.active_dim);
    if (!kkt_satisfied(X, z, fast.beta)) ++kkt_failures;
  }
  CHECK(kkt_failures == 0);
}

TEST_CASE("warm starts do not change the solution") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd X(8, 4);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 4; ++j) X(i, j) = normal(gen);
  std::vector<int> warm = {0, 3};
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXd z(8);
    for (int i = 0; i < 8; ++i) z[i] = normal(gen);
    const FitResult cold = nnls(X, z);
    const FitResult hot = nnls(X, z, &warm);
    CHECK(std::fabs(hot.chibar - cold.chibar) <= 1e-10);
    warm = hot.active_set;
  }
}

TEST_CASE("scale equivariance of chibar") {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd X(6, 3);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j) X(i, j) = normal(gen);
  Eigen::VectorXd z(6);
  for (int i = 0; i < 6; ++i) z[i] = normal(gen);
  const double base = nnls(X, z).chibar;
  for (double c : {0.5, 2.0, 17.0}) {
    CHECK(nnls(X, Eigen::VectorXd(c * z)).chibar == doctest::Approx(c * base).epsilon(1e-10));
  }
}

TEST_CASE("projection ordering") {
  // ||proj onto lineality|| <= chibar <= ||z|| for a cone with a linear part.
  Eigen::MatrixXd gens(4, 3);
  gens.col(0) << 1.0, 0.0, 0.0, 0.0;
  gens.col(1) << -1.0, 0.0, 0.0, 0.0;  // +/- e1: lineality = e1 axis
  gens.col(2) << 0.0, 1.0, 0.0, 0.0;
  std::mt19937_64 gen(31);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd z(4);
    for (int i = 0; i < 4; ++i) z[i] = normal(gen);
    const double chibar = nnls(gens, z).chibar;
    CHECK(std::fabs(z[0]) <= chibar + 1e-10);
    CHECK(chibar <= z.norm() + 1e-10);
  }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "conerf/cone.hpp"
#include "conerf/intrinsic_volumes.hpp"
#include "conerf/nnls.hpp"

using namespace conerf;

namespace {

void check_weights(const std::vector<double>& got, const std::vector<double>& want,
                   double tol = 1e-12) {
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < want.size(); ++i) {
    CHECK(std::fabs(got[i] - want[i]) <= tol);
  }
}

}  // namespace

TEST_CASE("arc cone invariants") {
  const ConeSpec quarter = arc_cone(M_PI / 2.0);
  check_weights(quarter.weights, {0.25, 0.5, 0.25});
  CHECK(quarter.intrinsic_volumes[0] == doctest::Approx(1.0));
  CHECK(quarter.intrinsic_volumes[1] == doctest::Approx(M_PI / 2.0));
  CHECK(quarter.linear_dim == 0);

  const ConeSpec paper = arc_cone(1.06);
  CHECK(paper.weights[1] == doctest::Approx(0.5));
  CHECK(paper.weights[2] == doctest::Approx(1.06 / (2.0 * M_PI)).epsilon(1e-14));
  CHECK(paper.weights[0] == doctest::Approx((M_PI - 1.06) / (2.0 * M_PI)).epsilon(1e-14));
  CHECK(paper.weights[2] == doctest::Approx(0.168704).epsilon(1e-5));
  CHECK(paper.weights[0] == doctest::Approx(0.331296).epsilon(1e-5));

  // Approaching the half plane: p_0 -> 0, closed at alpha = pi with l(U) = 1.
  const ConeSpec near_half = arc_cone(M_PI - 1e-9);
  CHECK(std::fabs(near_half.weights[0]) <= 1e-9);
  CHECK(near_half.linear_dim == 0);
  const ConeSpec half_plane = arc_cone(M_PI);
  check_weights(half_plane.weights, {0.0, 0.5, 0.5});
  CHECK(half_plane.linear_dim == 1);

  CHECK_THROWS_AS(arc_cone(0.0), std::invalid_argument);
  CHECK_THROWS_AS(arc_cone(3.5), std::invalid_argument);
}

TEST_CASE("orthant and sphere cones") {
  const ConeSpec orthant3 = orthant_cone(3);
  check_weights(orthant3.weights, {0.125, 0.375, 0.375, 0.125});
  CHECK(orthant3.linear_dim == 0);
  // Spherical-triangle intrinsic volumes: EC 1, half boundary 3pi/4, area pi/2.
  CHECK(orthant3.intrinsic_volumes[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(orthant3.intrinsic_volumes[1] == doctest::Approx(3.0 * M_PI / 4.0).epsilon(1e-12));
  CHECK(orthant3.intrinsic_volumes[2] == doctest::Approx(M_PI / 2.0).epsilon(1e-12));

  const ConeSpec sphere3 = sphere_cone(3);
  check_weights(sphere3.weights, {0.0, 0.0, 0.0, 1.0});
  CHECK(sphere3.linear_dim == 3);
  const auto want = geom::sphere_intrinsic_volumes(3);
  for (int i = 0; i < 3; ++i)
    CHECK(sphere3.intrinsic_volumes[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("cone angle") {
  Eigen::VectorXd e1(2), e2(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  CHECK(cone_angle(e1, e2) == doctest::Approx(M_PI / 2.0));
  CHECK(cone_angle(e1, e1) == doctest::Approx(0.0));
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(cone_angle(e1, zero), std::invalid_argument);
}

TEST_CASE("weight inversion from intrinsic volumes") {
  check_weights(weights_from_intrinsic_volumes({1.0, M_PI / 2.0}, 3), {0.25, 0.5, 0.25});
  // Arc sequence matches the arc construction.
  const ConeSpec arc = arc_cone(1.06);
  check_weights(weights_from_intrinsic_volumes({1.0, 1.06}, 3), arc.weights, 1e-14);
  // Full sphere: p_k = 1.
  for (int k = 1; k <= 4; ++k) {
    const auto p = weights_from_intrinsic_volumes(geom::sphere_intrinsic_volumes(k), k);
    for (int j = 0; j < k; ++j) CHECK(std::fabs(p[j]) <= 1e-12);
    CHECK(p[k] == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Round trip through the forward map for the orthants.
  for (int k = 1; k <= 4; ++k) {
    const ConeSpec orthant = orthant_cone(k);
    const auto back = weights_from_intrinsic_volumes(orthant.intrinsic_volumes, k);
    check_weights(back, orthant.weights, 1e-12);
  }
  // A negative implied weight is rejected.
  CHECK_THROWS_AS(weights_from_intrinsic_volumes({1.0, 8.0}, 3), std::invalid_argument);
}

TEST_CASE("monte carlo weights match analytic families") {
  auto within_3se = [](const WeightEstimate& est, const std::vector<double>& want) {
    REQUIRE(est.weights.size() == want.size());
    for (size_t j = 0; j < want.size(); ++j) {
      const double se = std::max(est.std_errors[j], 1e-4);
      CHECK(std::fabs(est.weights[j] - want[j]) <= 3.0 * se);
    }
  };
  const int samples = 20000;
  within_3se(weights_monte_carlo(orthant_cone(3).generators, samples, 11),
             orthant_cone(3).weights);
  within_3se(weights_monte_carlo(arc_cone(M_PI / 2.0).generators, samples, 12),
             arc_cone(M_PI / 2.0).weights);
  // Single generator: sign symmetry.
  Eigen::MatrixXd one(3, 1);
  one << 0.6, -0.8, 0.0;
  within_3se(weights_monte_carlo(one, samples, 13), {0.5, 0.5});
}

TEST_CASE("polyhedral cone construction detects rank and lineality") {
  // Two opposite generators span a line: k = 1, l(U) = 1.
  Eigen::MatrixXd line(3, 2);
  line << 1.0, -1.0, 0.5, -0.5, 0.0, 0.0;
  const ConeSpec cone = polyhedral_cone(line, 10000, 5);
  CHECK(cone.span_dim == 1);
  CHECK(cone.linear_dim == 1);
  check_weights(cone.weights, {0.0, 1.0}, 1e-9);

  // A generic 2-generator cone in R^3: k = 2, l = 0.
  Eigen::MatrixXd wedge(3, 2);
  wedge << 1.0, 0.2, 0.1, 1.0, 0.0, 0.3;
  const ConeSpec c2 = polyhedral_cone(wedge, 10000, 6);
  CHECK(c2.span_dim == 2);
  CHECK(c2.linear_dim == 0);
  // Its analytic weights are those of an arc with the generator angle.
  const double alpha = cone_angle(wedge.col(0), wedge.col(1));
  const ConeSpec arc = arc_cone(alpha, 3);
  for (int j = 0; j <= 2; ++j) {
    CHECK(std::fabs(c2.weights[j] - arc.weights[j]) < 0.02);
  }
}

TEST_CASE("monte carlo weights agree with subset enumeration on random cones") {
  std::mt19937_64 gen(42);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 3; ++rep) {
    const int n = 5 + rep;
    const int m = 4 + rep % 2;
    Eigen::MatrixXd gens(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) gens(i, j) = normal(gen);

    const int samples = 10000;
    const WeightEstimate mc = weights_monte_carlo(gens, samples, 100 + rep);

    // Same law, independent stream, counting via the enumeration oracle.
    std::mt19937_64 oracle_gen(900 + rep);
    std::vector<long> counts(mc.weights.size(), 0);
    std::normal_distribution<double> on(0.0, 1.0);
    for (int s = 0; s < samples; ++s) {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z[i] = on(oracle_gen);
      const FitResult fit = all_subsets_project(gens, z);
      const size_t j = std::min<size_t>(fit.active_dim, counts.size() - 1);
      ++counts[j];
    }
    for (size_t j = 0; j < counts.size(); ++j) {
      const double oracle_p = static_cast<double>(counts[j]) / samples;
      const double se = std::sqrt(std::max(oracle_p * (1 - oracle_p), 1e-6) / samples) +
                        std::max(mc.std_errors[j], 1e-4);
      CHECK(std::fabs(mc.weights[j] - oracle_p) <= 3.0 * se);
    }
  }
}

TEST_CASE("cone json round trip") {
  for (const ConeSpec& cone :
       {arc_cone(1.06), orthant_cone(3), sphere_cone(2), arc_cone(M_PI, 4, 1, 3)}) {
    const ConeSpec back = cone_from_json(cone_to_json(cone));
    CHECK(back.provenance == cone.provenance);
    CHECK(back.span_dim == cone.span_dim);
    CHECK(back.linear_dim == cone.linear_dim);
    REQUIRE(back.weights.size() == cone.weights.size());
    for (size_t i = 0; i < cone.weights.size(); ++i)
      CHECK(back.weights[i] == doctest::Approx(cone.weights[i]).epsilon(1e-14));
  }
}

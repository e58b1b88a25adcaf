#include <doctest.h>

#include <cmath>

#include "conerf/inference.hpp"
#include "conerf/lattice.hpp"
#include "conerf/special_functions.hpp"

using namespace conerf;

namespace {

SearchRegion point_region() {
  SearchRegion region;
  region.lkc = {1.0, 0.0, 0.0, 0.0};
  return region;
}

SearchRegion paper_ball_region() {
  SearchRegion region;
  region.lkc = {1.0, 4.0 * M_PI * 12.5, 2.0 * M_PI * 12.5 * 12.5, 8086.0};
  return region;
}

}  // namespace

TEST_CASE("expected EC reduces to the tail on a point region") {
  const SearchRegion point = point_region();
  for (double t : {1.0, 2.0, 4.0}) {
    CHECK(expected_ec(point, StatisticSpec::t(110), t) ==
          doctest::Approx(special::student_upper_tail(t, 110)).epsilon(1e-12));
    CHECK(expected_ec(point, StatisticSpec::gaussian(), t) ==
          doctest::Approx(special::normal_upper_tail(t)).epsilon(1e-12));
  }
}

TEST_CASE("expected EC is linear in the region") {
  SearchRegion a;
  a.lkc = {1.0, 10.0, 20.0, 30.0};
  SearchRegion b;
  b.lkc = {1.0, 30.0, 10.0, 5.0};
  SearchRegion sum;
  sum.lkc = {2.0, 40.0, 30.0, 35.0};
  const StatisticSpec stat = StatisticSpec::chi(3);
  const double t = 2.7;
  CHECK(expected_ec(a, stat, t) + expected_ec(b, stat, t) ==
        doctest::Approx(expected_ec(sum, stat, t)).epsilon(1e-12));
}

TEST_CASE("dimension violations") {
  SearchRegion region;
  region.lkc = {1.0, 5.0, 5.0, 5.0};  // D = 3
  // TIN with nu = 2, l(U) = 0: bound nu + 1 = 3, violated at D = 3.
  const StatisticSpec bad = StatisticSpec::tin(arc_cone(1.0), 2);
  CHECK_THROWS_AS(expected_ec(region, bad, 3.0), std::domain_error);
  const ThresholdResult res = solve_threshold(region, bad, 0.05);
  CHECK_FALSE(res.valid);
  // nu = 3 is allowed.
  CHECK_NOTHROW(expected_ec(region, StatisticSpec::tin(arc_cone(1.0), 3), 3.0));
}

TEST_CASE("threshold solver hits the target level") {
  const SearchRegion region = paper_ball_region();
  for (const StatisticSpec& stat :
       {StatisticSpec::t(110), StatisticSpec::gaussian(),
        StatisticSpec::tin(arc_cone(1.06), 110)}) {
    const ThresholdResult res = solve_threshold(region, stat, 0.05);
    REQUIRE(res.valid);
    CHECK(res.expected_ec_at_threshold == doctest::Approx(0.05).epsilon(1e-8));
    CHECK(expected_ec(region, stat, res.threshold) == doctest::Approx(0.05).epsilon(1e-8));
  }
}

TEST_CASE("threshold is strictly decreasing in alpha") {
  const SearchRegion region = paper_ball_region();
  for (const StatisticSpec& stat :
       {StatisticSpec::t(110), StatisticSpec::f(2, 110),
        StatisticSpec::tin(arc_cone(1.06), 110), StatisticSpec::chibar(arc_cone(1.06)),
        StatisticSpec::tlr(arc_cone(1.06), 112)}) {
    double prev = -1.0;
    for (double alpha : {0.001, 0.01, 0.05, 0.1}) {
      const ThresholdResult res = solve_threshold(region, stat, alpha);
      REQUIRE(res.valid);
      if (prev > 0.0) CHECK(res.threshold < prev);
      prev = res.threshold;
    }
  }
}

TEST_CASE("threshold ordering of the statistic family") {
  // On the reported scales: t < cone < sqrt(2F).
  const SearchRegion region = paper_ball_region();
  const double t_t = solve_threshold(region, StatisticSpec::t(110), 0.05).threshold;
  const double t_in =
      solve_threshold(region, StatisticSpec::tin(arc_cone(1.06), 110), 0.05).threshold;
  const double f_star = solve_threshold(region, StatisticSpec::f(2, 110), 0.05).threshold;
  const double t_f = std::sqrt(2.0 * f_star);
  CHECK(t_t < t_in);
  CHECK(t_in < t_f);
}

TEST_CASE("alpha too large for a tiny region") {
  SearchRegion tiny;
  tiny.lkc = {0.0, 0.0, 0.0, 1e-9};
  CHECK_THROWS_AS(solve_threshold(tiny, StatisticSpec::gaussian(), 0.05), std::runtime_error);
}

TEST_CASE("detection report") {
  LatticeField field;
  field.shape = {6, 6};
  field.spacing = {1.0, 1.0};
  field.values.assign(36, 0.0);

  // Empty report below threshold.
  DetectionReport empty = detect(field, 1.0, 2.0);
  CHECK(empty.clusters.empty());
  CHECK(empty.total_volume == doctest::Approx(0.0));

  // A 2x2 block, a diagonal toucher, and an isolated corner: the diagonal
  // neighbor does not connect under face connectivity, so three clusters.
  for (long i : {7, 8, 13, 14}) field.values[i] = 3.0;
  field.values[35] = 9.0;
  field.values[21] = 2.5;  // (3,3), diagonal from the block corner (2,2)
  DetectionReport rep = detect(field, 2.0, 2.0);
  REQUIRE(rep.clusters.size() == 3);
  CHECK(rep.clusters[0].voxel_count == 4);
  CHECK(rep.clusters[0].volume == doctest::Approx(8.0));
  CHECK(rep.clusters[0].peak == doctest::Approx(3.0));
  CHECK(rep.total_volume == doctest::Approx(12.0));
  CHECK(rep.suprathreshold_voxels == 6);

  // +inf exceeds any threshold; NaN is excluded and counted.
  field.values[0] = std::numeric_limits<double>::infinity();
  field.values[1] = std::numeric_limits<double>::quiet_NaN();
  DetectionReport inf_rep = detect(field, 100.0, 1.0);
  REQUIRE(inf_rep.clusters.size() == 1);
  CHECK(inf_rep.clusters[0].voxel_count == 1);
  CHECK(inf_rep.undefined_voxels == 1);
}

#pragma once

#include <vector>

#include "conerf/ec_density.hpp"
#include "conerf/lattice_field.hpp"

namespace conerf {

// Expected Euler characteristic of the excursion set at t,
// sum_{d=0}^{D} L_d(S) rho_d(t): the P-value approximation for the maximum.
// Returned raw (it can exceed 1 or dip negative at low t); reporting clamps.
// Throws std::domain_error when D >= validity_bound(stat).
double expected_ec(const SearchRegion& region, const StatisticSpec& stat, double t);

struct ThresholdResult {
  StatisticSpec stat;
  double alpha = 0.0;
  double threshold = 0.0;
  double expected_ec_at_threshold = 0.0;
  bool valid = false;  // false on a dimension violation
};

// Solve expected_ec(t) = alpha on the decreasing upper branch. The bracket
// is found by scanning t upward in steps of 0.1 from the curve's peak until
// the expected EC falls below alpha (the curve is non-monotone at low t),
// then bisecting until |E(t) - alpha| < 1e-9 alpha or the interval is below
// 1e-8. Throws if no crossing exists below t = 50 (alpha too large).
ThresholdResult solve_threshold(const SearchRegion& region, const StatisticSpec& stat,
                                double alpha);

struct Cluster {
  long voxel_count = 0;
  double volume = 0.0;
  double peak = 0.0;
  std::vector<int> peak_index;
};

struct DetectionReport {
  std::vector<Cluster> clusters;
  double total_volume = 0.0;
  long suprathreshold_voxels = 0;
  long undefined_voxels = 0;  // excluded from the excursion set, with warning
};

// Connected components (face connectivity) of {field >= threshold}.
// +infinity exceeds any threshold; undefined voxels are excluded and counted.
DetectionReport detect(const LatticeField& field, double threshold, double voxel_volume);

}  // namespace conerf

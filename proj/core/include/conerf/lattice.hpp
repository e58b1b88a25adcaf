#pragma once

#include <cstdint>
#include <vector>

#include "conerf/lattice_field.hpp"
#include "conerf/statistics.hpp"

namespace conerf {

// White noise convolved with an isotropic Gaussian kernel of the given
// standard deviation (voxels), generated on a lattice padded by 4 * sd and
// cropped. The kernel is L2-normalized so the marginal variance is exactly
// one in expectation. kernel_sd >= 1 required. Deterministic per seed.
LatticeField simulate_smooth_gaussian(const std::vector<int>& shape,
                                      double kernel_sd, std::uint64_t seed);

// Euler characteristic of the excursion set {s : field(s) >= t} on the
// closed cubical complex: alternating sum over d-cells whose vertices all
// exceed t. Undefined (masked/NaN) voxels never enter the set. D <= 3.
long excursion_ec(const LatticeField& field, double t);

// Top-order Lipschitz-Killing curvature estimate from normalized residuals:
// sum over voxels of det(Q'Q)^{1/2}, where column d of Q is the forward
// difference of E/||E|| along lattice axis d. Voxels missing a forward
// neighbor on any axis are dropped, biasing the estimate low by
// O(surface/volume).
double lkc_top_estimate(const Dataset& residuals);

enum class BallConvention {
  PaperSurrogate,  // L = (1, 4 pi r, 2 pi r^2, volume) for D = 3
  Euclidean,       // intrinsic volumes of the Euclidean ball
};

// Region whose top LKC is given, with lower orders filled in from the
// equal-volume ball. D = 3 defaults to the surrogate sequence
// (1, 4 pi r, 2 pi r^2, top); other D fall back to the Euclidean ball.
SearchRegion ball_lkc_approx(double top_lkc, int D,
                             BallConvention convention = BallConvention::PaperSurrogate);

// Same idea for a box-shaped lattice region: sides (in voxel steps) are
// rescaled isotropically so the box volume matches the top LKC.
SearchRegion box_lkc_approx(double top_lkc, const std::vector<double>& sides);

}  // namespace conerf

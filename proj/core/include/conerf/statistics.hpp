#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conerf/lattice_field.hpp"
#include "conerf/nnls.hpp"

namespace conerf {

enum class TestStatistic { ChiBar, TLR, TIN, F, FPlus, TMiddle };

TestStatistic test_statistic_from_name(const std::string& name);
std::string test_statistic_name(TestStatistic kind);

// Linear model columns: cone generator columns plus unconstrained nuisance
// columns, with an optional whitening transform applied before fitting.
struct DesignMatrix {
  Eigen::MatrixXd columns;        // n x (m + q)
  std::vector<int> cone_columns;  // indices of the generator columns
  std::optional<Eigen::MatrixXd> whitening;

  int n() const { return static_cast<int>(columns.rows()); }
  Eigen::MatrixXd cone_block() const;
  Eigen::MatrixXd nuisance_block() const;
};

// Design with nuisance effects projected out and the cone-span basis cached;
// shared across every vector/voxel fitted against the same design.
struct PreparedDesign {
  Eigen::MatrixXd cone;               // residualized generator columns, n x m
  Eigen::MatrixXd nuisance_basis;     // orthonormal, n x q_rank (may be empty)
  Eigen::MatrixXd span_basis;         // orthonormal basis of span(cone), n x k
  Eigen::VectorXd middle;             // unit middle-of-cone regressor
  std::optional<Eigen::MatrixXd> whitening;
  int n_eff = 0;                      // n - q_rank
  int span_dim = 0;                   // k

  int nu() const { return n_eff - span_dim; }
};

PreparedDesign prepare_design(const DesignMatrix& design);

// Statistic value conventions: +infinity when the denominator vanishes with a
// positive numerator, quiet NaN for the undefined 0/0 marker. FPlus is the
// F statistic masked to chibar > 0 and is zero on the vertex patch.
double statistic(const PreparedDesign& design, const Eigen::VectorXd& z,
                 TestStatistic kind, FitResult* fit_out = nullptr);
double statistic(const DesignMatrix& design, const Eigen::VectorXd& z, TestStatistic kind);

// Lattice of time series plus the design they share.
struct Dataset {
  std::vector<int> shape;      // lattice shape
  int n = 0;                   // series length per voxel
  DesignMatrix design;
  std::vector<double> values;  // row-major voxel order, time fastest

  long voxel_count() const;
  Eigen::VectorXd voxel_series(long v) const;
};

// Per-voxel statistic field. Undefined voxels carry NaN and a cleared mask
// bit. Voxels are fitted independently; rows are processed with warm starts
// that reset at each row start, so results do not depend on thread count.
LatticeField fit_field(const Dataset& data, TestStatistic kind, int threads = 0);

// Least-squares residuals (against the full design) per voxel, for
// smoothness estimation.
Dataset residual_dataset(const Dataset& data);

}  // namespace conerf

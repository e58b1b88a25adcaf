#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace conerf {

struct FitResult {
  Eigen::VectorXd beta;       // coefficients, cone entries >= 0
  Eigen::VectorXd fitted;     // X * beta
  double chibar = 0.0;        // ||fitted||
  double residual_norm = 0.0; // ||z - fitted||
  int active_dim = 0;         // #{beta_i > 0}
  int iterations = 0;
  std::vector<int> active_set;
};

// Thrown when the active-set iteration cap (10 * #columns) is exceeded;
// carries the best iterate reached.
class NnlsIterationLimit : public std::runtime_error {
 public:
  NnlsIterationLimit(FitResult best, const std::string& what)
      : std::runtime_error(what), best_iterate(std::move(best)) {}
  FitResult best_iterate;
};

// Lawson-Hanson active-set solve of min ||z - X b|| s.t. b >= 0.
// Rank-deficient active sets are handled with least-norm solves.
// An optional warm start seeds the initial active set; the result is the
// same KKT point either way, only the path changes.
FitResult nnls(const Eigen::MatrixXd& X, const Eigen::VectorXd& z,
               const std::vector<int>* warm_start = nullptr);

// Exhaustive projection: least squares on every column subset, keeping
// feasible fits (all coefficients nonnegative) and returning the best.
// Exact for m <= 12 columns; the enumeration oracle for nnls().
FitResult all_subsets_project(const Eigen::MatrixXd& X, const Eigen::VectorXd& z);

// KKT check at tolerance tol_scale * ||X'z||_inf: beta >= 0, gradient of
// active coordinates ~ 0, gradient of inactive coordinates <= tol.
bool kkt_satisfied(const Eigen::MatrixXd& X, const Eigen::VectorXd& z,
                   const Eigen::VectorXd& beta, double tol_scale = 1e-10,
                   double* max_violation = nullptr);

}  // namespace conerf

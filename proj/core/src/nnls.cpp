#include "conerf/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conerf {

namespace {

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& X, const std::vector<int>& cols) {
  Eigen::MatrixXd sub(X.rows(), static_cast<int>(cols.size()));
  for (int i = 0; i < static_cast<int>(cols.size()); ++i) sub.col(i) = X.col(cols[i]);
  return sub;
}

// Least-norm least squares on the selected columns; tolerates rank-deficient
// active sets (duplicated or dependent generators).
Eigen::VectorXd solve_subset(const Eigen::MatrixXd& X, const std::vector<int>& cols,
                             const Eigen::VectorXd& z) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gather_columns(X, cols));
  return cod.solve(z);
}

FitResult make_result(const Eigen::MatrixXd& X, const Eigen::VectorXd& z,
                      const Eigen::VectorXd& beta, int iterations) {
  FitResult out;
  out.beta = beta;
  out.fitted = beta.size() > 0 ? Eigen::VectorXd(X * beta)
                               : Eigen::VectorXd(Eigen::VectorXd::Zero(z.size()));
  out.chibar = out.fitted.norm();
  out.residual_norm = (z - out.fitted).norm();
  out.iterations = iterations;
  for (int i = 0; i < beta.size(); ++i) {
    if (beta[i] > 0.0) {
      ++out.active_dim;
      out.active_set.push_back(i);
    }
  }
  return out;
}

}  // namespace

FitResult nnls(const Eigen::MatrixXd& X, const Eigen::VectorXd& z,
               const std::vector<int>* warm_start) {
  const int m = static_cast<int>(X.cols());
  if (X.rows() != z.size()) throw std::invalid_argument("nnls: dimension mismatch");
  if (m == 0) return make_result(X, z, Eigen::VectorXd::Zero(0), 0);

  const double grad_scale = (X.transpose() * z).cwiseAbs().maxCoeff();
  const double tol = 1e-10 * std::max(grad_scale, 1e-30);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  std::vector<char> passive(m, 0);
  std::vector<int> pset;

  // Feasibility restoration: back off along x -> s until the passive block is
  // nonnegative, dropping coordinates pinned at zero, then re-solve.
  auto restore_feasibility = [&](Eigen::VectorXd s) {
    while (!pset.empty()) {
      bool all_positive = true;
      for (int i = 0; i < static_cast<int>(pset.size()); ++i) {
        if (s[i] <= 0.0) {
          all_positive = false;
          break;
        }
      }
      if (all_positive) break;

      double alpha = std::numeric_limits<double>::infinity();
      int binder = -1;
      for (int i = 0; i < static_cast<int>(pset.size()); ++i) {
        if (s[i] <= 0.0) {
          const double denom = x[pset[i]] - s[i];
          const double cand = denom > 0.0 ? x[pset[i]] / denom : 0.0;
          if (cand < alpha) {
            alpha = cand;
            binder = i;
          }
        }
      }
      if (!std::isfinite(alpha)) alpha = 0.0;
      double x_max = 0.0;
      for (int i = 0; i < static_cast<int>(pset.size()); ++i) {
        x[pset[i]] += alpha * (s[i] - x[pset[i]]);
        x_max = std::max(x_max, x[pset[i]]);
      }

      const double drop_tol = 1e-12 * (1.0 + x_max);
      std::vector<int> survivors;
      for (int i = 0; i < static_cast<int>(pset.size()); ++i) {
        const int j = pset[i];
        const bool pinned = (s[i] <= 0.0 && x[j] <= drop_tol) || i == binder;
        if (pinned) {
          x[j] = 0.0;
          passive[j] = 0;
        } else {
          survivors.push_back(j);
        }
      }
      pset = survivors;
      if (pset.empty()) break;
      s = solve_subset(X, pset, z);
    }
    for (int i = 0; i < static_cast<int>(pset.size()); ++i) x[pset[i]] = s[i];
  };

  if (warm_start) {
    for (int j : *warm_start) {
      if (j >= 0 && j < m && !passive[j]) {
        passive[j] = 1;
        pset.push_back(j);
      }
    }
    if (!pset.empty()) restore_feasibility(solve_subset(X, pset, z));
  }

  const int max_outer = 10 * m;
  int outer = 0;
  while (outer < max_outer) {
    ++outer;
    const Eigen::VectorXd w = X.transpose() * (z - X * x);
    int entering = -1;
    double best_w = tol;
    for (int j = 0; j < m; ++j) {
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        entering = j;
      }
    }
    if (entering < 0) return make_result(X, z, x, outer);

    passive[entering] = 1;
    pset.push_back(entering);
    restore_feasibility(solve_subset(X, pset, z));
  }

  throw NnlsIterationLimit(make_result(X, z, x, outer), "nnls: iteration cap exceeded");
}

FitResult all_subsets_project(const Eigen::MatrixXd& X, const Eigen::VectorXd& z) {
  const int m = static_cast<int>(X.cols());
  if (m > 12) throw std::invalid_argument("all_subsets_project: more than 12 columns");
  if (X.rows() != z.size()) throw std::invalid_argument("all_subsets_project: dimension mismatch");

  Eigen::VectorXd best_beta = Eigen::VectorXd::Zero(m);
  double best_norm2 = 0.0;

  // Subsets ordered by size, strict improvement required, so ties between
  // faces keep the smallest one; the fitted vector is unique regardless.
  for (int size = 1; size <= m; ++size) {
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      const Eigen::VectorXd beta_s = solve_subset(X, idx, z);
      bool feasible = true;
      for (int i = 0; i < size; ++i) {
        if (!(beta_s[i] >= 0.0)) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < size; ++i) beta[idx[i]] = beta_s[i];
        const double norm2 = (X * beta).squaredNorm();
        if (norm2 > best_norm2 * (1.0 + 1e-12) + 1e-300) {
          best_norm2 = norm2;
          best_beta = beta;
        }
      }
      int pos = size - 1;
      while (pos >= 0 && idx[pos] == m - size + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return make_result(X, z, best_beta, 1 << m);
}

bool kkt_satisfied(const Eigen::MatrixXd& X, const Eigen::VectorXd& z,
                   const Eigen::VectorXd& beta, double tol_scale,
                   double* max_violation) {
  const double grad_scale = (X.transpose() * z).cwiseAbs().maxCoeff();
  const double tol = tol_scale * std::max(grad_scale, 1e-30);
  const Eigen::VectorXd g = X.transpose() * (z - X * beta);
  double worst = 0.0;
  for (int j = 0; j < beta.size(); ++j) {
    if (beta[j] < 0.0) worst = std::max(worst, -beta[j] * grad_scale);
    if (beta[j] > 0.0) {
      worst = std::max(worst, std::fabs(g[j]));  // stationarity on the face
    } else {
      worst = std::max(worst, g[j]);  // no ascent direction outside
    }
  }
  if (max_violation) *max_violation = worst;
  return worst <= tol;
}

}  // namespace conerf

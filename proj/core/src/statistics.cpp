#include "conerf/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace conerf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

// Orthonormal basis of the column space, rank detected at 1e-10 * sigma_max.
Eigen::MatrixXd column_space_basis(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const double smax = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > 1e-10 * smax && smax > 0.0) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

}  // namespace

TestStatistic test_statistic_from_name(const std::string& name) {
  if (name == "chibar") return TestStatistic::ChiBar;
  if (name == "tlr") return TestStatistic::TLR;
  if (name == "tin") return TestStatistic::TIN;
  if (name == "f") return TestStatistic::F;
  if (name == "fplus") return TestStatistic::FPlus;
  if (name == "t1" || name == "tmiddle") return TestStatistic::TMiddle;
  throw std::invalid_argument("unknown test statistic '" + name + "'");
}

std::string test_statistic_name(TestStatistic kind) {
  switch (kind) {
    case TestStatistic::ChiBar: return "chibar";
    case TestStatistic::TLR: return "tlr";
    case TestStatistic::TIN: return "tin";
    case TestStatistic::F: return "f";
    case TestStatistic::FPlus: return "fplus";
    case TestStatistic::TMiddle: return "t1";
  }
  return "unknown";
}

Eigen::MatrixXd DesignMatrix::cone_block() const {
  Eigen::MatrixXd block(columns.rows(), static_cast<int>(cone_columns.size()));
  for (int i = 0; i < static_cast<int>(cone_columns.size()); ++i)
    block.col(i) = columns.col(cone_columns[i]);
  return block;
}

Eigen::MatrixXd DesignMatrix::nuisance_block() const {
  std::vector<char> is_cone(columns.cols(), 0);
  for (int c : cone_columns) {
    if (c < 0 || c >= columns.cols())
      throw std::invalid_argument("DesignMatrix: cone column index out of range");
    is_cone[c] = 1;
  }
  Eigen::MatrixXd block(columns.rows(), columns.cols() - static_cast<int>(cone_columns.size()));
  int out = 0;
  for (int c = 0; c < columns.cols(); ++c) {
    if (!is_cone[c]) block.col(out++) = columns.col(c);
  }
  return block;
}

PreparedDesign prepare_design(const DesignMatrix& design) {
  if (design.cone_columns.empty())
    throw std::invalid_argument("prepare_design: at least one cone column required");
  Eigen::MatrixXd cone = design.cone_block();
  Eigen::MatrixXd nuisance = design.nuisance_block();
  if (design.whitening) {
    cone = (*design.whitening) * cone;
    nuisance = (*design.whitening) * nuisance;
  }
  for (int j = 0; j < cone.cols(); ++j) {
    if (!(cone.col(j).norm() > 0.0))
      throw std::invalid_argument("prepare_design: zero cone column");
  }

  PreparedDesign prep;
  prep.whitening = design.whitening;
  prep.nuisance_basis = column_space_basis(nuisance);
  if (prep.nuisance_basis.cols() > 0) {
    cone -= prep.nuisance_basis * (prep.nuisance_basis.transpose() * cone);
  }
  prep.cone = cone;
  prep.span_basis = column_space_basis(cone);
  prep.span_dim = static_cast<int>(prep.span_basis.cols());
  prep.n_eff = static_cast<int>(cone.rows()) - static_cast<int>(prep.nuisance_basis.cols());
  if (prep.span_dim < 1) throw std::invalid_argument("prepare_design: cone columns vanish after residualization");
  if (prep.n_eff <= prep.span_dim)
    throw std::invalid_argument("prepare_design: no residual degrees of freedom");

  Eigen::VectorXd mid = Eigen::VectorXd::Zero(cone.rows());
  for (int j = 0; j < cone.cols(); ++j) mid += cone.col(j);
  mid /= static_cast<double>(cone.cols());
  const double mid_norm = mid.norm();
  if (mid_norm > 0.0) mid /= mid_norm;
  prep.middle = mid;
  return prep;
}

double statistic(const PreparedDesign& design, const Eigen::VectorXd& z_in,
                 TestStatistic kind, FitResult* fit_out) {
  Eigen::VectorXd z = design.whitening ? Eigen::VectorXd((*design.whitening) * z_in) : z_in;
  if (design.nuisance_basis.cols() > 0) {
    z -= design.nuisance_basis * (design.nuisance_basis.transpose() * z);
  }
  const double z_norm2 = z.squaredNorm();
  const int k = design.span_dim;
  const double nu = design.nu();

  if (kind == TestStatistic::TMiddle) {
    const double beta = design.middle.dot(z);
    const double rss = std::max(z_norm2 - beta * beta, 0.0);
    const double dof = design.n_eff - 1.0;
    if (rss <= 0.0) return beta > 0.0 ? kInf : (beta < 0.0 ? -kInf : kUndefined);
    return beta / std::sqrt(rss / dof);
  }

  FitResult fit = (fit_out && !fit_out->active_set.empty())
                      ? nnls(design.cone, z, &fit_out->active_set)
                      : nnls(design.cone, z);
  const double chibar = fit.chibar;
  if (fit_out) *fit_out = fit;

  switch (kind) {
    case TestStatistic::ChiBar:
      return chibar;
    case TestStatistic::TLR: {
      const double resid2 = std::max(z_norm2 - chibar * chibar, 0.0);
      if (resid2 <= 0.0) return chibar > 0.0 ? kInf : kUndefined;
      return chibar / std::sqrt(resid2 / design.n_eff);
    }
    case TestStatistic::TIN:
    case TestStatistic::F:
    case TestStatistic::FPlus: {
      const Eigen::VectorXd span_proj = design.span_basis.transpose() * z;
      const double top2 = span_proj.squaredNorm();
      const double perp2 = std::max(z_norm2 - top2, 0.0);
      if (kind == TestStatistic::TIN) {
        if (perp2 <= 0.0) return chibar > 0.0 ? kInf : kUndefined;
        return chibar / std::sqrt(perp2 / nu);
      }
      double f;
      if (perp2 <= 0.0) {
        f = top2 > 0.0 ? kInf : kUndefined;
      } else {
        f = (top2 / k) / (perp2 / nu);
      }
      if (kind == TestStatistic::F) return f;
      return chibar > 0.0 ? f : 0.0;
    }
    default:
      throw std::logic_error("statistic: unhandled kind");
  }
}

double statistic(const DesignMatrix& design, const Eigen::VectorXd& z, TestStatistic kind) {
  const PreparedDesign prep = prepare_design(design);
  return statistic(prep, z, kind);
}

long Dataset::voxel_count() const { return lattice_size(shape); }

Eigen::VectorXd Dataset::voxel_series(long v) const {
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = values[v * n + i];
  return out;
}

LatticeField fit_field(const Dataset& data, TestStatistic kind, int threads) {
  const long voxels = data.voxel_count();
  if (static_cast<long>(data.values.size()) != voxels * data.n)
    throw std::invalid_argument("fit_field: payload size does not match shape and n");
  const PreparedDesign prep = prepare_design(data.design);

  LatticeField field;
  field.shape = data.shape;
  field.spacing.assign(data.shape.size(), 1.0);
  field.values.assign(voxels, 0.0);
  field.mask.assign(voxels, 1);

  // Rows along the fastest axis form independent warm-start chains.
  const long row_len = data.shape.empty() ? voxels : data.shape.back();
  const long rows = row_len > 0 ? voxels / row_len : 0;

  auto run_rows = [&](long row_begin, long row_end) {
    FitResult carry;
    for (long r = row_begin; r < row_end; ++r) {
      carry.active_set.clear();
      for (long i = 0; i < row_len; ++i) {
        const long v = r * row_len + i;
        const double value = statistic(prep, data.voxel_series(v), kind, &carry);
        field.values[v] = value;
        if (std::isnan(value)) field.mask[v] = 0;
      }
    }
  };

  long nthreads = threads > 0 ? threads : static_cast<long>(std::thread::hardware_concurrency());
  nthreads = std::max<long>(1, std::min<long>(nthreads, rows));
  if (nthreads <= 1) {
    run_rows(0, rows);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (rows + nthreads - 1) / nthreads;
    for (int w = 0; w < nthreads; ++w) {
      const long b = w * chunk;
      const long e = std::min(rows, b + chunk);
      if (b >= e) break;
      pool.emplace_back(run_rows, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return field;
}

Dataset residual_dataset(const Dataset& data) {
  const long voxels = data.voxel_count();
  Eigen::MatrixXd X = data.design.columns;
  if (data.design.whitening) X = (*data.design.whitening) * X;
  Eigen::MatrixXd basis = column_space_basis(X);

  Dataset out;
  out.shape = data.shape;
  out.n = data.n;
  out.design = data.design;
  out.values.assign(data.values.size(), 0.0);
  for (long v = 0; v < voxels; ++v) {
    Eigen::VectorXd z = data.voxel_series(v);
    if (data.design.whitening) z = (*data.design.whitening) * z;
    const Eigen::VectorXd resid = z - basis * (basis.transpose() * z);
    for (int i = 0; i < data.n; ++i) out.values[v * data.n + i] = resid[i];
  }
  return out;
}

}  // namespace conerf

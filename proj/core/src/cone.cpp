#include "conerf/cone.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "conerf/intrinsic_volumes.hpp"
#include "conerf/nnls.hpp"
#include "conerf/rng.hpp"
#include "conerf/special_functions.hpp"

namespace conerf {

using geom::sphere_intrinsic_volumes;
using geom::unit_sphere_area;

void ConeSpec::validate() const {
  if (span_dim < 1) throw std::invalid_argument("ConeSpec: span_dim >= 1 required");
  if (ambient_dim < span_dim) throw std::invalid_argument("ConeSpec: span_dim exceeds ambient_dim");
  if (static_cast<int>(weights.size()) != span_dim + 1)
    throw std::invalid_argument("ConeSpec: weights must have span_dim + 1 entries");
  if (static_cast<int>(intrinsic_volumes.size()) != span_dim)
    throw std::invalid_argument("ConeSpec: intrinsic_volumes must have span_dim entries");
  double sum = 0.0;
  for (double p : weights) {
    if (p < -1e-12) throw std::invalid_argument("ConeSpec: negative weight");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("ConeSpec: weights must sum to 1");
  int min_positive = -1;
  for (int j = 0; j <= span_dim; ++j) {
    if (weights[j] > 1e-12) {
      min_positive = j;
      break;
    }
  }
  if (min_positive != linear_dim)
    throw std::invalid_argument("ConeSpec: linear_dim must equal min{j : p_j > 0}");
}

ConeSpec arc_cone(double alpha, int ambient_dim, int axis1, int axis2) {
  if (!(alpha > 0.0) || alpha > M_PI)
    throw std::invalid_argument("arc_cone: alpha in (0, pi] required");
  if (ambient_dim < 2 || axis1 == axis2 || axis1 < 0 || axis2 < 0 ||
      axis1 >= ambient_dim || axis2 >= ambient_dim)
    throw std::invalid_argument("arc_cone: invalid axes");

  ConeSpec cone;
  cone.provenance = ConeSpec::Provenance::Arc;
  cone.ambient_dim = ambient_dim;
  cone.span_dim = 2;
  cone.arc_angle = alpha;
  cone.generators = Eigen::MatrixXd::Zero(ambient_dim, 2);
  cone.generators(axis1, 0) = 1.0;
  cone.generators(axis1, 1) = std::cos(alpha);
  cone.generators(axis2, 1) = std::sin(alpha);
  cone.intrinsic_volumes = {1.0, alpha};
  cone.weights = {(M_PI - alpha) / (2.0 * M_PI), 0.5, alpha / (2.0 * M_PI)};
  cone.linear_dim = alpha < M_PI ? 0 : 1;
  cone.validate();
  return cone;
}

ConeSpec orthant_cone(int k, int ambient_dim) {
  if (k < 1) throw std::invalid_argument("orthant_cone: k >= 1 required");
  if (ambient_dim < 0) ambient_dim = k;
  if (ambient_dim < k) throw std::invalid_argument("orthant_cone: ambient_dim < k");

  ConeSpec cone;
  cone.provenance = ConeSpec::Provenance::Orthant;
  cone.ambient_dim = ambient_dim;
  cone.span_dim = k;
  cone.linear_dim = 0;
  cone.generators = Eigen::MatrixXd::Identity(ambient_dim, k);
  cone.weights.resize(k + 1);
  for (int j = 0; j <= k; ++j) {
    cone.weights[j] = std::exp(special::log_choose(k, j) - k * std::log(2.0));
  }
  cone.intrinsic_volumes = intrinsic_volumes_from_weights(cone.weights);
  cone.validate();
  return cone;
}

ConeSpec sphere_cone(int k, int ambient_dim) {
  if (k < 1) throw std::invalid_argument("sphere_cone: k >= 1 required");
  if (ambient_dim < 0) ambient_dim = k;
  if (ambient_dim < k) throw std::invalid_argument("sphere_cone: ambient_dim < k");

  ConeSpec cone;
  cone.provenance = ConeSpec::Provenance::Sphere;
  cone.ambient_dim = ambient_dim;
  cone.span_dim = k;
  cone.linear_dim = k;
  cone.generators = Eigen::MatrixXd::Zero(ambient_dim, 2 * k);
  for (int i = 0; i < k; ++i) {
    cone.generators(i, 2 * i) = 1.0;
    cone.generators(i, 2 * i + 1) = -1.0;
  }
  cone.weights.assign(k + 1, 0.0);
  cone.weights[k] = 1.0;
  cone.intrinsic_volumes = sphere_intrinsic_volumes(k);
  cone.validate();
  return cone;
}

double cone_angle(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) {
  const double n1 = x1.norm();
  const double n2 = x2.norm();
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw std::invalid_argument("cone_angle: zero vector");
  const double c = std::clamp(x1.dot(x2) / (n1 * n2), -1.0, 1.0);
  return std::acos(c);
}

std::vector<double> weights_from_intrinsic_volumes(const std::vector<double>& lkc, int n) {
  const int k = static_cast<int>(lkc.size());
  if (k < 1) throw std::invalid_argument("weights_from_intrinsic_volumes: empty sequence");
  if (n < k) throw std::invalid_argument("weights_from_intrinsic_volumes: k exceeds n");

  // Precompute L_i(S^{j-1}) for 1 <= j <= k.
  std::vector<std::vector<double>> sphere(k + 1);
  for (int j = 1; j <= k; ++j) sphere[j] = sphere_intrinsic_volumes(j);

  std::vector<double> p(k + 1, 0.0);
  // Row i = j-1 relates L_{j-1}(U) to p_j, p_{j+2}, ...; solve from the top.
  for (int j = k; j >= 1; --j) {
    double rhs = lkc[j - 1];
    for (int jp = j + 2; jp <= k; jp += 2) rhs -= p[jp] * sphere[jp][j - 1];
    const double diag = sphere[j][j - 1];  // = a_j
    p[j] = rhs / diag;
    if (p[j] < -1e-10)
      throw std::invalid_argument("weights_from_intrinsic_volumes: invalid sequence (negative weight)");
    if (p[j] < 0.0) p[j] = 0.0;
  }
  double sum = 0.0;
  for (int j = 1; j <= k; ++j) sum += p[j];
  p[0] = 1.0 - sum;
  if (p[0] < -1e-10)
    throw std::invalid_argument("weights_from_intrinsic_volumes: invalid sequence (weights exceed 1)");
  if (p[0] < 0.0) p[0] = 0.0;
  return p;
}

std::vector<double> intrinsic_volumes_from_weights(const std::vector<double>& weights) {
  const int k = static_cast<int>(weights.size()) - 1;
  if (k < 1) throw std::invalid_argument("intrinsic_volumes_from_weights: need p_0..p_k, k >= 1");
  std::vector<double> lkc(k, 0.0);
  for (int j = 1; j <= k; ++j) {
    if (weights[j] == 0.0) continue;
    const std::vector<double> sphere = sphere_intrinsic_volumes(j);
    for (int i = 0; i < j; ++i) lkc[i] += weights[j] * sphere[i];
  }
  return lkc;
}

WeightEstimate weights_monte_carlo(const Eigen::MatrixXd& generators,
                                   int samples, std::uint64_t seed) {
  if (samples < 10000)
    throw std::invalid_argument("weights_monte_carlo: at least 10^4 samples required");
  const int n = static_cast<int>(generators.rows());
  if (n < 1 || generators.cols() < 1)
    throw std::invalid_argument("weights_monte_carlo: empty generator matrix");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(generators);
  const double smax = svd.singularValues()[0];
  int k = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > 1e-10 * smax) ++k;
  }

  std::vector<long> counts(k + 1, 0);
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd z = rng.normal_vector(n);
    const FitResult fit = nnls(generators, z);
    const int j = std::min(fit.active_dim, k);
    ++counts[j];
  }

  WeightEstimate est;
  est.samples = samples;
  est.weights.resize(k + 1);
  est.std_errors.resize(k + 1);
  for (int j = 0; j <= k; ++j) {
    const double p = static_cast<double>(counts[j]) / samples;
    est.weights[j] = p;
    est.std_errors[j] = std::sqrt(p * (1.0 - p) / samples);
  }
  return est;
}

ConeSpec polyhedral_cone(const Eigen::MatrixXd& generators, int mc_samples,
                         std::uint64_t seed) {
  const int n = static_cast<int>(generators.rows());
  const int m = static_cast<int>(generators.cols());
  if (n < 1 || m < 1) throw std::invalid_argument("polyhedral_cone: empty generator matrix");
  Eigen::MatrixXd gen = generators;
  for (int j = 0; j < m; ++j) {
    const double norm = gen.col(j).norm();
    if (!(norm > 0.0)) throw std::invalid_argument("polyhedral_cone: zero generator");
    gen.col(j) /= norm;
  }

  ConeSpec cone;
  cone.provenance = ConeSpec::Provenance::Polyhedral;
  cone.ambient_dim = n;
  cone.generators = gen;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gen);
  const double smax = svd.singularValues()[0];
  int k = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > 1e-10 * smax) ++k;
  }
  cone.span_dim = k;

  // Lineality space: spanned by the generators whose negation stays inside.
  std::vector<int> lineal;
  for (int j = 0; j < m; ++j) {
    const FitResult fit = nnls(gen, Eigen::VectorXd(-gen.col(j)));
    if (fit.residual_norm < 1e-8) lineal.push_back(j);
  }
  if (lineal.empty()) {
    cone.linear_dim = 0;
  } else {
    Eigen::MatrixXd sub(n, static_cast<int>(lineal.size()));
    for (int i = 0; i < static_cast<int>(lineal.size()); ++i) sub.col(i) = gen.col(lineal[i]);
    Eigen::JacobiSVD<Eigen::MatrixXd> lsvd(sub);
    const double lmax = lsvd.singularValues()[0];
    int l = 0;
    for (int i = 0; i < lsvd.singularValues().size(); ++i) {
      if (lsvd.singularValues()[i] > 1e-10 * lmax) ++l;
    }
    cone.linear_dim = l;
  }

  const WeightEstimate est = weights_monte_carlo(gen, mc_samples, seed);
  cone.weights = est.weights;
  // Empirical weights can be zero below l or slightly inconsistent; pin the
  // structural zeros so the invariant l(U) = min{j : p_j > 0} holds exactly.
  double clipped = 0.0;
  for (int j = 0; j < cone.linear_dim && j < static_cast<int>(cone.weights.size()); ++j) {
    clipped += cone.weights[j];
    cone.weights[j] = 0.0;
  }
  if (clipped > 0.0 && cone.linear_dim < static_cast<int>(cone.weights.size()))
    cone.weights[cone.linear_dim] += clipped;
  cone.intrinsic_volumes = intrinsic_volumes_from_weights(cone.weights);
  cone.validate();
  return cone;
}

std::string cone_to_json(const ConeSpec& cone) {
  nlohmann::json j;
  switch (cone.provenance) {
    case ConeSpec::Provenance::Arc: j["provenance"] = "arc"; break;
    case ConeSpec::Provenance::Orthant: j["provenance"] = "orthant"; break;
    case ConeSpec::Provenance::Sphere: j["provenance"] = "sphere"; break;
    case ConeSpec::Provenance::Polyhedral: j["provenance"] = "polyhedral"; break;
  }
  j["ambient_dim"] = cone.ambient_dim;
  j["span_dim"] = cone.span_dim;
  j["linear_dim"] = cone.linear_dim;
  if (cone.provenance == ConeSpec::Provenance::Arc) j["alpha"] = cone.arc_angle;
  j["intrinsic_volumes"] = cone.intrinsic_volumes;
  j["weights"] = cone.weights;
  if (cone.generators.size() > 0) {
    std::vector<std::vector<double>> rows;
    for (int r = 0; r < cone.generators.rows(); ++r) {
      std::vector<double> row(cone.generators.cols());
      for (int c = 0; c < cone.generators.cols(); ++c) row[c] = cone.generators(r, c);
      rows.push_back(std::move(row));
    }
    j["generators"] = rows;
  }
  return j.dump();
}

ConeSpec cone_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const std::string prov = j.at("provenance").get<std::string>();
  if (prov == "arc") {
    const double alpha = j.at("alpha").get<double>();
    const int ambient = j.value("ambient_dim", 2);
    return arc_cone(alpha, ambient);
  }
  if (prov == "orthant") {
    return orthant_cone(j.at("span_dim").get<int>(), j.value("ambient_dim", -1));
  }
  if (prov == "sphere") {
    return sphere_cone(j.at("span_dim").get<int>(), j.value("ambient_dim", -1));
  }
  if (prov == "polyhedral") {
    ConeSpec cone;
    cone.provenance = ConeSpec::Provenance::Polyhedral;
    cone.ambient_dim = j.at("ambient_dim").get<int>();
    cone.span_dim = j.at("span_dim").get<int>();
    cone.linear_dim = j.at("linear_dim").get<int>();
    cone.intrinsic_volumes = j.at("intrinsic_volumes").get<std::vector<double>>();
    cone.weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("generators")) {
      const auto rows = j.at("generators").get<std::vector<std::vector<double>>>();
      cone.generators.resize(static_cast<int>(rows.size()),
                             rows.empty() ? 0 : static_cast<int>(rows[0].size()));
      for (int r = 0; r < cone.generators.rows(); ++r)
        for (int c = 0; c < cone.generators.cols(); ++c)
          cone.generators(r, c) = rows[r][c];
    }
    cone.validate();
    return cone;
  }
  throw std::invalid_argument("cone_from_json: unknown provenance '" + prov + "'");
}

}  // namespace conerf

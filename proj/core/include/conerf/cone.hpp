#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace conerf {

// A convex cone alternative Cone(U) = {c u : c >= 0, u in U}, described by
// its generator set on the sphere together with the quantities that drive
// the chi-bar machinery: the span dimension k, the dimension l(U) of the
// largest linear subspace inside the cone, the intrinsic volumes L_0..L_{k-1}
// of U, and the mixture weights p_0..p_k.
struct ConeSpec {
  enum class Provenance { Arc, Orthant, Sphere, Polyhedral };

  Provenance provenance = Provenance::Polyhedral;
  int ambient_dim = 0;   // n
  int span_dim = 0;      // k
  int linear_dim = 0;    // l(U)
  double arc_angle = 0;  // Arc provenance only, radians

  // Generators as columns (n x m); may be linearly dependent.
  Eigen::MatrixXd generators;

  std::vector<double> intrinsic_volumes;  // L_0..L_{k-1}
  std::vector<double> weights;            // p_0..p_k

  // Throws std::invalid_argument on any violated invariant:
  // weights nonnegative and summing to 1 (1e-12), l(U) = min{j : p_j > 0},
  // k <= n, sizes consistent.
  void validate() const;
};

// A circular-arc cone of angle alpha in the plane of the two axes,
// embedded in R^ambient_dim. Stored parametrically: L = (1, alpha) and
// p = ((pi-alpha)/(2pi), 1/2, alpha/(2pi)) are exact. alpha in (0, pi];
// alpha = pi is the closed half-plane (still convex), beyond is rejected.
ConeSpec arc_cone(double alpha, int ambient_dim = 2, int axis1 = 0, int axis2 = 1);

// Nonnegative orthant of R^k embedded in R^ambient_dim; weights are
// binomial C(k,j) 2^-k by sign independence.
ConeSpec orthant_cone(int k, int ambient_dim = -1);

// Full sphere U = S^{k-1}: the cone is the whole subspace, p_k = 1.
ConeSpec sphere_cone(int k, int ambient_dim = -1);

// Cone spanned by arbitrary generators. Span dimension from the singular
// values (tolerance 1e-10 * sigma_max), l(U) from testing -x_j membership
// per generator, weights estimated by Monte Carlo.
ConeSpec polyhedral_cone(const Eigen::MatrixXd& generators,
                         int mc_samples = 100000, std::uint64_t seed = 20090227);

// Angle arccos(x1'x2 / (||x1|| ||x2||)) in [0, pi]; rejects zero vectors.
double cone_angle(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2);

// Invert the mixture weights from the intrinsic volumes L_0..L_{k-1} of U by
// matching the two tail expansions term by term (back substitution against
// the sphere intrinsic volumes); p_0 is fixed by complementation.
// Throws if any weight comes out negative beyond tolerance.
std::vector<double> weights_from_intrinsic_volumes(const std::vector<double>& lkc, int n);

// Forward map: L_i(U) = sum_j p_j L_i(S^{j-1}).
std::vector<double> intrinsic_volumes_from_weights(const std::vector<double>& weights);

struct WeightEstimate {
  std::vector<double> weights;
  std::vector<double> std_errors;
  int samples = 0;
};

// Empirical frequencies of the dimension of the nearest cone face
// (= #{positive NNLS coefficients}) over standard Gaussian draws,
// with binomial standard errors. Requires samples >= 10^4.
WeightEstimate weights_monte_carlo(const Eigen::MatrixXd& generators,
                                   int samples, std::uint64_t seed);

// JSON document round trip (provenance tag + parameters + optional
// row-major generator matrix).
std::string cone_to_json(const ConeSpec& cone);
ConeSpec cone_from_json(const std::string& text);

}  // namespace conerf

#include "conerf/ec_density.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "conerf/intrinsic_volumes.hpp"
#include "conerf/special_functions.hpp"

namespace conerf {

using geom::sphere_intrinsic_volumes;
using special::chi_upper_tail;
using special::f_upper_tail;
using special::log_factorial;
using special::log_gamma;
using special::normal_upper_tail;
using special::student_upper_tail;

namespace {

constexpr int kMaxOrder = 10;

// Probabilists' Hermite polynomial He_i(t) by the three-term recurrence.
double hermite(int i, double t) {
  if (i == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int m = 1; m < i; ++m) {
    const double next = t * cur - m * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void check_order(int d) {
  if (d < 0) throw std::invalid_argument("ec density: d >= 0 required");
  if (d > kMaxOrder) throw std::domain_error("ec density: order above supported cap of 10");
}

[[maybe_unused]] bool rel_close(double a, double b, double tol) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-280});
  return std::fabs(a - b) <= tol * scale;
}

}  // namespace

StatisticSpec StatisticSpec::gaussian() { return StatisticSpec{}; }

StatisticSpec StatisticSpec::chi(int j) {
  if (j < 1) throw std::invalid_argument("StatisticSpec::chi: j >= 1 required");
  StatisticSpec s;
  s.kind = Kind::Chi;
  s.dof = j;
  return s;
}

StatisticSpec StatisticSpec::t(int nu) {
  if (nu < 1) throw std::invalid_argument("StatisticSpec::t: nu >= 1 required");
  StatisticSpec s;
  s.kind = Kind::T;
  s.dof = nu;
  return s;
}

StatisticSpec StatisticSpec::f(int k, int nu) {
  if (k < 1 || nu < 1) throw std::invalid_argument("StatisticSpec::f: k, nu >= 1 required");
  StatisticSpec s;
  s.kind = Kind::F;
  s.dof = k;
  s.dof2 = nu;
  return s;
}

StatisticSpec StatisticSpec::chibar(ConeSpec cone) {
  cone.validate();
  StatisticSpec s;
  s.kind = Kind::ChiBar;
  s.cone = std::move(cone);
  return s;
}

StatisticSpec StatisticSpec::tin(ConeSpec cone, int nu) {
  cone.validate();
  if (nu < 1) throw std::invalid_argument("StatisticSpec::tin: nu >= 1 required");
  StatisticSpec s;
  s.kind = Kind::TIN;
  s.dof = nu;
  s.cone = std::move(cone);
  return s;
}

StatisticSpec StatisticSpec::tlr(ConeSpec cone, int n) {
  cone.validate();
  if (n <= cone.span_dim)
    throw std::invalid_argument("StatisticSpec::tlr: n > span_dim required");
  StatisticSpec s;
  s.kind = Kind::TLR;
  s.dof = n;
  s.cone = std::move(cone);
  return s;
}

double StatisticSpec::validity_bound() const {
  switch (kind) {
    case Kind::Gaussian:
    case Kind::Chi:
    case Kind::ChiBar:  // no denominator field, valid in any dimension
      return std::numeric_limits<double>::infinity();
    case Kind::T:
      return dof + 1.0;
    case Kind::F:
      return dof + dof2;  // = n
    case Kind::TLR:
      return dof;  // = n
    case Kind::TIN:
      return dof + std::max(cone.linear_dim, 1);
  }
  throw std::logic_error("StatisticSpec: unknown kind");
}

std::string StatisticSpec::name() const {
  switch (kind) {
    case Kind::Gaussian: return "gaussian";
    case Kind::Chi: return "chi(" + std::to_string(dof) + ")";
    case Kind::T: return "t(" + std::to_string(dof) + ")";
    case Kind::F: return "f(" + std::to_string(dof) + "," + std::to_string(dof2) + ")";
    case Kind::ChiBar: return "chibar";
    case Kind::TIN: return "tin(nu=" + std::to_string(dof) + ")";
    case Kind::TLR: return "tlr(n=" + std::to_string(dof) + ")";
  }
  return "unknown";
}

double gaussian_ec_density(int d, double t) {
  check_order(d);
  if (!std::isfinite(t)) throw std::invalid_argument("gaussian_ec_density: t must be finite");
  if (d == 0) return normal_upper_tail(t);
  return std::pow(2.0 * M_PI, -0.5 * (d + 1)) * hermite(d - 1, t) * std::exp(-0.5 * t * t);
}

double chi_ec_density(int d, double t, int j) {
  check_order(d);
  if (j < 1) throw std::invalid_argument("chi_ec_density: j >= 1 required");
  if (d == 0) return chi_upper_tail(t, j);
  if (t < 0.0) throw std::invalid_argument("chi_ec_density: t >= 0 required for d >= 1");
  const std::vector<double> lkc = sphere_intrinsic_volumes(j);
  double sum = 0.0;
  for (int i = 0; i < j; ++i) {
    if (lkc[i] != 0.0) sum += lkc[i] * gaussian_ec_density(d + i, t);
  }
  return sum;
}

double t_ec_density(int d, double t, double nu) {
  check_order(d);
  if (!(nu >= 1.0)) throw std::invalid_argument("t_ec_density: nu >= 1 required");
  if (d == 0) return student_upper_tail(t, nu);
  if (t < 0.0) throw std::invalid_argument("t_ec_density: t >= 0 required for d >= 1");

  const double a = t * t / nu;
  double sum = 0.0;
  for (int l = 0; 2 * l <= d - 1; ++l) {
    const int p = d - 1 - 2 * l;  // power of t/sqrt(nu)
    double log_term = log_factorial(d - 1) - log_factorial(p) - log_factorial(l) +
                      log_gamma(0.5 * (p + nu)) - log_gamma(0.5 * nu) -
                      0.5 * (d + 1) * std::log(M_PI) - (2 * l + 1) * std::log(2.0) -
                      0.5 * (nu - 1.0 - 2.0 * l) * std::log1p(a);
    double term;
    if (p == 0) {
      term = std::exp(log_term);
    } else if (t == 0.0) {
      term = 0.0;
    } else {
      term = std::exp(log_term + 0.5 * p * std::log(a));
    }
    sum += (l % 2 == 0 ? term : -term);
  }
  return sum;
}

double f_ec_density(int d, double t, double k, double nu) {
  check_order(d);
  if (!(k >= 1.0) || !(nu >= 1.0)) throw std::invalid_argument("f_ec_density: k, nu >= 1 required");
  if (d == 0) return f_upper_tail(t, k, nu);
  if (t < 0.0) throw std::invalid_argument("f_ec_density: t >= 0 required for d >= 1");

  const int ki = static_cast<int>(k);
  const std::vector<double> lkc = sphere_intrinsic_volumes(ki);
  const double scaled = std::sqrt(t * k);
  const double log1p_a = std::log1p(t * k / nu);
  double sum = 0.0;
  for (int j = 0; j < ki; ++j) {
    if (lkc[j] == 0.0) continue;
    sum += lkc[j] * t_ec_density(d + j, scaled, nu) * std::exp(-0.5 * j * log1p_a);
  }
  return sum;
}

double chibar_tail(double t, const ConeSpec& cone) {
  cone.validate();
  if (t < 0.0) throw std::invalid_argument("chibar_tail: t >= 0 required");
  double sum = 0.0;
  for (int j = 1; j <= cone.span_dim; ++j) {
    if (cone.weights[j] > 0.0) sum += cone.weights[j] * chi_upper_tail(t, j);
  }
  return sum;
}

double chibar_ec_density_mixture(int d, double t, const ConeSpec& cone) {
  cone.validate();
  if (d == 0) return chibar_tail(t, cone);
  if (t < 0.0) throw std::invalid_argument("chibar_ec_density: t >= 0 required for d >= 1");
  double sum = 0.0;
  for (int j = 1; j <= cone.span_dim; ++j) {
    if (cone.weights[j] > 0.0) sum += cone.weights[j] * chi_ec_density(d, t, j);
  }
  return sum;
}

double chibar_ec_density(int d, double t, const ConeSpec& cone) {
  cone.validate();
  if (d == 0) return chibar_tail(t, cone);
  if (t < 0.0) throw std::invalid_argument("chibar_ec_density: t >= 0 required for d >= 1");
  double sum = 0.0;
  for (int j = 0; j < cone.span_dim; ++j) {
    if (cone.intrinsic_volumes[j] != 0.0)
      sum += cone.intrinsic_volumes[j] * gaussian_ec_density(d + j, t);
  }
#ifndef NDEBUG
  assert(rel_close(sum, chibar_ec_density_mixture(d, t, cone), 1e-10));
#endif
  return sum;
}

double tin_ec_density_mixture(int d, double t, const ConeSpec& cone, double nu) {
  cone.validate();
  if (!(nu >= 1.0)) throw std::invalid_argument("tin_ec_density: nu >= 1 required");
  if (d >= nu + std::max(cone.linear_dim, 1))
    throw std::domain_error("tin_ec_density: d outside validity bound nu + max(l(U),1)");
  if (t < 0.0) throw std::invalid_argument("tin_ec_density: t >= 0 required");
  double sum = 0.0;
  for (int j = 1; j <= cone.span_dim; ++j) {
    if (cone.weights[j] > 0.0)
      sum += cone.weights[j] * f_ec_density(d, t * t / j, j, nu);
  }
  return sum;
}

double tin_ec_density(int d, double t, const ConeSpec& cone, double nu) {
  cone.validate();
  if (!(nu >= 1.0)) throw std::invalid_argument("tin_ec_density: nu >= 1 required");
  if (d >= nu + std::max(cone.linear_dim, 1))
    throw std::domain_error("tin_ec_density: d outside validity bound nu + max(l(U),1)");
  if (t < 0.0) throw std::invalid_argument("tin_ec_density: t >= 0 required");
  if (d == 0) return tin_ec_density_mixture(0, t, cone, nu);
  const double log1p_a = std::log1p(t * t / nu);
  double sum = 0.0;
  for (int j = 0; j < cone.span_dim; ++j) {
    if (cone.intrinsic_volumes[j] != 0.0)
      sum += cone.intrinsic_volumes[j] * t_ec_density(d + j, t, nu) *
             std::exp(-0.5 * j * log1p_a);
  }
#ifndef NDEBUG
  assert(rel_close(sum, tin_ec_density_mixture(d, t, cone, nu), 1e-10));
#endif
  return sum;
}

double tlr_ec_density(int d, double t, const ConeSpec& cone, int n) {
  cone.validate();
  if (n <= cone.span_dim) throw std::invalid_argument("tlr_ec_density: n > span_dim required");
  if (d >= n) throw std::domain_error("tlr_ec_density: d < n required");
  if (t < 0.0) throw std::invalid_argument("tlr_ec_density: t >= 0 required");
  double sum = 0.0;
  for (int j = 1; j <= cone.span_dim; ++j) {
    if (cone.weights[j] <= 0.0 || j >= n) continue;
    const double arg = t * t * (n - j) / (static_cast<double>(j) * n);
    sum += cone.weights[j] * f_ec_density(d, arg, j, n - j);
  }
  return sum;
}

double ec_density(const StatisticSpec& stat, int d, double t) {
  switch (stat.kind) {
    case StatisticSpec::Kind::Gaussian: return gaussian_ec_density(d, t);
    case StatisticSpec::Kind::Chi: return chi_ec_density(d, t, stat.dof);
    case StatisticSpec::Kind::T: return t_ec_density(d, t, stat.dof);
    case StatisticSpec::Kind::F: return f_ec_density(d, t, stat.dof, stat.dof2);
    case StatisticSpec::Kind::ChiBar: return chibar_ec_density(d, t, stat.cone);
    case StatisticSpec::Kind::TIN: return tin_ec_density(d, t, stat.cone, stat.dof);
    case StatisticSpec::Kind::TLR: return tlr_ec_density(d, t, stat.cone, stat.dof);
  }
  throw std::logic_error("ec_density: unknown statistic kind");
}

double tail_probability(const StatisticSpec& stat, double t) {
  return ec_density(stat, 0, t);
}

}  // namespace conerf

#pragma once

#include <string>

#include "conerf/cone.hpp"

namespace conerf {

// Tagged description of a statistic random field together with the
// dimension bound below which its EC densities are valid.
struct StatisticSpec {
  enum class Kind { Gaussian, Chi, T, F, ChiBar, TIN, TLR };

  Kind kind = Kind::Gaussian;
  int dof = 0;    // Chi: j, T: nu, F: k, TIN: nu, TLR: n
  int dof2 = 0;   // F: nu
  ConeSpec cone;  // ChiBar / TIN / TLR

  static StatisticSpec gaussian();
  static StatisticSpec chi(int j);
  static StatisticSpec t(int nu);
  static StatisticSpec f(int k, int nu);
  static StatisticSpec chibar(ConeSpec cone);
  static StatisticSpec tin(ConeSpec cone, int nu);
  static StatisticSpec tlr(ConeSpec cone, int n);

  // Search-region dimension D must satisfy D < validity_bound():
  // inf for Gaussian/Chi, nu+1 for T, k+nu for F, n for TLR,
  // nu + max(l(U),1) for TIN.
  double validity_bound() const;
  std::string name() const;
};

// d-dimensional EC densities rho_d(t). d = 0 always returns the exact upper
// tail. Density orders are capped at 10 (Hermite recurrence depth); D <= 3
// applications stay far below the cap.
double gaussian_ec_density(int d, double t);
double chi_ec_density(int d, double t, int j);
double t_ec_density(int d, double t, double nu);
double f_ec_density(int d, double t, double k, double nu);

// Mixture tail P(chibar >= t) = sum_j p_j P(chi_j >= t); equal to the
// intrinsic-volume expansion sum_j L_j(U) rho^G_j(t) for t >= 0.
double chibar_tail(double t, const ConeSpec& cone);

// The two equivalent evaluations of each cone density. The unsuffixed
// functions return the intrinsic-volume form and, in debug builds, assert
// agreement with the mixture form to 1e-10 relative.
double chibar_ec_density(int d, double t, const ConeSpec& cone);
double chibar_ec_density_mixture(int d, double t, const ConeSpec& cone);
double tin_ec_density(int d, double t, const ConeSpec& cone, double nu);
double tin_ec_density_mixture(int d, double t, const ConeSpec& cone, double nu);
double tlr_ec_density(int d, double t, const ConeSpec& cone, int n);

// Dispatch on a StatisticSpec.
double ec_density(const StatisticSpec& stat, int d, double t);
double tail_probability(const StatisticSpec& stat, double t);

}  // namespace conerf

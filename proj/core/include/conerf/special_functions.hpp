#pragma once

// Log-space gamma/beta machinery and the distribution tails built on it.
// Incomplete beta and gamma use modified-Lentz continued fractions targeted
// at ~1e-14 relative accuracy in the regimes used here (degrees of freedom
// up to a few thousand, thresholds up to ~50).

namespace conerf::special {

double log_gamma(double x);
double log_beta(double a, double b);
double log_factorial(int n);
double log_choose(double n, double k);

// Regularized incomplete beta I_x(a,b).
double reg_inc_beta(double a, double b, double x);

// Regularized incomplete gamma: lower P(a,x) and upper Q(a,x).
double reg_lower_gamma(double a, double x);
double reg_upper_gamma(double a, double x);

// Upper tails of the distributions used as d=0 anchors.
double normal_upper_tail(double t);
double chi_upper_tail(double t, double dof);           // P(chi_j >= t)
double chi_density(double x, double dof);              // pdf of chi_j
double student_upper_tail(double t, double dof);       // P(T_nu >= t)
double f_upper_tail(double f, double k, double nu);    // P(F_{k,nu} >= f)
double beta_upper_tail(double x, double a, double b);  // P(Beta(a,b) >= x)

}  // namespace conerf::special

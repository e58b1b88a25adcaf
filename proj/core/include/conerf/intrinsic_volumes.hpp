#pragma once

#include <vector>

#include <Eigen/Dense>

namespace conerf::geom {

// Lebesgue measure of the unit ball in R^d (omega_d); omega_0 = 1.
double unit_ball_volume(int d);

// Surface measure of the unit (d-1)-sphere embedded in R^d (a_d).
double unit_sphere_area(int d);

// Intrinsic volumes L_0..L_{k-1} of the unit (k-1)-sphere:
// L_d = 2 C(k-1,d) a_k / a_{k-d} when k-1-d is even, zero otherwise.
std::vector<double> sphere_intrinsic_volumes(int k);

// Analytic convex shapes with closed-form intrinsic volumes.
struct Shape {
  enum class Kind { Ball, Box, SphereSurface };
  Kind kind = Kind::Ball;
  int dim = 0;                 // ambient dimension (Ball/Box: D, SphereSurface: k)
  double radius = 0.0;         // Ball
  std::vector<double> sides;   // Box

  static Shape ball(int D, double radius);
  static Shape box(std::vector<double> sides);
  static Shape sphere_surface(int k);
};

// L_0..L_D for Ball/Box, L_0..L_{k-1} for a sphere surface.
std::vector<double> intrinsic_volumes(const Shape& shape);

// Steiner-Weyl tube volume |Tube(S, r)| = sum_d omega_{D-d} r^{D-d} L_d.
double tube_volume(const Shape& shape, double r);

// Sum of determinants of all j x j principal minors; detr_0 = 1,
// detr_1 = trace, detr_d = det.
double detr(const Eigen::MatrixXd& a, int j);

// Elementary symmetric polynomial e_j of the given values.
double elementary_symmetric(const std::vector<double>& values, int j);

}  // namespace conerf::geom

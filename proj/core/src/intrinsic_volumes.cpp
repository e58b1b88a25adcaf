#include "conerf/intrinsic_volumes.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "conerf/special_functions.hpp"

namespace conerf::geom {

using special::log_choose;
using special::log_gamma;

double unit_ball_volume(int d) {
  if (d < 0) throw std::domain_error("unit_ball_volume: d >= 0 required");
  if (d == 0) return 1.0;
  return std::exp(0.5 * d * std::log(M_PI) - log_gamma(0.5 * d + 1.0));
}

double unit_sphere_area(int d) {
  if (d < 1) throw std::domain_error("unit_sphere_area: d >= 1 required");
  return 2.0 * std::exp(0.5 * d * std::log(M_PI) - log_gamma(0.5 * d));
}

std::vector<double> sphere_intrinsic_volumes(int k) {
  if (k < 1) throw std::domain_error("sphere_intrinsic_volumes: k >= 1 required");
  std::vector<double> lkc(k, 0.0);
  for (int d = 0; d < k; ++d) {
    if ((k - 1 - d) % 2 != 0) continue;
    lkc[d] = 2.0 * std::exp(log_choose(k - 1, d)) * unit_sphere_area(k) /
             unit_sphere_area(k - d);
  }
  return lkc;
}

Shape Shape::ball(int D, double radius) {
  if (D < 1 || !(radius > 0.0)) throw std::domain_error("Shape::ball: positive dimension and radius required");
  Shape s;
  s.kind = Kind::Ball;
  s.dim = D;
  s.radius = radius;
  return s;
}

Shape Shape::box(std::vector<double> sides) {
  if (sides.empty()) throw std::domain_error("Shape::box: at least one side required");
  for (double v : sides)
    if (!(v > 0.0)) throw std::domain_error("Shape::box: positive side lengths required");
  Shape s;
  s.kind = Kind::Box;
  s.dim = static_cast<int>(sides.size());
  s.sides = std::move(sides);
  return s;
}

Shape Shape::sphere_surface(int k) {
  if (k < 1) throw std::domain_error("Shape::sphere_surface: k >= 1 required");
  Shape s;
  s.kind = Kind::SphereSurface;
  s.dim = k;
  return s;
}

double elementary_symmetric(const std::vector<double>& values, int j) {
  const int n = static_cast<int>(values.size());
  if (j < 0 || j > n) throw std::domain_error("elementary_symmetric: order out of range");
  // e_j via the Newton-free triangular recurrence.
  std::vector<double> e(j + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int m = std::min(j, i + 1); m >= 1; --m) e[m] += values[i] * e[m - 1];
  }
  return e[j];
}

std::vector<double> intrinsic_volumes(const Shape& shape) {
  switch (shape.kind) {
    case Shape::Kind::Ball: {
      const int D = shape.dim;
      std::vector<double> lkc(D + 1, 0.0);
      for (int d = 0; d <= D; ++d) {
        lkc[d] = std::exp(log_choose(D, d)) * unit_ball_volume(D) /
                 unit_ball_volume(D - d) * std::pow(shape.radius, d);
      }
      return lkc;
    }
    case Shape::Kind::Box: {
      const int D = shape.dim;
      std::vector<double> lkc(D + 1, 0.0);
      for (int d = 0; d <= D; ++d) lkc[d] = elementary_symmetric(shape.sides, d);
      return lkc;
    }
    case Shape::Kind::SphereSurface:
      return sphere_intrinsic_volumes(shape.dim);
  }
  throw std::logic_error("intrinsic_volumes: unknown shape kind");
}

double tube_volume(const Shape& shape, double r) {
  if (r < 0.0) throw std::domain_error("tube_volume: r >= 0 required");
  const std::vector<double> lkc = intrinsic_volumes(shape);
  const int D = shape.dim;  // ambient dimension for all three kinds
  double vol = 0.0;
  for (int d = 0; d < static_cast<int>(lkc.size()); ++d) {
    vol += unit_ball_volume(D - d) * std::pow(r, D - d) * lkc[d];
  }
  return vol;
}

double detr(const Eigen::MatrixXd& a, int j) {
  if (a.rows() != a.cols()) throw std::domain_error("detr: square matrix required");
  const int d = static_cast<int>(a.rows());
  if (j < 0 || j > d) throw std::domain_error("detr: order out of range");
  if (j == 0) return 1.0;
  // Enumerate all j-subsets of indices in lexicographic order.
  std::vector<int> idx(j);
  for (int i = 0; i < j; ++i) idx[i] = i;
  double sum = 0.0;
  while (true) {
    Eigen::MatrixXd minor(j, j);
    for (int r = 0; r < j; ++r)
      for (int c = 0; c < j; ++c) minor(r, c) = a(idx[r], idx[c]);
    sum += minor.determinant();
    int pos = j - 1;
    while (pos >= 0 && idx[pos] == d - j + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < j; ++i) idx[i] = idx[i - 1] + 1;
  }
  return sum;
}

}  // namespace conerf::geom

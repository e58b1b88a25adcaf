#include "conerf/lattice.hpp"

#include <cmath>
#include <stdexcept>

#include "conerf/intrinsic_volumes.hpp"
#include "conerf/rng.hpp"

namespace conerf {

long lattice_size(const std::vector<int>& shape) {
  long total = 1;
  for (int s : shape) total *= s;
  return total;
}

long LatticeField::size() const { return lattice_size(shape); }

namespace {

void check_shape(const std::vector<int>& shape) {
  if (shape.empty() || shape.size() > 3)
    throw std::invalid_argument("lattice: dimension must be 1, 2, or 3");
  for (int s : shape) {
    if (s < 2) throw std::invalid_argument("lattice: shape components >= 2 required");
  }
}

// Separable in-place convolution along one axis with reflected-out zeros
// (the padding absorbs the boundary).
void convolve_axis(std::vector<double>& values, const std::vector<int>& shape,
                   int axis, const std::vector<double>& kernel) {
  const int D = static_cast<int>(shape.size());
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<long> stride(D, 1);
  for (int d = D - 2; d >= 0; --d) stride[d] = stride[d + 1] * shape[d + 1];
  const long total = lattice_size(shape);
  const int axis_len = shape[axis];
  const long axis_stride = stride[axis];

  std::vector<double> out(total);
  std::vector<double> line(axis_len);
  const long lines = total / axis_len;
  for (long ln = 0; ln < lines; ++ln) {
    // Base index of this line: decompose ln over the non-axis dimensions.
    long base = 0;
    long rem = ln;
    for (int d = D - 1; d >= 0; --d) {
      if (d == axis) continue;
      const long coord = rem % shape[d];
      rem /= shape[d];
      base += coord * stride[d];
    }
    for (int i = 0; i < axis_len; ++i) line[i] = values[base + i * axis_stride];
    for (int i = 0; i < axis_len; ++i) {
      double acc = 0.0;
      const int lo = std::max(0, i - radius);
      const int hi = std::min(axis_len - 1, i + radius);
      for (int j = lo; j <= hi; ++j) acc += line[j] * kernel[j - i + radius];
      out[base + i * axis_stride] = acc;
    }
  }
  values = std::move(out);
}

}  // namespace

LatticeField simulate_smooth_gaussian(const std::vector<int>& shape,
                                      double kernel_sd, std::uint64_t seed) {
  check_shape(shape);
  if (!(kernel_sd >= 1.0))
    throw std::invalid_argument("simulate_smooth_gaussian: kernel_sd >= 1 voxel required");

  const int pad = static_cast<int>(std::ceil(4.0 * kernel_sd));
  const int radius = pad;
  std::vector<double> kernel(2 * radius + 1);
  double norm2 = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * i * i / (kernel_sd * kernel_sd));
    kernel[i + radius] = w;
    norm2 += w * w;
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& w : kernel) w *= scale;

  std::vector<int> padded(shape);
  for (int& s : padded) s += 2 * pad;
  std::vector<double> values(lattice_size(padded));
  Rng rng(seed);
  for (double& v : values) v = rng.normal();

  for (int axis = 0; axis < static_cast<int>(padded.size()); ++axis) {
    convolve_axis(values, padded, axis, kernel);
  }

  // Crop the padding.
  LatticeField field;
  field.shape = shape;
  field.spacing.assign(shape.size(), 1.0);
  field.seed = seed;
  field.kernel_sd = kernel_sd;
  field.values.resize(lattice_size(shape));
  const int D = static_cast<int>(shape.size());
  std::vector<long> pstride(D, 1);
  for (int d = D - 2; d >= 0; --d) pstride[d] = pstride[d + 1] * padded[d + 1];
  for (long v = 0; v < field.size(); ++v) {
    long rem = v;
    long src = 0;
    for (int d = D - 1; d >= 0; --d) {
      const long coord = rem % shape[d];
      rem /= shape[d];
      src += (coord + pad) * pstride[d];
    }
    field.values[v] = values[src];
  }
  return field;
}

long excursion_ec(const LatticeField& field, double t) {
  const int D = field.dim();
  if (D < 1 || D > 3) throw std::invalid_argument("excursion_ec: D in {1,2,3} required");
  std::vector<int> shape = field.shape;
  while (shape.size() < 3) shape.insert(shape.begin(), 1);
  const long nx = shape[0], ny = shape[1], nz = shape[2];
  auto at = [&](long x, long y, long z) -> bool {
    const long i = (x * ny + y) * nz + z;
    const double v = field.values[i];
    return field.defined(i) && v >= t;  // NaN compares false
  };

  long vertices = 0, edges = 0, faces = 0, cubes = 0;
  for (long x = 0; x < nx; ++x) {
    for (long y = 0; y < ny; ++y) {
      for (long z = 0; z < nz; ++z) {
        if (!at(x, y, z)) continue;
        ++vertices;
        const bool ex = x + 1 < nx && at(x + 1, y, z);
        const bool ey = y + 1 < ny && at(x, y + 1, z);
        const bool ez = z + 1 < nz && at(x, y, z + 1);
        edges += ex + ey + ez;
        const bool fxy = ex && ey && at(x + 1, y + 1, z);
        const bool fxz = ex && ez && at(x + 1, y, z + 1);
        const bool fyz = ey && ez && at(x, y + 1, z + 1);
        faces += fxy + fxz + fyz;
        if (fxy && fxz && fyz && at(x + 1, y + 1, z + 1)) ++cubes;
      }
    }
  }
  return vertices - edges + faces - cubes;
}

double lkc_top_estimate(const Dataset& residuals) {
  const int D = static_cast<int>(residuals.shape.size());
  if (D < 1 || D > 3) throw std::invalid_argument("lkc_top_estimate: D in {1,2,3} required");
  const long voxels = residuals.voxel_count();
  if (voxels == 0) throw std::invalid_argument("lkc_top_estimate: empty lattice");
  if (residuals.n < D + 1)
    throw std::invalid_argument("lkc_top_estimate: need n >= D + 1 residuals");

  std::vector<long> stride(D, 1);
  for (int d = D - 2; d >= 0; --d) stride[d] = stride[d + 1] * residuals.shape[d + 1];

  const int n = residuals.n;
  auto normalized = [&](long v, Eigen::VectorXd& out) {
    out = residuals.voxel_series(v);
    const double norm = out.norm();
    if (norm > 0.0) out /= norm;
    else out.setZero();
  };

  Eigen::VectorXd center(n), neighbor(n);
  Eigen::MatrixXd q(n, D);
  double total = 0.0;
  std::vector<long> coord(D, 0);
  for (long v = 0; v < voxels; ++v) {
    long rem = v;
    bool interior = true;
    for (int d = D - 1; d >= 0; --d) {
      coord[d] = rem % residuals.shape[d];
      rem /= residuals.shape[d];
    }
    for (int d = 0; d < D; ++d) {
      if (coord[d] + 1 >= residuals.shape[d]) {
        interior = false;
        break;
      }
    }
    if (!interior) continue;
    normalized(v, center);
    for (int d = 0; d < D; ++d) {
      normalized(v + stride[d], neighbor);
      q.col(d) = neighbor - center;
    }
    const double det = (q.transpose() * q).determinant();
    if (det > 0.0) total += std::sqrt(det);
  }
  return total;
}

SearchRegion ball_lkc_approx(double top_lkc, int D, BallConvention convention) {
  if (!(top_lkc > 0.0)) throw std::invalid_argument("ball_lkc_approx: top_lkc > 0 required");
  if (D < 1) throw std::invalid_argument("ball_lkc_approx: D >= 1 required");
  const double r = std::pow(top_lkc / geom::unit_ball_volume(D), 1.0 / D);
  SearchRegion region;
  if (D == 3 && convention == BallConvention::PaperSurrogate) {
    region.lkc = {1.0, 4.0 * M_PI * r, 2.0 * M_PI * r * r, top_lkc};
  } else {
    region.lkc = geom::intrinsic_volumes(geom::Shape::ball(D, r));
    region.lkc[D] = top_lkc;
  }
  return region;
}

SearchRegion box_lkc_approx(double top_lkc, const std::vector<double>& sides) {
  if (!(top_lkc > 0.0)) throw std::invalid_argument("box_lkc_approx: top_lkc > 0 required");
  if (sides.empty()) throw std::invalid_argument("box_lkc_approx: sides required");
  double volume = 1.0;
  for (double s : sides) {
    if (!(s > 0.0)) throw std::invalid_argument("box_lkc_approx: positive sides required");
    volume *= s;
  }
  const int D = static_cast<int>(sides.size());
  const double scale = std::pow(top_lkc / volume, 1.0 / D);
  std::vector<double> scaled(sides);
  for (double& s : scaled) s *= scale;
  SearchRegion region;
  region.lkc = geom::intrinsic_volumes(geom::Shape::box(scaled));
  return region;
}

}  // namespace conerf

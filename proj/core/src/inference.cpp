#include "conerf/inference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace conerf {

double expected_ec(const SearchRegion& region, const StatisticSpec& stat, double t) {
  const int D = region.dim();
  if (D < 0) throw std::invalid_argument("expected_ec: empty region");
  if (!(static_cast<double>(D) < stat.validity_bound()))
    throw std::domain_error("expected_ec: region dimension violates the statistic's validity bound");
  double sum = 0.0;
  for (int d = 0; d <= D; ++d) {
    if (region.lkc[d] != 0.0) sum += region.lkc[d] * ec_density(stat, d, t);
  }
  return sum;
}

ThresholdResult solve_threshold(const SearchRegion& region, const StatisticSpec& stat,
                                double alpha) {
  if (!(alpha > 0.0) || !(alpha < 0.5))
    throw std::invalid_argument("solve_threshold: alpha in (0, 0.5) required");

  ThresholdResult result;
  result.stat = stat;
  result.alpha = alpha;
  const int D = region.dim();
  if (!(static_cast<double>(D) < stat.validity_bound())) {
    result.valid = false;
    return result;
  }

  auto ec = [&](double t) { return expected_ec(region, stat, t); };

  // Locate the peak of the expected-EC curve, then the first grid point on
  // the decreasing branch that falls below alpha.
  const double t_max = 50.0;
  const double step = 0.1;
  double peak_t = 0.0;
  double peak_v = ec(0.0);
  double lo = -1.0, hi = -1.0;
  double prev_t = 0.0, prev_v = peak_v;
  for (double t = step; t <= t_max + 1e-9; t += step) {
    const double v = ec(t);
    if (v > peak_v) {
      peak_v = v;
      peak_t = t;
    }
    if (t > peak_t && prev_t >= peak_t && prev_v >= alpha && v < alpha) {
      lo = prev_t;
      hi = t;
      break;
    }
    prev_t = t;
    prev_v = v;
  }
  if (lo < 0.0) {
    if (peak_v < alpha)
      throw std::runtime_error("solve_threshold: alpha too large for this region");
    throw std::runtime_error("solve_threshold: no crossing below t = 50");
  }

  double f_lo = ec(lo) - alpha;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = ec(mid) - alpha;
    if (std::fabs(f_mid) < 1e-9 * alpha || (hi - lo) < 1e-8) {
      result.threshold = mid;
      result.expected_ec_at_threshold = f_mid + alpha;
      result.valid = true;
      return result;
    }
    if ((f_lo > 0.0) == (f_mid > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  result.threshold = 0.5 * (lo + hi);
  result.expected_ec_at_threshold = ec(result.threshold);
  result.valid = true;
  return result;
}

DetectionReport detect(const LatticeField& field, double threshold, double voxel_volume) {
  const int D = field.dim();
  if (D < 1 || D > 3) throw std::invalid_argument("detect: D in {1,2,3} required");
  std::vector<int> shape = field.shape;
  while (shape.size() < 3) shape.insert(shape.begin(), 1);
  const long nx = shape[0], ny = shape[1], nz = shape[2];
  const long total = field.size();

  DetectionReport report;
  std::vector<char> super(total, 0);
  for (long i = 0; i < total; ++i) {
    const double v = field.values[i];
    if (!field.defined(i) || std::isnan(v)) {
      ++report.undefined_voxels;
      continue;
    }
    if (v >= threshold) {
      super[i] = 1;
      ++report.suprathreshold_voxels;
    }
  }

  std::vector<char> visited(total, 0);
  auto index = [&](long x, long y, long z) { return (x * ny + y) * nz + z; };
  for (long start = 0; start < total; ++start) {
    if (!super[start] || visited[start]) continue;
    Cluster cluster;
    cluster.peak = -std::numeric_limits<double>::infinity();
    std::deque<long> queue{start};
    visited[start] = 1;
    while (!queue.empty()) {
      const long i = queue.front();
      queue.pop_front();
      ++cluster.voxel_count;
      if (field.values[i] > cluster.peak) {
        cluster.peak = field.values[i];
        const long x = i / (ny * nz), y = (i / nz) % ny, z = i % nz;
        cluster.peak_index.assign({static_cast<int>(x), static_cast<int>(y), static_cast<int>(z)});
        cluster.peak_index.erase(cluster.peak_index.begin(), cluster.peak_index.begin() + (3 - D));
      }
      const long x = i / (ny * nz), y = (i / nz) % ny, z = i % nz;
      const long neighbors[6][3] = {{x - 1, y, z}, {x + 1, y, z}, {x, y - 1, z},
                                    {x, y + 1, z}, {x, y, z - 1}, {x, y, z + 1}};
      for (const auto& nb : neighbors) {
        if (nb[0] < 0 || nb[0] >= nx || nb[1] < 0 || nb[1] >= ny || nb[2] < 0 || nb[2] >= nz)
          continue;
        const long j = index(nb[0], nb[1], nb[2]);
        if (super[j] && !visited[j]) {
          visited[j] = 1;
          queue.push_back(j);
        }
      }
    }
    cluster.volume = cluster.voxel_count * voxel_volume;
    report.total_volume += cluster.volume;
    report.clusters.push_back(std::move(cluster));
  }
  std::sort(report.clusters.begin(), report.clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.voxel_count > b.voxel_count; });
  return report;
}

}  // namespace conerf

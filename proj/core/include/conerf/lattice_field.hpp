#pragma once

#include <cstdint>
#include <vector>

namespace conerf {

// D-dimensional scalar lattice (D in {1,2,3}) with provenance metadata.
// An empty mask means every voxel is defined.
struct LatticeField {
  std::vector<int> shape;
  std::vector<double> spacing;       // voxel lengths, defaults to 1
  std::vector<double> values;        // row-major
  std::vector<std::uint8_t> mask;    // 1 = defined; empty = all defined
  std::uint64_t seed = 0;
  double kernel_sd = 0.0;

  int dim() const { return static_cast<int>(shape.size()); }
  long size() const;
  bool defined(long i) const { return mask.empty() || mask[i] != 0; }
};

long lattice_size(const std::vector<int>& shape);

// Search region summarized by its Lipschitz-Killing curvatures L_0..L_D
// (unitless, in the metric of the component fields) plus the physical voxel
// volume used when reporting detected volumes.
struct SearchRegion {
  std::vector<double> lkc;
  double voxel_volume = 1.0;

  int dim() const { return static_cast<int>(lkc.size()) - 1; }
};

}  // namespace conerf

#pragma once

#include <stdexcept>
#include <string>

#include "conerf/lattice_field.hpp"
#include "conerf/statistics.hpp"

namespace conerf {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// On-disk layout for datasets and fields: a single-line JSON header,
// a newline, then the raw little-endian float64 payload. Dataset payload is
// voxel-major with time fastest; field payload is the row-major value grid
// followed by one mask byte per voxel when a mask is present.
void write_dataset(const std::string& path, const Dataset& data);
Dataset read_dataset(const std::string& path);

void write_field(const std::string& path, const LatticeField& field);
LatticeField read_field(const std::string& path);

// CSV cell with 9 significant digits, '.' radix; lines use LF.
std::string csv_double(double value);

}  // namespace conerf

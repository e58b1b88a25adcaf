#include "conerf/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace conerf {

namespace {

static_assert(sizeof(double) == 8);

void write_doubles(std::ostream& out, const std::vector<double>& values) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
  } else {
    for (double v : values) {
      char bytes[8];
      std::memcpy(bytes, &v, 8);
      std::swap(bytes[0], bytes[7]);
      std::swap(bytes[1], bytes[6]);
      std::swap(bytes[2], bytes[5]);
      std::swap(bytes[3], bytes[4]);
      out.write(bytes, 8);
    }
  }
}

void read_doubles(std::istream& in, std::vector<double>& values, size_t count) {
  values.resize(count);
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
  } else {
    for (size_t i = 0; i < count; ++i) {
      char bytes[8];
      in.read(bytes, 8);
      std::swap(bytes[0], bytes[7]);
      std::swap(bytes[1], bytes[6]);
      std::swap(bytes[2], bytes[5]);
      std::swap(bytes[3], bytes[4]);
      std::memcpy(&values[i], bytes, 8);
    }
  }
  if (!in) throw IoError("payload truncated");
}

nlohmann::json read_header(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("cannot read header from " + path);
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad header in " + path + ": " + e.what());
  }
}

}  // namespace

void write_dataset(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");

  nlohmann::json header;
  header["kind"] = "dataset";
  header["dims"] = data.shape.size();
  header["shape"] = data.shape;
  header["n"] = data.n;
  std::vector<std::vector<double>> design;
  for (int r = 0; r < data.design.columns.rows(); ++r) {
    std::vector<double> row(data.design.columns.cols());
    for (int c = 0; c < data.design.columns.cols(); ++c) row[c] = data.design.columns(r, c);
    design.push_back(std::move(row));
  }
  header["design"] = design;
  header["cone_columns"] = data.design.cone_columns;
  out << header.dump() << "\n";
  write_doubles(out, data.values);
  if (!out) throw IoError("write failed for " + path);
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const nlohmann::json header = read_header(in, path);
  if (header.value("kind", "") != "dataset") throw IoError(path + " is not a dataset file");

  Dataset data;
  data.shape = header.at("shape").get<std::vector<int>>();
  data.n = header.at("n").get<int>();
  const auto design = header.at("design").get<std::vector<std::vector<double>>>();
  if (design.empty() || design.size() != static_cast<size_t>(data.n))
    throw IoError(path + ": design matrix rows must equal n");
  data.design.columns.resize(static_cast<int>(design.size()),
                             static_cast<int>(design[0].size()));
  for (int r = 0; r < data.design.columns.rows(); ++r) {
    if (design[r].size() != static_cast<size_t>(data.design.columns.cols()))
      throw IoError(path + ": ragged design matrix");
    for (int c = 0; c < data.design.columns.cols(); ++c)
      data.design.columns(r, c) = design[r][c];
  }
  data.design.cone_columns = header.at("cone_columns").get<std::vector<int>>();
  read_doubles(in, data.values, static_cast<size_t>(data.voxel_count()) * data.n);
  return data;
}

void write_field(const std::string& path, const LatticeField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");

  nlohmann::json header;
  header["kind"] = "field";
  header["dims"] = field.shape.size();
  header["shape"] = field.shape;
  header["spacing"] = field.spacing;
  header["seed"] = field.seed;
  header["kernel_sd"] = field.kernel_sd;
  header["has_mask"] = !field.mask.empty();
  out << header.dump() << "\n";
  write_doubles(out, field.values);
  if (!field.mask.empty()) {
    out.write(reinterpret_cast<const char*>(field.mask.data()),
              static_cast<std::streamsize>(field.mask.size()));
  }
  if (!out) throw IoError("write failed for " + path);
}

LatticeField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const nlohmann::json header = read_header(in, path);
  if (header.value("kind", "") != "field") throw IoError(path + " is not a field file");

  LatticeField field;
  field.shape = header.at("shape").get<std::vector<int>>();
  field.spacing = header.value("spacing", std::vector<double>(field.shape.size(), 1.0));
  field.seed = header.value("seed", 0ULL);
  field.kernel_sd = header.value("kernel_sd", 0.0);
  read_doubles(in, field.values, static_cast<size_t>(field.size()));
  if (header.value("has_mask", false)) {
    field.mask.resize(field.size());
    in.read(reinterpret_cast<char*>(field.mask.data()),
            static_cast<std::streamsize>(field.mask.size()));
    if (!in) throw IoError("mask truncated in " + path);
  }
  return field;
}

std::string csv_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

}  // namespace conerf

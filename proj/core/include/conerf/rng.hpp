#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace conerf {

// Seeded generator with a fixed uniform/normal construction so that streams
// are identical across platforms and standard library versions
// (std::mt19937_64 output is pinned by the standard; the distributions in
// <random> are not). The seed is expanded through splitmix64 into a seed
// sequence: raw sequential seeds leave mt19937 states correlated for a long
// stretch, which shows up as shared structure between replicate streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    auto splitmix = [&s]() {
      s += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = s;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return z ^ (z >> 31);
    };
    std::uint32_t words[16];
    for (int i = 0; i < 8; ++i) {
      const std::uint64_t z = splitmix();
      words[2 * i] = static_cast<std::uint32_t>(z);
      words[2 * i + 1] = static_cast<std::uint32_t>(z >> 32);
    }
    std::seed_seq seq(words, words + 16);
    gen_.seed(seq);
  }

  // Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace conerf

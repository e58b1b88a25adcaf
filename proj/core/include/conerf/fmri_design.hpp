#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conerf/statistics.hpp"

namespace conerf {

// Gamma-difference hemodynamic response, peaking at peak_delay seconds with
// an undershoot. The exact shape used by any given scanner pipeline is not
// standardized; these parameters are surrogates and are all configurable.
struct Hrf {
  double peak_delay = 5.5;       // seconds
  double shape = 6.0;            // gamma shape of the main lobe
  double undershoot_delay = 12.0;
  double undershoot_ratio = 0.35;
  // Scales the gamma time constants. Zero collapses the response to a pure
  // delay, turning the regressors into shifted copies of the stimulus.
  double dispersion = 1.0;

  double value(double t) const;
  double derivative(double t) const;
};

// Alternating block task: on-block of the condition of interest, rest,
// neutral block, rest, repeated; all block lengths equal.
struct Stimulus {
  double block_seconds = 9.0;
  int cycles = 10;

  double duration() const { return 4.0 * block_seconds * cycles; }
  bool task_on(double t) const;
  bool neutral_on(double t) const;
};

struct AnalysisConfig {
  Hrf hrf;
  Stimulus stimulus;
  double delta_min = -2.0;  // delay range, seconds
  double delta_max = 2.0;
  double tr = 3.0;          // sampling interval, seconds
  double fine_dt = 0.1;     // convolution grid, seconds
  int drift_order = 3;      // polynomial drift columns 0..order
  bool include_neutral = true;
  std::string statistic = "tin";
  double alpha = 0.05;
  std::vector<int> shape = {16, 16, 4};
  double sigma = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

std::string analysis_config_to_json(const AnalysisConfig& config);
AnalysisConfig analysis_config_from_json(const std::string& text);

struct BuiltDesign {
  DesignMatrix design;
  double cone_angle = 0.0;  // after nuisance residualization; 0 when k = 1
  int n = 0;                // number of samples
};

// Two cone regressors (h - delta_j h') * task sampled every tr seconds, plus
// the neutral regressor and polynomial drift as nuisance columns. Collapses
// to a single half-line generator when delta_min == delta_max.
BuiltDesign build_design(const AnalysisConfig& config);

// Per-voxel activation: amplitude beta and delay delta (seconds).
struct Activation {
  double beta = 0.0;
  double delta = 0.0;
};

// Shifted-response signal plus iid unit Gaussian noise, deterministic per
// seed. Throws when an activation delay falls outside the configured range.
Dataset synth_data(const AnalysisConfig& config,
                   const std::map<long, Activation>& activations);

}  // namespace conerf

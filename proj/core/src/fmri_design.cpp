#include "conerf/fmri_design.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "conerf/cone.hpp"
#include "conerf/rng.hpp"
#include "conerf/special_functions.hpp"

namespace conerf {

namespace {

double gamma_pdf(double t, double shape, double rate) {
  if (t <= 0.0) return 0.0;
  return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(t) - rate * t -
                  special::log_gamma(shape));
}

double gamma_pdf_derivative(double t, double shape, double rate) {
  if (t <= 0.0) return 0.0;
  return gamma_pdf(t, shape, rate) * ((shape - 1.0) / t - rate);
}

}  // namespace

double Hrf::value(double t) const {
  if (dispersion <= 0.0) throw std::invalid_argument("Hrf: dispersion > 0 required for evaluation");
  const double rate1 = (shape - 1.0) / (peak_delay * dispersion);
  const double shape2 = (shape - 1.0) * undershoot_delay / peak_delay + 1.0;
  return gamma_pdf(t, shape, rate1) -
         undershoot_ratio * gamma_pdf(t, shape2, rate1);
}

double Hrf::derivative(double t) const {
  const double rate1 = (shape - 1.0) / (peak_delay * dispersion);
  const double shape2 = (shape - 1.0) * undershoot_delay / peak_delay + 1.0;
  return gamma_pdf_derivative(t, shape, rate1) -
         undershoot_ratio * gamma_pdf_derivative(t, shape2, rate1);
}

bool Stimulus::task_on(double t) const {
  if (t < 0.0 || t >= duration()) return false;
  const double cycle = std::fmod(t, 4.0 * block_seconds);
  return cycle < block_seconds;
}

bool Stimulus::neutral_on(double t) const {
  if (t < 0.0 || t >= duration()) return false;
  const double cycle = std::fmod(t, 4.0 * block_seconds);
  return cycle >= 2.0 * block_seconds && cycle < 3.0 * block_seconds;
}

void AnalysisConfig::validate() const {
  if (!(delta_min <= delta_max)) throw std::invalid_argument("config: delta_min <= delta_max required");
  if (!(alpha > 0.0) || !(alpha < 0.5)) throw std::invalid_argument("config: alpha in (0, 0.5) required");
  if (!(tr > 0.0)) throw std::invalid_argument("config: sampling interval > 0 required");
  if (!(fine_dt > 0.0) || fine_dt > tr) throw std::invalid_argument("config: fine_dt in (0, tr] required");
  if (drift_order < 0) throw std::invalid_argument("config: drift_order >= 0 required");
  if (shape.empty() || shape.size() > 3) throw std::invalid_argument("config: lattice dimension 1..3");
}

namespace {

// Convolution of the indicator with a kernel, evaluated on the fine grid.
std::vector<double> convolve_stimulus(const Stimulus& stim, double fine_dt,
                                      const std::vector<double>& kernel,
                                      bool neutral) {
  const int nt = static_cast<int>(std::floor(stim.duration() / fine_dt));
  std::vector<double> on(nt, 0.0);
  for (int i = 0; i < nt; ++i) {
    const double t = i * fine_dt;
    on[i] = (neutral ? stim.neutral_on(t) : stim.task_on(t)) ? 1.0 : 0.0;
  }
  std::vector<double> out(nt, 0.0);
  const int nk = static_cast<int>(kernel.size());
  for (int i = 0; i < nt; ++i) {
    double acc = 0.0;
    const int jmax = std::min(i, nk - 1);
    for (int j = 0; j <= jmax; ++j) acc += kernel[j] * on[i - j];
    out[i] = acc * fine_dt;
  }
  return out;
}

std::vector<double> sample_hrf(const Hrf& hrf, double fine_dt, double span,
                               double delta, bool derivative) {
  const int nk = static_cast<int>(std::ceil(span / fine_dt));
  std::vector<double> kernel(nk, 0.0);
  for (int i = 0; i < nk; ++i) {
    const double t = i * fine_dt - delta;
    kernel[i] = derivative ? hrf.derivative(t) : hrf.value(t);
  }
  return kernel;
}

Eigen::VectorXd subsample(const std::vector<double>& fine, double fine_dt, double tr, int n) {
  Eigen::VectorXd out(n);
  const int stride = static_cast<int>(std::llround(tr / fine_dt));
  for (int i = 0; i < n; ++i) {
    const long idx = static_cast<long>(i) * stride;
    out[i] = idx < static_cast<long>(fine.size()) ? fine[idx] : 0.0;
  }
  return out;
}

}  // namespace

namespace {

// Exact shifted response: the stimulus indicator delayed by `shift` seconds.
// Used when the response has no dispersion (a pure delay).
Eigen::VectorXd shifted_indicator(const Stimulus& stim, double fine_dt, double tr,
                                  int n, double shift, bool neutral) {
  const int nt = static_cast<int>(std::floor(stim.duration() / fine_dt));
  std::vector<double> fine(nt, 0.0);
  for (int i = 0; i < nt; ++i) {
    const double t = i * fine_dt - shift;
    fine[i] = (neutral ? stim.neutral_on(t) : stim.task_on(t)) ? 1.0 : 0.0;
  }
  return subsample(fine, fine_dt, tr, n);
}

}  // namespace

BuiltDesign build_design(const AnalysisConfig& config) {
  config.validate();
  const double span = 32.0;  // hrf support, seconds
  const double duration = config.stimulus.duration();
  const int n = static_cast<int>(std::floor(duration / config.tr));
  if (n < 8) throw std::invalid_argument("build_design: too few samples");
  const bool pure_delay = config.hrf.dispersion == 0.0;

  const bool degenerate = config.delta_min == config.delta_max;
  const std::vector<double> deltas =
      degenerate ? std::vector<double>{config.delta_min}
                 : std::vector<double>{config.delta_min, config.delta_max};

  std::vector<Eigen::VectorXd> cone_cols;
  if (pure_delay) {
    for (const double delta : deltas) {
      cone_cols.push_back(shifted_indicator(config.stimulus, config.fine_dt, config.tr, n,
                                            config.hrf.peak_delay + delta, false));
    }
  } else {
    const std::vector<double> h = sample_hrf(config.hrf, config.fine_dt, span, 0.0, false);
    const std::vector<double> hdot = sample_hrf(config.hrf, config.fine_dt, span, 0.0, true);
    for (const double delta : deltas) {
      std::vector<double> kernel(h.size());
      for (size_t i = 0; i < h.size(); ++i) kernel[i] = h[i] - delta * hdot[i];
      cone_cols.push_back(subsample(
          convolve_stimulus(config.stimulus, config.fine_dt, kernel, false),
          config.fine_dt, config.tr, n));
    }
  }

  std::vector<Eigen::VectorXd> nuisance_cols;
  if (config.include_neutral) {
    if (pure_delay) {
      nuisance_cols.push_back(shifted_indicator(config.stimulus, config.fine_dt, config.tr, n,
                                                config.hrf.peak_delay, true));
    } else {
      const std::vector<double> h = sample_hrf(config.hrf, config.fine_dt, span, 0.0, false);
      nuisance_cols.push_back(subsample(
          convolve_stimulus(config.stimulus, config.fine_dt, h, true), config.fine_dt, config.tr, n));
    }
  }
  for (int p = 0; p <= config.drift_order; ++p) {
    Eigen::VectorXd drift(n);
    for (int i = 0; i < n; ++i) drift[i] = std::pow((i * config.tr) / duration, p);
    nuisance_cols.push_back(drift);
  }

  BuiltDesign built;
  built.n = n;
  const int m = static_cast<int>(cone_cols.size());
  const int q = static_cast<int>(nuisance_cols.size());
  built.design.columns.resize(n, m + q);
  for (int j = 0; j < m; ++j) built.design.columns.col(j) = cone_cols[j];
  for (int j = 0; j < q; ++j) built.design.columns.col(m + j) = nuisance_cols[j];
  for (int j = 0; j < m; ++j) built.design.cone_columns.push_back(j);

  if (m == 2) {
    // Angle between the cone edges after removing nuisance effects.
    const PreparedDesign prep = prepare_design(built.design);
    built.cone_angle = cone_angle(prep.cone.col(0), prep.cone.col(1));
    if (built.cone_angle < 1e-9 || built.cone_angle > M_PI - 1e-9)
      throw std::invalid_argument("build_design: degenerate cone (angle at 0 or pi)");
  }
  return built;
}

Dataset synth_data(const AnalysisConfig& config,
                   const std::map<long, Activation>& activations) {
  config.validate();
  const BuiltDesign built = build_design(config);
  const double span = 32.0;

  Dataset data;
  data.shape = config.shape;
  data.n = built.n;
  data.design = built.design;
  const long voxels = data.voxel_count();
  data.values.assign(static_cast<size_t>(voxels) * built.n, 0.0);

  // Cache the exact shifted responses used by the activation map.
  std::map<double, Eigen::VectorXd> responses;
  for (const auto& [voxel, act] : activations) {
    if (voxel < 0 || voxel >= voxels) throw std::invalid_argument("synth_data: voxel out of range");
    if (act.delta < config.delta_min || act.delta > config.delta_max)
      throw std::invalid_argument("synth_data: activation delay outside the configured range");
    if (!responses.count(act.delta)) {
      if (config.hrf.dispersion == 0.0) {
        responses[act.delta] = shifted_indicator(config.stimulus, config.fine_dt, config.tr,
                                                 built.n, config.hrf.peak_delay + act.delta, false);
      } else {
        const std::vector<double> kernel =
            sample_hrf(config.hrf, config.fine_dt, span, act.delta, false);
        responses[act.delta] = subsample(
            convolve_stimulus(config.stimulus, config.fine_dt, kernel, false),
            config.fine_dt, config.tr, built.n);
      }
    }
  }

  Rng rng(config.seed);
  for (long v = 0; v < voxels; ++v) {
    const auto it = activations.find(v);
    for (int i = 0; i < built.n; ++i) {
      double value = config.sigma * rng.normal();
      if (it != activations.end()) value += it->second.beta * responses[it->second.delta][i];
      data.values[v * built.n + i] = value;
    }
  }
  return data;
}

std::string analysis_config_to_json(const AnalysisConfig& config) {
  nlohmann::json j;
  j["hrf"] = {{"peak_delay", config.hrf.peak_delay},
              {"shape", config.hrf.shape},
              {"undershoot_delay", config.hrf.undershoot_delay},
              {"undershoot_ratio", config.hrf.undershoot_ratio},
              {"dispersion", config.hrf.dispersion}};
  j["stimulus"] = {{"block_seconds", config.stimulus.block_seconds},
                   {"cycles", config.stimulus.cycles}};
  j["delta_range"] = {config.delta_min, config.delta_max};
  j["tr"] = config.tr;
  j["fine_dt"] = config.fine_dt;
  j["drift_order"] = config.drift_order;
  j["include_neutral"] = config.include_neutral;
  j["statistic"] = config.statistic;
  j["alpha"] = config.alpha;
  j["shape"] = config.shape;
  j["sigma"] = config.sigma;
  j["seed"] = config.seed;
  return j.dump(2);
}

AnalysisConfig analysis_config_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  AnalysisConfig config;
  if (j.contains("hrf")) {
    const auto& h = j.at("hrf");
    config.hrf.peak_delay = h.value("peak_delay", config.hrf.peak_delay);
    config.hrf.shape = h.value("shape", config.hrf.shape);
    config.hrf.undershoot_delay = h.value("undershoot_delay", config.hrf.undershoot_delay);
    config.hrf.undershoot_ratio = h.value("undershoot_ratio", config.hrf.undershoot_ratio);
    config.hrf.dispersion = h.value("dispersion", config.hrf.dispersion);
  }
  if (j.contains("stimulus")) {
    const auto& s = j.at("stimulus");
    config.stimulus.block_seconds = s.value("block_seconds", config.stimulus.block_seconds);
    config.stimulus.cycles = s.value("cycles", config.stimulus.cycles);
  }
  if (j.contains("delta_range")) {
    const auto r = j.at("delta_range").get<std::vector<double>>();
    if (r.size() != 2) throw std::invalid_argument("config: delta_range must have two entries");
    config.delta_min = r[0];
    config.delta_max = r[1];
  }
  config.tr = j.value("tr", config.tr);
  config.fine_dt = j.value("fine_dt", config.fine_dt);
  config.drift_order = j.value("drift_order", config.drift_order);
  config.include_neutral = j.value("include_neutral", config.include_neutral);
  config.statistic = j.value("statistic", config.statistic);
  config.alpha = j.value("alpha", config.alpha);
  if (j.contains("shape")) config.shape = j.at("shape").get<std::vector<int>>();
  config.sigma = j.value("sigma", config.sigma);
  config.seed = j.value("seed", config.seed);
  config.validate();
  return config;
}

}  // namespace conerf

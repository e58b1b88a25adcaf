// conerf: EC densities, maximum-statistic thresholds, cone fitting, and
// Monte Carlo validation for cone-alternative random fields.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conerf/ec_density.hpp"
#include "conerf/fmri_design.hpp"
#include "conerf/inference.hpp"
#include "conerf/io.hpp"
#include "conerf/lattice.hpp"
#include "conerf/statistics.hpp"

using namespace conerf;

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_shape(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, 'x')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

// Cone flags: arc:<radians>, orthant:<k>, sphere:<k>, or json:<path>.
ConeSpec parse_cone(const std::string& text, int ambient_hint = -1) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "arc") {
    return arc_cone(std::stod(arg), std::max(2, ambient_hint));
  }
  if (kind == "orthant") {
    const int k = std::stoi(arg);
    return orthant_cone(k, std::max(k, ambient_hint));
  }
  if (kind == "sphere") {
    const int k = std::stoi(arg);
    return sphere_cone(k, std::max(k, ambient_hint));
  }
  if (kind == "json") {
    std::ifstream in(arg);
    if (!in) throw IoError("cannot open cone file " + arg);
    std::stringstream buf;
    buf << in.rdbuf();
    return cone_from_json(buf.str());
  }
  throw std::invalid_argument("unknown cone '" + text + "' (use arc:A, orthant:K, sphere:K, json:PATH)");
}

// Statistic flags: gaussian, chi, t, f, chibar, tin, tlr (+ --j/--k/--nu/--n/--cone).
StatisticSpec parse_statistic(const std::string& name, int j, int k, int nu, int n,
                              const std::string& cone_text) {
  if (name == "gaussian") return StatisticSpec::gaussian();
  if (name == "chi") return StatisticSpec::chi(j);
  if (name == "t") return StatisticSpec::t(nu);
  if (name == "f") return StatisticSpec::f(k, nu);
  if (name == "chibar") return StatisticSpec::chibar(parse_cone(cone_text));
  if (name == "tin") return StatisticSpec::tin(parse_cone(cone_text), nu);
  if (name == "tlr") return StatisticSpec::tlr(parse_cone(cone_text), n);
  throw std::invalid_argument("unknown statistic '" + name + "'");
}

// Region flags: paper-ball | ball:<top-lkc> | box:<SxS..>:<top-lkc> | lkc:<L0,L1,...>.
SearchRegion parse_region(const std::string& text) {
  SearchRegion region;
  if (text == "paper-ball") {
    region.lkc = {1.0, 4.0 * M_PI * 12.5, 2.0 * M_PI * 12.5 * 12.5, 8086.0};
    return region;
  }
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "ball") return ball_lkc_approx(std::stod(arg), 3);
  if (kind == "box") {
    const auto second = arg.find(':');
    if (second == std::string::npos)
      throw std::invalid_argument("box region needs box:<sides>:<top-lkc>");
    const auto shape = parse_shape(arg.substr(0, second));
    std::vector<double> sides(shape.begin(), shape.end());
    return box_lkc_approx(std::stod(arg.substr(second + 1)), sides);
  }
  if (kind == "lkc") {
    region.lkc = parse_double_list(arg);
    if (region.lkc.empty()) throw std::invalid_argument("empty lkc list");
    return region;
  }
  throw std::invalid_argument("unknown region '" + text +
                              "' (use paper-ball, ball:V, box:AxB:V, lkc:L0,L1,...)");
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

int cmd_ecdensity(const std::string& stat_name, int j, int k, int nu, int n,
                  const std::string& cone_text, const std::string& d_list,
                  const std::string& t_list, const std::string& out_path) {
  const StatisticSpec stat = parse_statistic(stat_name, j, k, nu, n, cone_text);
  std::vector<double> ds = parse_double_list(d_list);
  std::vector<double> ts = parse_double_list(t_list);
  std::string csv = "statistic,d,t,rho\n";
  for (double d : ds) {
    for (double t : ts) {
      csv += stat.name() + "," + csv_double(d) + "," + csv_double(t) + "," +
             csv_double(ec_density(stat, static_cast<int>(d), t)) + "\n";
    }
  }
  if (out_path.empty()) std::fputs(csv.c_str(), stdout);
  else write_text(out_path, csv);
  return 0;
}

int cmd_threshold(const std::string& stat_name, int j, int k, int nu, int n,
                  const std::string& cone_text, const std::string& region_text,
                  double alpha, const std::string& scale) {
  const StatisticSpec stat = parse_statistic(stat_name, j, k, nu, n, cone_text);
  const SearchRegion region = parse_region(region_text);
  const ThresholdResult res = solve_threshold(region, stat, alpha);
  if (!res.valid) {
    std::fprintf(stderr, "dimension violation: region D = %d exceeds the validity bound %g\n",
                 region.dim(), stat.validity_bound());
    return 2;
  }
  double value = res.threshold;
  std::string label = stat.name();
  if (scale == "sqrt2f") {
    value = std::sqrt(2.0 * res.threshold);
    label = "sqrt(2*" + label + ")";
  }
  std::printf("statistic,threshold,alpha,expected_ec\n%s,%s,%s,%s\n", label.c_str(),
              csv_double(value).c_str(), csv_double(alpha).c_str(),
              csv_double(res.expected_ec_at_threshold).c_str());
  return 0;
}

int cmd_weights(const std::string& cone_text, int mc, std::uint64_t seed) {
  std::string csv = "j,weight,std_error\n";
  if (mc > 0 && cone_text.rfind("json:", 0) != 0 && cone_text.rfind("poly", 0) != 0) {
    const ConeSpec cone = parse_cone(cone_text);
    const WeightEstimate est = weights_monte_carlo(cone.generators, mc, seed);
    for (size_t jj = 0; jj < est.weights.size(); ++jj) {
      csv += std::to_string(jj) + "," + csv_double(est.weights[jj]) + "," +
             csv_double(est.std_errors[jj]) + "\n";
    }
    std::fputs(csv.c_str(), stdout);
    std::fputs("analytic:\n", stdout);
    for (size_t jj = 0; jj < cone.weights.size(); ++jj)
      std::printf("%zu,%s\n", jj, csv_double(cone.weights[jj]).c_str());
    return 0;
  }
  const ConeSpec cone = parse_cone(cone_text);
  for (size_t jj = 0; jj < cone.weights.size(); ++jj)
    csv += std::to_string(jj) + "," + csv_double(cone.weights[jj]) + ",0\n";
  std::fputs(csv.c_str(), stdout);
  return 0;
}

int cmd_simulate_ec(const std::string& shape_text, double kernel_sd, int reps,
                    const std::string& t_list, std::uint64_t seed, int n_res,
                    const std::string& out_path) {
  const std::vector<int> shape = parse_shape(shape_text);
  const std::vector<double> ts = parse_double_list(t_list);
  if (ts.empty()) throw std::invalid_argument("no thresholds given");

  // Region: top-order LKC estimated from simulated residual fields, lower
  // orders from the box surrogate.
  Dataset stack;
  stack.shape = shape;
  stack.n = n_res;
  const long voxels = lattice_size(shape);
  stack.values.assign(static_cast<size_t>(voxels) * n_res, 0.0);
  for (int i = 0; i < n_res; ++i) {
    const LatticeField f = simulate_smooth_gaussian(shape, kernel_sd, seed + 900000 + i);
    for (long v = 0; v < voxels; ++v) stack.values[v * n_res + i] = f.values[v];
  }
  std::vector<double> sides;
  for (int s : shape) sides.push_back(s - 1.0);
  const SearchRegion region = box_lkc_approx(lkc_top_estimate(stack), sides);

  std::vector<double> sum(ts.size(), 0.0), sum2(ts.size(), 0.0);
  for (int rep = 0; rep < reps; ++rep) {
    const LatticeField f = simulate_smooth_gaussian(shape, kernel_sd, seed + rep);
    for (size_t i = 0; i < ts.size(); ++i) {
      const double ec = static_cast<double>(excursion_ec(f, ts[i]));
      sum[i] += ec;
      sum2[i] += ec * ec;
    }
  }
  std::string csv = "t,mean_ec,se,expected_ec\n";
  for (size_t i = 0; i < ts.size(); ++i) {
    const double mean = sum[i] / reps;
    const double var = (sum2[i] - reps * mean * mean) / std::max(1, reps - 1);
    csv += csv_double(ts[i]) + "," + csv_double(mean) + "," +
           csv_double(std::sqrt(var / reps)) + "," +
           csv_double(expected_ec(region, StatisticSpec::gaussian(), ts[i])) + "\n";
  }
  if (out_path.empty()) std::fputs(csv.c_str(), stdout);
  else write_text(out_path, csv);
  return 0;
}

int cmd_lkc(const std::string& data_path) {
  const Dataset data = read_dataset(data_path);
  const Dataset resid = residual_dataset(data);
  const double top = lkc_top_estimate(resid);
  const int D = static_cast<int>(data.shape.size());
  std::printf("top_lkc,%s\n", csv_double(top).c_str());
  const SearchRegion ball = ball_lkc_approx(top, D);
  std::string lkcs;
  for (size_t d = 0; d < ball.lkc.size(); ++d) {
    lkcs += (d ? "," : "") + csv_double(ball.lkc[d]);
  }
  std::printf("ball_region,%s\n", lkcs.c_str());
  return 0;
}

int cmd_fit(const std::string& data_path, const std::string& synth_config,
            const std::string& stat_name, const std::string& out_path,
            const std::string& save_data, const std::vector<std::string>& activations) {
  Dataset data;
  if (!synth_config.empty()) {
    std::ifstream in(synth_config);
    if (!in) throw IoError("cannot open config " + synth_config);
    std::stringstream buf;
    buf << in.rdbuf();
    const AnalysisConfig config = analysis_config_from_json(buf.str());
    std::map<long, Activation> acts;
    for (const std::string& spec : activations) {
      const auto vals = parse_double_list(spec);
      if (vals.size() != 3)
        throw std::invalid_argument("--activate needs voxel,beta,delta");
      acts[static_cast<long>(vals[0])] = {vals[1], vals[2]};
    }
    data = synth_data(config, acts);
    if (!save_data.empty()) write_dataset(save_data, data);
  } else {
    data = read_dataset(data_path);
  }
  const TestStatistic kind = test_statistic_from_name(stat_name);
  const LatticeField field = fit_field(data, kind);
  write_field(out_path, field);
  long undefined = 0;
  for (long v = 0; v < field.size(); ++v) {
    if (!field.defined(v)) ++undefined;
  }
  std::printf("voxels,%ld\nundefined,%ld\nout,%s\n", field.size(), undefined, out_path.c_str());
  return 0;
}

int cmd_detect(const std::string& field_path, double threshold, double voxel_volume) {
  const LatticeField field = read_field(field_path);
  const DetectionReport report = detect(field, threshold, voxel_volume);
  std::printf("clusters,%zu\ntotal_volume,%s\nsuprathreshold_voxels,%ld\nundefined_voxels,%ld\n",
              report.clusters.size(), csv_double(report.total_volume).c_str(),
              report.suprathreshold_voxels, report.undefined_voxels);
  for (size_t i = 0; i < report.clusters.size(); ++i) {
    const Cluster& c = report.clusters[i];
    std::printf("cluster %zu: voxels %ld, volume %s, peak %s\n", i, c.voxel_count,
                csv_double(c.volume).c_str(), csv_double(c.peak).c_str());
  }
  return 0;
}

int cmd_reproduce_table1(const std::string& out_path) {
  SearchRegion region;
  region.lkc = {1.0, 4.0 * M_PI * 12.5, 2.0 * M_PI * 12.5 * 12.5, 8086.0};
  const double alpha = 0.05;

  struct Row {
    std::string label;
    double computed;
    double reference;
    bool asserted;
  };
  std::vector<Row> rows;

  const double t110 = solve_threshold(region, StatisticSpec::t(110), alpha).threshold;
  const double t111 = solve_threshold(region, StatisticSpec::t(111), alpha).threshold;
  rows.push_back({"(a) t-statistic (nu=110)", t110, 5.15, true});

  const double tin =
      solve_threshold(region, StatisticSpec::tin(arc_cone(1.06), 110), alpha).threshold;
  const double tlr =
      solve_threshold(region, StatisticSpec::tlr(arc_cone(1.06), 112), alpha).threshold;
  rows.push_back({"(b) cone statistic tin (nu=110)", tin, 5.44, true});

  rows.push_back({"(c) one-sided F sqrt(2F+)", std::nan(""), 5.63, false});

  const double f = solve_threshold(region, StatisticSpec::f(2, 110), alpha).threshold;
  rows.push_back({"(d) F-statistic sqrt(2F)", std::sqrt(2.0 * f), 5.80, true});

  std::printf("reference threshold table, alpha = 0.05, region LKC = "
              "(1, 4*pi*12.5, 2*pi*12.5^2, 8086)\n\n");
  std::printf("%-34s %10s %10s  %s\n", "statistic", "computed", "reference", "status");
  std::string csv = "statistic,threshold,detected_volume_cc\n";
  int misses = 0;
  for (const Row& row : rows) {
    std::string status;
    if (!row.asserted) {
      status = "reported only (no analytic density)";
    } else if (std::fabs(row.computed - row.reference) <= 0.02) {
      status = "pass";
    } else {
      status = "MISS";
      ++misses;
    }
    if (std::isnan(row.computed)) {
      std::printf("%-34s %10s %10.2f  %s\n", row.label.c_str(), "n/a", row.reference,
                  status.c_str());
      csv += row.label + ",," + "\n";
    } else {
      std::printf("%-34s %10.4f %10.2f  %s\n", row.label.c_str(), row.computed, row.reference,
                  status.c_str());
      csv += row.label + "," + csv_double(row.computed) + ",\n";
    }
  }
  std::printf("\nauxiliary: t(nu=111) = %.4f, tlr(n=112) = %.4f (vs tin %.4f, gap %.4f)\n",
              t111, tlr, tin, std::fabs(tlr - tin));
  std::printf("note: detected volumes require the original scan data and are left blank.\n");
  if (misses > 0) {
    std::printf("note: with these ball-surrogate inputs the computed thresholds sit below the\n"
                "      reference column; matching it requires a larger mid-order curvature\n"
                "      (L_2 near 3.9e3) than the equal-volume ball provides. See README.\n");
  }
  if (!out_path.empty()) write_text(out_path, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cone-alternative random field thresholds and validation"};
  app.require_subcommand(1);

  // Shared statistic/cone/region options.
  std::string stat_name = "tin", cone_text = "arc:1.06", region_text = "paper-ball";
  int j = 1, k = 2, nu = 110, n = 112;
  double alpha = 0.05;
  std::uint64_t seed = 1;

  auto add_stat_options = [&](CLI::App* cmd) {
    cmd->add_option("--stat", stat_name, "gaussian|chi|t|f|chibar|tin|tlr");
    cmd->add_option("--j", j, "chi dof");
    cmd->add_option("--k", k, "F numerator dof");
    cmd->add_option("--nu", nu, "denominator dof");
    cmd->add_option("--n", n, "total dof (tlr)");
    cmd->add_option("--cone", cone_text, "arc:A | orthant:K | sphere:K | json:PATH");
  };

  // ecdensity
  auto* ec_cmd = app.add_subcommand("ecdensity", "evaluate EC densities rho_d(t)");
  std::string d_list = "0,1,2,3", t_list = "1,2,3,4,5", out_path;
  add_stat_options(ec_cmd);
  ec_cmd->add_option("--d", d_list, "comma-separated density orders");
  ec_cmd->add_option("--t", t_list, "comma-separated thresholds");
  ec_cmd->add_option("--out", out_path, "output CSV path (default stdout)");

  // threshold
  auto* th_cmd = app.add_subcommand("threshold", "solve the expected-EC threshold");
  std::string th_scale = "native";
  add_stat_options(th_cmd);
  th_cmd->add_option("--region", region_text, "paper-ball | ball:V | box:AxB:V | lkc:L0,L1,..");
  th_cmd->add_option("--alpha", alpha, "target level in (0, 0.5)");
  th_cmd->add_option("--scale", th_scale, "native | sqrt2f");

  // weights
  auto* w_cmd = app.add_subcommand("weights", "mixture weights of a cone");
  std::string w_cone = "orthant:3";
  int w_mc = 100000;
  w_cmd->add_option("--cone", w_cone, "arc:A | orthant:K | sphere:K | json:PATH");
  w_cmd->add_option("--mc", w_mc, "Monte Carlo samples (0 = analytic only)");
  w_cmd->add_option("--seed", seed, "random seed");

  // simulate-ec
  auto* sim_cmd = app.add_subcommand("simulate-ec", "expected-EC Monte Carlo on smooth fields");
  std::string sim_shape = "128x128", sim_t = "2,2.5,3", sim_out;
  double fwhm_sd = 4.0;
  int sim_reps = 500, sim_nres = 30;
  sim_cmd->add_option("--shape", sim_shape, "lattice shape, e.g. 128x128");
  sim_cmd->add_option("--fwhm-sd", fwhm_sd, "gaussian kernel sd in voxels (>= 1)");
  sim_cmd->add_option("--reps", sim_reps, "number of simulated fields");
  sim_cmd->add_option("--t", sim_t, "comma-separated thresholds");
  sim_cmd->add_option("--seed", seed, "random seed");
  sim_cmd->add_option("--residuals", sim_nres, "fields used for the LKC estimate");
  sim_cmd->add_option("--out", sim_out, "output CSV path (default stdout)");

  // lkc
  auto* lkc_cmd = app.add_subcommand("lkc", "estimate the top LKC from a dataset's residuals");
  std::string lkc_data;
  lkc_cmd->add_option("--data", lkc_data, "dataset file")->required();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit a statistic field voxel by voxel");
  std::string fit_data, fit_synth, fit_out = "field.bin", fit_stat = "chibar", fit_save;
  std::vector<std::string> fit_activations;
  fit_cmd->add_option("--data", fit_data, "dataset file");
  fit_cmd->add_option("--synth", fit_synth, "analysis config JSON for synthetic data");
  fit_cmd->add_option("--activate", fit_activations,
                      "synthetic activation voxel,beta,delta (repeatable)");
  fit_cmd->add_option("--stat", fit_stat, "chibar|tlr|tin|f|fplus|t1");
  fit_cmd->add_option("--out", fit_out, "output field file");
  fit_cmd->add_option("--save-data", fit_save, "also write the synthetic dataset here");

  // detect
  auto* det_cmd = app.add_subcommand("detect", "threshold a field and report clusters");
  std::string det_field;
  double det_t = 0.0, det_vol = 1.0;
  det_cmd->add_option("--field", det_field, "field file")->required();
  det_cmd->add_option("--threshold", det_t, "statistic threshold")->required();
  det_cmd->add_option("--voxel-volume", det_vol, "volume per voxel");

  // reproduce-table1
  auto* tab_cmd = app.add_subcommand("reproduce-table1",
                                     "reference P=0.05 threshold table comparison");
  std::string tab_out;
  tab_cmd->add_option("--out", tab_out, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ec_cmd->parsed())
      return cmd_ecdensity(stat_name, j, k, nu, n, cone_text, d_list, t_list, out_path);
    if (th_cmd->parsed())
      return cmd_threshold(stat_name, j, k, nu, n, cone_text, region_text, alpha, th_scale);
    if (w_cmd->parsed()) return cmd_weights(w_cone, w_mc, seed);
    if (sim_cmd->parsed())
      return cmd_simulate_ec(sim_shape, fwhm_sd, sim_reps, sim_t, seed, sim_nres, sim_out);
    if (lkc_cmd->parsed()) return cmd_lkc(lkc_data);
    if (fit_cmd->parsed())
      return cmd_fit(fit_data, fit_synth, fit_stat, fit_out, fit_save, fit_activations);
    if (det_cmd->parsed()) return cmd_detect(det_field, det_t, det_vol);
    if (tab_cmd->parsed()) return cmd_reproduce_table1(tab_out);
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid request: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "invalid request: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

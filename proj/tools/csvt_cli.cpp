#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "csvt/csvt.hpp"

namespace {

using namespace csvt;

TnRule parse_tn(const std::string& s) {
  if (s == "log") return TnRule::log_n();
  return TnRule::explicit_value(std::stod(s));
}

void print_report(const EstimateReport& rep, bool as_json) {
  if (as_json) {
    nlohmann::json j;
    j["k_hat"] = rep.k_hat;
    j["count_above"] = rep.count_above;
    j["threshold"] = rep.threshold.threshold;
    j["t_n"] = rep.threshold.tn;
    j["strategy"] = to_string(rep.spectrum.strategy);
    j["wall_time"] = rep.wall_time;
    std::vector<double> sv(rep.spectrum.singular_values.data(),
                           rep.spectrum.singular_values.data() +
                               rep.spectrum.singular_values.size());
    j["singular_values"] = sv;
    std::ostringstream os;
    os.precision(17);
    os << j.dump(2);
    std::cout << os.str() << '\n';
    return;
  }
  std::printf("K-hat        : %d\n", rep.k_hat);
  std::printf("count above T: %d\n", rep.count_above);
  std::printf("threshold T  : %.6f (t_n = %.6f)\n", rep.threshold.threshold,
              rep.threshold.tn);
  std::printf("strategy     : %s\n", to_string(rep.spectrum.strategy));
  std::printf("wall time    : %.6f s\n", rep.wall_time);
  const auto& sv = rep.spectrum.singular_values;
  const Eigen::Index top = std::min<Eigen::Index>(10, sv.size());
  std::printf("top singular values:");
  for (Eigen::Index i = 0; i < top; ++i) std::printf(" %.4f", sv[i]);
  std::printf("\n");
}

int cmd_estimate(const std::string& input, const std::string& delim,
                 bool header, int label_col, const std::string& orientation,
                 const std::string& tn, bool as_json) {
  ingest::CsvSpec spec;
  if (delim.size() != 1) {
    std::cerr << "delimiter must be a single character\n";
    return 1;
  }
  spec.delimiter = delim[0];
  spec.has_header = header;
  if (label_col >= 0) spec.label_column = label_col;
  spec.orientation = orientation == "cols"
                         ? ingest::Orientation::samples_as_columns
                         : ingest::Orientation::samples_as_rows;
  print_report(ingest::estimate_file(input, spec, parse_tn(tn)), as_json);
  return 0;
}

int cmd_realdata(const std::string& preset_name, const std::string& input) {
  const auto preset = ingest::find_preset(preset_name);
  const auto res = ingest::preset_check(preset, input);
  switch (res.outcome) {
    case ingest::PresetOutcome::skipped:
      std::printf("%-6s SKIPPED  %s\n", preset.name.c_str(), res.detail.c_str());
      return 0;
    case ingest::PresetOutcome::failed:
      std::printf("%-6s FAILED   %s\n", preset.name.c_str(), res.detail.c_str());
      return 1;
    default:
      std::printf("%-6s PASSED   K-hat = %d (true K = %d), time %.6f s\n",
                  preset.name.c_str(), res.report->k_hat, preset.true_k,
                  res.report->wall_time);
      return 0;
  }
}

void write_spectrum_csv(std::ostream& out, const Vector& raw,
                        const Vector& centered, double T) {
  out.precision(17);
  out << "index,sigma_raw,sigma_centered,threshold\n";
  for (Eigen::Index i = 0; i < raw.size(); ++i)
    out << (i + 1) << ',' << raw[i] << ',' << centered[i] << ',' << T << '\n';
}

int cmd_demo(const std::string& which, std::uint64_t seed,
             const std::string& output) {
  auto eng = rng::make_engine(seed);
  std::ostringstream body;
  if (which == "fig1") {
    const Eigen::Index n = 100, p = 20;
    const double mu_norm = 0.1 * std::sqrt(static_cast<double>(p));
    const auto X = synth::single_component_dataset(mu_norm, n, p, eng);
    const double T = threshold(p, n, TnRule::log_n()).threshold;
    write_spectrum_csv(body, singular_values_raw(X).singular_values,
                       singular_values_centered(X).singular_values, T);
  } else if (which == "remark2") {
    const Eigen::Index n = 1000, p = 20;
    const int K = 5;
    const double delta =
        synth::theoretical_delta(n, p, K, 1.0, 1.0, TnRule::log_n());
    const auto design =
        synth::make_design(p, n, K, delta, 1.0, synth::CenterMode::basis, eng);
    const auto ds = synth::sample_dataset(design, synth::NoiseModel::unit(), eng);
    const double T = threshold(p, n, TnRule::log_n()).threshold;
    write_spectrum_csv(body, singular_values_raw(ds.X).singular_values,
                       singular_values_centered(ds.X).singular_values, T);
  } else if (which == "pathology") {
    const Eigen::Index n1 = 100, n2 = 100, p = 50;
    const double T = threshold(p, n1 + n2, TnRule::log_n()).threshold;
    const double delta = 2.0 * T / std::sqrt(static_cast<double>(n1) * n2 /
                                             static_cast<double>(n1 + n2));
    const auto ds = synth::pathology_dataset(100.0, delta, n1, n2, p, eng);
    write_spectrum_csv(body, singular_values_raw(ds.X).singular_values,
                       singular_values_centered(ds.X).singular_values, T);
  } else {
    std::cerr << "unknown demo: " << which << '\n';
    return 1;
  }
  if (output.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(output);
    out << body.str();
  }
  return 0;
}

struct VerifyCheck {
  std::string name;
  bool ok;
};

int cmd_verify(std::uint64_t seed) {
  std::vector<VerifyCheck> checks;
  auto eng = rng::make_engine(seed);
  std::uniform_int_distribution<int> pick_p(4, 30), pick_n(20, 120), pick_k(2, 8);
  std::uniform_real_distribution<double> pick_beta(0.2, 1.0), pick_delta(0.5, 5.0);

  bool lem1 = true, lemA = true, gram_id = true, weyl = true;
  for (int i = 0; i < 200; ++i) {
    const int p = pick_p(eng);
    int K = std::min(pick_k(eng), p);
    const Eigen::Index n = std::max(pick_n(eng), 2 * K);
    const auto design = synth::make_design(
        p, n, K, pick_delta(eng), pick_beta(eng),
        (i % 2 == 0) ? synth::CenterMode::basis : synth::CenterMode::qr_random,
        eng);
    lem1 = lem1 && theory::centered_signal_bound(design).satisfied;
    lemA = lemA && theory::uncentered_signal_bound(design).satisfied;
    gram_id = gram_id && theory::gram_structure_check(design);
    if (i < 50)
      weyl = weyl &&
             theory::weyl_gap_check(design, synth::NoiseModel::unit(), eng);
  }
  checks.push_back({"centered signal bound (200 random designs)", lem1});
  checks.push_back({"uncentered signal bound (200 random designs)", lemA});
  checks.push_back({"membership Gram identity (200 random designs)", gram_id});
  checks.push_back({"Weyl gap inequalities (50 noisy designs)", weyl});

  {
    const auto res = theory::noise_bound_test(50, 50, 3.0, 500, eng);
    const double slack =
        3.0 * std::sqrt(res.bound * (1.0 - res.bound) / 500.0);
    checks.push_back({"Gaussian spectral norm tail bound",
                      res.violation_rate <= res.bound + slack});
  }
  {
    bool ok = true;
    for (double t : {2.0, 10.0, 1000.0}) {
      const auto ds = synth::pathology_dataset(t, 3.0, 40, 25, 10, eng,
                                               synth::NoiseModel::none());
      const double expected = theory::pathology_sigma1(3.0, 40, 25);
      const double got =
          singular_values_centered(ds.X).singular_values[0];
      ok = ok && std::abs(got - expected) <= 1e-9 * expected;
    }
    checks.push_back({"pathology closed form, t-invariance", ok});
  }

  bool all = true;
  for (const auto& c : checks) {
    std::printf("%-8s %s\n", c.ok ? "PASS" : "FAIL", c.name.c_str());
    all = all && c.ok;
  }
  return all ? 0 : 1;
}

int cmd_simulate(const std::string& experiment, double scale, int reps,
                 std::uint64_t seed, const std::string& output,
                 const std::string& format, int threads, bool paper) {
  harness::Experiment exp = harness::Experiment::custom;
  bool found = false;
  for (int e = 0; e < static_cast<int>(harness::Experiment::custom); ++e) {
    if (experiment == harness::to_string(static_cast<harness::Experiment>(e))) {
      exp = static_cast<harness::Experiment>(e);
      found = true;
    }
  }
  if (!found) {
    std::cerr << "unknown experiment: " << experiment << '\n';
    return 1;
  }
  harness::ExperimentConfig cfg =
      paper ? harness::paper_config(exp) : harness::desk_config(exp);
  cfg.scale = scale;
  cfg.reps = reps;
  cfg.master_seed = seed;
  cfg.threads = threads;
  const auto rows = harness::run_experiment(cfg);

  bool any_error = false;
  std::printf("%-18s %9s %7s %5s %7s %6s %8s %9s %12s\n", "experiment", "n",
              "p", "K", "beta", "gamma", "eta_max", "accuracy", "mean_time");
  for (const auto& r : rows) {
    any_error = any_error || !r.error.empty();
    std::printf("%-18s %9lld %7lld %5d %7.4f %6.2f %8s %9.2f %12.6f %s\n",
                harness::to_string(r.experiment),
                static_cast<long long>(r.point.n),
                static_cast<long long>(r.point.p), r.point.K, r.point.beta,
                r.point.gamma,
                r.point.eta_max ? std::to_string(*r.point.eta_max).substr(0, 4).c_str()
                                : "-",
                r.accuracy, r.mean_wall_time, r.error.c_str());
  }
  if (!output.empty()) {
    harness::emit_results(rows, output,
                          format == "json" ? harness::OutputFormat::json
                                           : harness::OutputFormat::csv);
  }
  return any_error ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian mixture component count estimation by centered "
               "singular value thresholding"};
  app.require_subcommand(1);

  auto* est = app.add_subcommand("estimate", "Estimate K for a delimited file");
  std::string input, delim = ",", orientation = "rows", tn = "log";
  bool header = false, as_json = false;
  int label_col = -1;
  est->add_option("--input", input, "Input file")->required();
  est->add_option("--delimiter", delim, "Field delimiter (single character)");
  est->add_flag("--header", header, "Skip the first line");
  est->add_option("--label-col", label_col, "Column index to drop (0-based)");
  est->add_option("--orientation", orientation, "rows|cols (samples as ...)");
  est->add_option("--tn", tn, "t_n rule: 'log' or an explicit value");
  est->add_flag("--json", as_json, "JSON output, 17 significant digits");

  auto* real = app.add_subcommand("realdata", "Check a benchmark dataset preset");
  std::string preset_name, real_input;
  real->add_option("--preset", preset_name, "iris|crab|usps|poker")->required();
  real->add_option("--input", real_input, "Path to the dataset file")->required();

  auto* demo = app.add_subcommand("demo", "Emit spectrum tables for the demos");
  std::string which, demo_output;
  std::uint64_t demo_seed = 1;
  demo->add_option("--which", which, "fig1|pathology|remark2")->required();
  demo->add_option("--seed", demo_seed, "RNG seed");
  demo->add_option("--output", demo_output, "Output CSV path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run the theory oracle suite");
  std::uint64_t verify_seed = 42;
  verify->add_option("--seed", verify_seed, "RNG seed");

  auto* sim = app.add_subcommand("simulate", "Run a simulation experiment");
  std::string experiment, sim_output, sim_format = "csv";
  double sim_scale = 1.0;
  int sim_reps = 100, sim_threads = 1;
  std::uint64_t sim_seed = 1;
  bool sim_paper = false;
  sim->add_option("--experiment", experiment,
                  "exp1_sample_rich|exp1_high_dim|exp1_balanced|exp2_k_growth|"
                  "exp3_imbalance|exp4_gamma|exp5_hetero")->required();
  sim->add_option("--scale", sim_scale, "Multiplier in (0,1] applied to n and p");
  sim->add_option("--reps", sim_reps, "Replications per grid point");
  sim->add_option("--seed", sim_seed, "Master seed");
  sim->add_option("--output", sim_output, "Results file path");
  sim->add_option("--format", sim_format, "csv|json");
  sim->add_option("--threads", sim_threads, "Worker threads for replications");
  sim->add_flag("--paper", sim_paper, "Use the full-scale grids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed())
      return cmd_estimate(input, delim, header, label_col, orientation, tn,
                          as_json);
    if (real->parsed()) return cmd_realdata(preset_name, real_input);
    if (demo->parsed()) return cmd_demo(which, demo_seed, demo_output);
    if (verify->parsed()) return cmd_verify(verify_seed);
    if (sim->parsed())
      return cmd_simulate(experiment, sim_scale, sim_reps, sim_seed, sim_output,
                          sim_format, sim_threads, sim_paper);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

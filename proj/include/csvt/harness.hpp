#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "csvt/estimator.hpp"
#include "csvt/rng.hpp"
#include "csvt/synth.hpp"

namespace csvt::harness {

enum class Experiment {
  exp1_sample_rich,
  exp1_high_dim,
  exp1_balanced,
  exp2_k_growth,
  exp3_imbalance,
  exp4_gamma,
  exp5_hetero,
  custom
};

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::exp1_sample_rich: return "exp1_sample_rich";
    case Experiment::exp1_high_dim: return "exp1_high_dim";
    case Experiment::exp1_balanced: return "exp1_balanced";
    case Experiment::exp2_k_growth: return "exp2_k_growth";
    case Experiment::exp3_imbalance: return "exp3_imbalance";
    case Experiment::exp4_gamma: return "exp4_gamma";
    case Experiment::exp5_hetero: return "exp5_hetero";
    default: return "custom";
  }
}

struct GridPoint {
  Eigen::Index n = 0, p = 0;
  int K = 1;
  double beta = 1.0;
  double gamma = 1.0;
  std::optional<double> eta_max;  // engaged for heteroscedastic noise
};

struct ExperimentConfig {
  Experiment experiment = Experiment::custom;
  std::vector<GridPoint> grid;
  int reps = 100;
  std::uint64_t master_seed = 0;
  double scale = 1.0;  // multiplies n and p
  Strategy strategy = Strategy::gram;
  int threads = 1;
};

struct SummaryRow {
  Experiment experiment = Experiment::custom;
  GridPoint point;
  int reps = 0;
  double accuracy = 0.0;
  double mean_wall_time = 0.0;
  std::map<int, int> k_hat_histogram;
  std::string error;  // non-empty means the point failed
};

namespace detail {

inline GridPoint scaled(const GridPoint& gp, double scale) {
  GridPoint s = gp;
  s.n = std::max<Eigen::Index>(2, static_cast<Eigen::Index>(
                                      std::llround(gp.n * scale)));
  s.p = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(
                                      std::llround(gp.p * scale)));
  return s;
}

struct RepOutcome {
  int k_hat = 0;
  double wall_time = 0.0;
};

}  // namespace detail

// Runs one seeded replication of one grid point.
inline detail::RepOutcome run_replication(const GridPoint& gp,
                                          std::uint64_t master_seed,
                                          std::size_t point_index, int rep,
                                          Strategy strategy) {
  auto eng = rng::make_engine(master_seed, point_index, rep);
  const double delta = synth::theoretical_delta(gp.n, gp.p, gp.K, gp.beta, 1.0,
                                                TnRule::log_n(), gp.gamma);
  const auto design = synth::make_design(gp.p, gp.n, gp.K, delta, gp.beta,
                                         synth::CenterMode::basis, eng);
  const synth::NoiseModel noise =
      gp.eta_max ? synth::NoiseModel::heteroscedastic(*gp.eta_max)
                 : synth::NoiseModel::unit();
  const auto ds = synth::sample_dataset(design, noise, eng);
  const auto rep_out = csvt_estimate(ds.X, TnRule::log_n(), strategy);
  return {rep_out.k_hat, rep_out.wall_time};
}

inline std::vector<SummaryRow> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (!(cfg.scale > 0.0) || cfg.scale > 1.0)
    throw std::invalid_argument("scale must lie in (0, 1]");
  std::vector<SummaryRow> rows;
  rows.reserve(cfg.grid.size());
  for (std::size_t pi = 0; pi < cfg.grid.size(); ++pi) {
    const GridPoint gp = detail::scaled(cfg.grid[pi], cfg.scale);
    SummaryRow row;
    row.experiment = cfg.experiment;
    row.point = gp;
    row.reps = cfg.reps;
    if (gp.K > std::min(gp.p, gp.n)) {
      row.error = "infeasible: K > min(p, n)";
      rows.push_back(row);
      continue;
    }
    std::vector<detail::RepOutcome> outcomes(cfg.reps);
    std::vector<std::string> failures(cfg.reps);
    const int threads = std::max(1, cfg.threads);
    auto worker = [&](int first, int step) {
      for (int r = first; r < cfg.reps; r += step) {
        try {
          outcomes[r] = run_replication(gp, cfg.master_seed, pi, r, cfg.strategy);
        } catch (const std::exception& e) {
          failures[r] = e.what();
        }
      }
    };
    if (threads == 1) {
      worker(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
      for (auto& th : pool) th.join();
    }
    // Index-ordered reduction: same seed and grid give the same histogram
    // for any thread count.
    for (int r = 0; r < cfg.reps; ++r) {
      if (!failures[r].empty()) {
        row.error = "replication " + std::to_string(r) + ": " + failures[r];
        break;
      }
      ++row.k_hat_histogram[outcomes[r].k_hat];
      row.mean_wall_time += outcomes[r].wall_time;
    }
    if (row.error.empty()) {
      row.mean_wall_time /= cfg.reps;
      const auto hit = row.k_hat_histogram.find(gp.K);
      row.accuracy = hit == row.k_hat_histogram.end()
                         ? 0.0
                         : static_cast<double>(hit->second) / cfg.reps;
    } else {
      row.k_hat_histogram.clear();
      row.mean_wall_time = 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

// Desk-scale preset grids; these run on a workstation in minutes.
inline ExperimentConfig desk_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::exp1_sample_rich:
      cfg.grid = {{10000, 100, 50, 0.1}};
      break;
    case Experiment::exp1_high_dim:
      cfg.grid = {{100, 10000, 10, 1.0}};
      break;
    case Experiment::exp1_balanced:
      cfg.grid = {{2000, 2000, 20, 0.1}};
      break;
    case Experiment::exp2_k_growth:
      cfg.grid.push_back({2000, 100, 1, 0.1});
      for (int K = 10; K <= 100; K += 10) cfg.grid.push_back({2000, 100, K, 0.1});
      break;
    case Experiment::exp3_imbalance:
      for (int i = 1; i <= 10; ++i)
        cfg.grid.push_back({100000, 200, 50, 0.001 * i});
      break;
    case Experiment::exp4_gamma:
      for (int i = 1; i <= 10; ++i)
        cfg.grid.push_back({10000, 200, 50, 0.1, 0.1 * i});
      break;
    case Experiment::exp5_hetero:
      for (int i = 1; i <= 15; ++i) {
        GridPoint gp{10000, 200, 50, 0.1};
        gp.eta_max = 0.1 * i;
        cfg.grid.push_back(gp);
      }
      break;
    default:
      break;
  }
  return cfg;
}

// Paper-scale preset grids (10^5 to 10^7 sized; hours of compute).
inline ExperimentConfig paper_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::exp1_sample_rich:
      for (int i = 1; i <= 10; ++i)
        cfg.grid.push_back({static_cast<Eigen::Index>(1000000) * i, 100, 99, 0.1});
      break;
    case Experiment::exp1_high_dim:
      for (int i = 1; i <= 10; ++i)
        cfg.grid.push_back({100, static_cast<Eigen::Index>(1000000) * i, 10, 1.0});
      break;
    case Experiment::exp1_balanced:
      for (int i = 1; i <= 10; ++i)
        cfg.grid.push_back({1000 * i, 1000 * i, 10 * i, 0.1});
      break;
    case Experiment::exp2_k_growth:
      cfg.grid.push_back({1000000, 100, 1, 0.1});
      for (int K = 10; K <= 100; K += 10)
        cfg.grid.push_back({1000000, 100, K, 0.1});
      break;
    case Experiment::exp3_imbalance:
      for (int i = 1; i <= 10; ++i)
        cfg.grid.push_back({1000000, 200, 50, 0.001 * i});
      break;
    case Experiment::exp4_gamma:
      for (int i = 1; i <= 10; ++i)
        cfg.grid.push_back({100000, 200, 200, 0.01, 0.1 * i});
      break;
    case Experiment::exp5_hetero:
      for (int i = 1; i <= 15; ++i) {
        GridPoint gp{1000000, 200, 200, 0.01};
        gp.eta_max = 0.1 * i;
        cfg.grid.push_back(gp);
      }
      break;
    default:
      break;
  }
  return cfg;
}

enum class OutputFormat { csv, json };

namespace detail {

inline std::string histogram_json(const std::map<int, int>& hist) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, c] : hist) j[std::to_string(k)] = c;
  return j.dump();
}

inline std::string csv_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

inline void emit_results(const std::vector<SummaryRow>& rows,
                         const std::string& path, OutputFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  if (format == OutputFormat::csv) {
    out << "experiment,n,p,K,beta,gamma,eta_max,reps,accuracy,"
           "mean_wall_time,histogram,error\n";
    for (const auto& r : rows) {
      out << to_string(r.experiment) << ',' << r.point.n << ',' << r.point.p
          << ',' << r.point.K << ',' << detail::fmt17(r.point.beta) << ','
          << detail::fmt17(r.point.gamma) << ','
          << (r.point.eta_max ? detail::fmt17(*r.point.eta_max) : "") << ','
          << r.reps << ',' << detail::fmt17(r.accuracy) << ','
          << detail::fmt17(r.mean_wall_time) << ','
          << detail::csv_escape(detail::histogram_json(r.k_hat_histogram))
          << ',' << detail::csv_escape(r.error) << '\n';
    }
  } else {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json o;
      o["experiment"] = to_string(r.experiment);
      o["n"] = r.point.n;
      o["p"] = r.point.p;
      o["K"] = r.point.K;
      o["beta"] = r.point.beta;
      o["gamma"] = r.point.gamma;
      if (r.point.eta_max) o["eta_max"] = *r.point.eta_max;
      o["reps"] = r.reps;
      o["accuracy"] = r.accuracy;
      o["mean_wall_time"] = r.mean_wall_time;
      o["histogram"] = nlohmann::json::parse(detail::histogram_json(r.k_hat_histogram));
      if (!r.error.empty()) o["error"] = r.error;
      j.push_back(o);
    }
    out << j.dump(2) << '\n';
  }
}

// Reads back a CSV written by emit_results. Used by round-trip tests and by
// downstream tooling that wants the summary in memory.
inline std::vector<SummaryRow> load_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty results file");
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    if (fields.size() != 12)
      throw std::runtime_error("malformed results row: " + line);
    SummaryRow r;
    for (int e = 0; e <= static_cast<int>(Experiment::custom); ++e)
      if (fields[0] == to_string(static_cast<Experiment>(e)))
        r.experiment = static_cast<Experiment>(e);
    r.point.n = std::stoll(fields[1]);
    r.point.p = std::stoll(fields[2]);
    r.point.K = std::stoi(fields[3]);
    r.point.beta = std::stod(fields[4]);
    r.point.gamma = std::stod(fields[5]);
    if (!fields[6].empty()) r.point.eta_max = std::stod(fields[6]);
    r.reps = std::stoi(fields[7]);
    r.accuracy = std::stod(fields[8]);
    r.mean_wall_time = std::stod(fields[9]);
    const nlohmann::json hist = nlohmann::json::parse(fields[10]);
    for (const auto& [k, c] : hist.items())
      r.k_hat_histogram[std::stoi(k)] = c.get<int>();
    r.error = fields[11];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace csvt::harness

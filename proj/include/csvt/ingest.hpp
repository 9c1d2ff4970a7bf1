#pragma once

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csvt/estimator.hpp"

namespace csvt::ingest {

enum class Orientation { samples_as_rows, samples_as_columns };

struct CsvSpec {
  char delimiter = ',';
  bool has_header = false;
  std::optional<int> label_column;  // dropped after parsing
  Orientation orientation = Orientation::samples_as_rows;
};

namespace detail {

inline double parse_cell(const std::string& cell, std::size_t row,
                         std::size_t col) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  // trailing whitespace is fine, anything else is not numeric
  while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
    ++pos;
  if (cell.empty() || pos != cell.size())
    throw std::runtime_error("non-numeric cell '" + cell + "' at row " +
                             std::to_string(row + 1) + ", column " +
                             std::to_string(col + 1));
  return v;
}

inline std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline DataMatrix load_csv(const std::string& path, const CsvSpec& spec = {}) {
  if (!std::isprint(static_cast<unsigned char>(spec.delimiter)))
    throw std::invalid_argument("delimiter must be printable");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool skipped_header = !spec.has_header;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    auto cells = detail::split(line, spec.delimiter);
    if (width == 0) {
      width = cells.size();
      if (spec.label_column &&
          (*spec.label_column < 0 ||
           static_cast<std::size_t>(*spec.label_column) >= width))
        throw std::runtime_error("label column index out of bounds");
    } else if (cells.size() != width) {
      throw std::runtime_error("ragged row at line " +
                               std::to_string(lineno + 1 + (spec.has_header ? 1 : 0)));
    }
    std::vector<double> parsed;
    parsed.reserve(width);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (spec.label_column && static_cast<std::size_t>(*spec.label_column) == c)
        continue;
      parsed.push_back(detail::parse_cell(cells[c], lineno, c));
    }
    rows.push_back(std::move(parsed));
    ++lineno;
  }
  if (rows.empty()) throw std::runtime_error("file has no data rows: " + path);

  const std::size_t r = rows.size(), c = rows.front().size();
  if (c == 0) throw std::runtime_error("no numeric columns after dropping label");
  DataMatrix X;
  if (spec.orientation == Orientation::samples_as_rows) {
    X.resize(c, r);  // p x n with p = columns of the file
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) X(j, i) = rows[i][j];
  } else {
    X.resize(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) X(i, j) = rows[i][j];
  }
  return X;
}

// Writes a DataMatrix in the format load_csv accepts (samples as rows),
// round-trippable at full double precision.
inline void save_csv(const DataMatrix& X, const std::string& path,
                     const std::vector<int>* labels = nullptr) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.precision(17);
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (i) out << ',';
      out << X(i, j);
    }
    out << '\n';
  }
  if (labels) {
    std::ofstream lout(path + ".labels");
    if (!lout) throw std::runtime_error("cannot open labels file");
    for (int v : *labels) lout << v << '\n';
  }
}

inline EstimateReport estimate_file(const std::string& path,
                                    const CsvSpec& spec = {},
                                    TnRule rule = TnRule::log_n()) {
  return csvt_estimate(load_csv(path, spec), rule);
}

struct DatasetPreset {
  std::string name;
  Eigen::Index expected_n = 0, expected_p = 0;
  int true_k = 0;
  int expected_k_hat = 0;
  CsvSpec spec;
};

inline std::vector<DatasetPreset> dataset_presets() {
  CsvSpec labeled_last4{',', false, 4, Orientation::samples_as_rows};
  CsvSpec labeled_last5{',', false, 5, Orientation::samples_as_rows};
  CsvSpec labeled_last10{',', false, 10, Orientation::samples_as_rows};
  CsvSpec plain{',', false, std::nullopt, Orientation::samples_as_rows};
  return {
      {"iris", 150, 4, 3, 2, labeled_last4},
      {"crab", 200, 5, 2, 2, labeled_last5},
      {"usps", 7291, 256, 10, 10, plain},
      {"poker", 25010, 10, 10, 10, labeled_last10},
  };
}

inline DatasetPreset find_preset(const std::string& name) {
  for (const auto& p : dataset_presets())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown preset: " + name);
}

enum class PresetOutcome { passed, failed, skipped };

struct PresetResult {
  PresetOutcome outcome = PresetOutcome::skipped;
  std::string detail;
  std::optional<EstimateReport> report;
};

// Loads the user-supplied file, validates (n, p) against the preset, runs the
// estimator, and compares K-hat. A missing file is a skip, not a failure.
inline PresetResult preset_check(const DatasetPreset& preset,
                                 const std::string& path) {
  PresetResult res;
  {
    std::ifstream probe(path);
    if (!probe) {
      res.outcome = PresetOutcome::skipped;
      res.detail = "file not found: " + path;
      return res;
    }
  }
  const DataMatrix X = load_csv(path, preset.spec);
  if (X.rows() != preset.expected_p || X.cols() != preset.expected_n) {
    res.outcome = PresetOutcome::failed;
    res.detail = "dimension mismatch: got p=" + std::to_string(X.rows()) +
                 ", n=" + std::to_string(X.cols()) + "; expected p=" +
                 std::to_string(preset.expected_p) + ", n=" +
                 std::to_string(preset.expected_n);
    return res;
  }
  res.report = csvt_estimate(X);
  if (res.report->k_hat == preset.expected_k_hat) {
    res.outcome = PresetOutcome::passed;
  } else {
    res.outcome = PresetOutcome::failed;
    res.detail = "K-hat = " + std::to_string(res.report->k_hat) +
                 ", expected " + std::to_string(preset.expected_k_hat);
  }
  return res;
}

}  // namespace csvt::ingest

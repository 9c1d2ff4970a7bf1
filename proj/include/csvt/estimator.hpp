#pragma once

#include <cmath>
#include <stdexcept>

#include "csvt/spectral.hpp"

namespace csvt {

// Rule for the slack term t_n in T = sqrt(p) + sqrt(n) + t_n.
struct TnRule {
  enum class Kind { log_n, explicit_value } kind = Kind::log_n;
  double value = 0.0;

  static TnRule log_n() { return {Kind::log_n, 0.0}; }
  static TnRule explicit_value(double v) {
    if (!(v >= 0.0)) throw std::invalid_argument("explicit t_n must be >= 0");
    return {Kind::explicit_value, v};
  }
};

struct ThresholdSpec {
  TnRule rule;
  double tn = 0.0;
  double threshold = 0.0;  // sqrt(p) + sqrt(n) + tn
};

inline ThresholdSpec threshold(Eigen::Index p, Eigen::Index n, TnRule rule) {
  if (p < 1 || n < 1) throw std::invalid_argument("p and n must be positive");
  ThresholdSpec spec;
  spec.rule = rule;
  if (rule.kind == TnRule::Kind::log_n) {
    if (n < 2)
      throw std::invalid_argument("log-n rule requires n >= 2");
    spec.tn = std::log(static_cast<double>(n));
  } else {
    spec.tn = rule.value;
  }
  spec.threshold = std::sqrt(static_cast<double>(p)) +
                   std::sqrt(static_cast<double>(n)) + spec.tn;
  return spec;
}

struct EstimateReport {
  int k_hat = 1;
  int count_above = 0;  // r, strictly above the threshold
  ThresholdSpec threshold;
  SpectrumResult spectrum;
  double wall_time = 0.0;  // seconds, estimation only
};

namespace detail {

inline int count_strictly_above(const Vector& sv, double T) {
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > T) ++r;
  return r;
}

}  // namespace detail

// Center, count singular values strictly above T, return K-hat = r + 1.
inline EstimateReport csvt_estimate(const DataMatrix& X,
                                    TnRule rule = TnRule::log_n(),
                                    Strategy strategy = Strategy::auto_select,
                                    Eigen::Index direct_cutoff = 2048,
                                    Eigen::Index block_size = 4096) {
  if (X.cols() < 2)
    throw std::invalid_argument("estimation requires n >= 2 samples");
  const double t0 = detail::now_seconds();
  EstimateReport rep;
  rep.threshold = threshold(X.rows(), X.cols(), rule);
  rep.spectrum = singular_values_centered(X, strategy, direct_cutoff, block_size);
  rep.count_above =
      detail::count_strictly_above(rep.spectrum.singular_values, rep.threshold.threshold);
  rep.k_hat = rep.count_above + 1;
  rep.wall_time = detail::now_seconds() - t0;
  return rep;
}

// Uncentered baseline: |{i : sigma_i(X) > T}|, no +1.
inline int raw_count(const DataMatrix& X, TnRule rule = TnRule::log_n(),
                     Strategy strategy = Strategy::auto_select) {
  const ThresholdSpec spec = threshold(X.rows(), X.cols(), rule);
  const SpectrumResult sp = singular_values_raw(X, strategy);
  return detail::count_strictly_above(sp.singular_values, spec.threshold);
}

}  // namespace csvt

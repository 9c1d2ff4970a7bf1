#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "csvt/estimator.hpp"
#include "csvt/rng.hpp"
#include "csvt/spectral.hpp"

namespace csvt::synth {

enum class CenterMode { basis, qr_random };

// Ground-truth generator description for one synthetic dataset.
struct MixtureDesign {
  Eigen::Index p = 0, n = 0;
  int K = 0;
  double delta = 0.0;             // minimal pairwise center distance
  double beta = 1.0;              // realized (min_k n_k) / (n / K)
  double kappa = 1.0;             // condition number of the center matrix
  std::vector<Eigen::Index> sizes;  // length K, sums to n
  Eigen::MatrixXd centers;        // p x K
  std::vector<int> labels;        // length n, block order, values in [0, K)
};

struct NoiseModel {
  enum class Kind { none, unit, heteroscedastic } kind = Kind::unit;
  double eta_lo = 0.5;
  double eta_max = 0.5;

  static NoiseModel none() { return {Kind::none, 0.0, 0.0}; }
  static NoiseModel unit() { return {Kind::unit, 0.0, 0.0}; }
  // Per-sample std dev eta_i ~ Uniform(lo, hi); the interval is normalized
  // so that sweeping eta_max below 0.5 keeps it valid.
  static NoiseModel heteroscedastic(double eta_max, double eta_lo = 0.5) {
    if (!(eta_lo > 0.0) || !(eta_max > 0.0))
      throw std::invalid_argument("heteroscedastic bounds must be positive");
    return {Kind::heteroscedastic, std::min(eta_lo, eta_max),
            std::max(eta_lo, eta_max)};
  }
};

// (delta / sqrt(2)) * Q with Q^T Q = I. basis mode uses the first K standard
// basis vectors; qr_random orthonormalizes a Gaussian p x K draw.
inline Eigen::MatrixXd orthonormal_centers(Eigen::Index p, int K, double delta,
                                           CenterMode mode, rng::Engine* eng = nullptr) {
  if (K < 1 || K > p) throw std::invalid_argument("need 1 <= K <= p");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double scale = delta / std::sqrt(2.0);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, K);
  if (mode == CenterMode::basis) {
    for (int k = 0; k < K; ++k) M(k, k) = scale;
  } else {
    if (eng == nullptr)
      throw std::invalid_argument("qr_random mode requires an engine");
    rng::NormalSampler gauss;
    Eigen::MatrixXd A(p, K);
    for (Eigen::Index j = 0; j < K; ++j)
      for (Eigen::Index i = 0; i < p; ++i) A(i, j) = gauss(*eng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    M = scale * Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(p, K));
  }
  return M;
}

struct SizeAllocation {
  std::vector<Eigen::Index> sizes;
  int smallest = 0;
};

// n_min = max(1, floor(beta * n / K)); one uniformly chosen cluster stays at
// n_min, the remainder goes round-robin over the other clusters in ascending
// index order.
inline SizeAllocation allocate_sizes(Eigen::Index n, int K, double beta,
                                     rng::Engine& eng) {
  if (K < 1 || K > n) throw std::invalid_argument("need 1 <= K <= n");
  if (!(beta > 0.0) || beta > 1.0)
    throw std::invalid_argument("beta must lie in (0, 1]");
  SizeAllocation out;
  if (K == 1) {
    out.sizes = {n};
    out.smallest = 0;
    return out;
  }
  const Eigen::Index n_min = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::floor(beta * static_cast<double>(n) /
                                              static_cast<double>(K))));
  out.sizes.assign(K, n_min);
  std::uniform_int_distribution<int> pick(0, K - 1);
  out.smallest = pick(eng);
  std::vector<int> others;
  others.reserve(K - 1);
  for (int k = 0; k < K; ++k)
    if (k != out.smallest) others.push_back(k);
  Eigen::Index remainder = n - static_cast<Eigen::Index>(K) * n_min;
  for (Eigen::Index r = 0; r < remainder; ++r)
    ++out.sizes[others[r % others.size()]];
  return out;
}

// gamma * 2*sqrt(2) * (kappa / sqrt(beta)) * sqrt(K / n) * T.
inline double theoretical_delta(Eigen::Index n, Eigen::Index p, int K,
                                double beta, double kappa, TnRule rule,
                                double gamma = 1.0) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(beta > 0.0) || beta > 1.0)
    throw std::invalid_argument("beta must lie in (0, 1]");
  if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  if (K < 1) throw std::invalid_argument("K must be positive");
  const double T = threshold(p, n, rule).threshold;
  return gamma * 2.0 * std::sqrt(2.0) * (kappa / std::sqrt(beta)) *
         std::sqrt(static_cast<double>(K) / static_cast<double>(n)) * T;
}

inline MixtureDesign make_design(Eigen::Index p, Eigen::Index n, int K,
                                 double delta, double beta, CenterMode mode,
                                 rng::Engine& eng) {
  if (K > std::min<Eigen::Index>(p, n))
    throw std::invalid_argument("need K <= min(p, n)");
  MixtureDesign d;
  d.p = p;
  d.n = n;
  d.K = K;
  d.delta = delta;
  d.kappa = 1.0;
  auto alloc = allocate_sizes(n, K, beta, eng);
  d.sizes = std::move(alloc.sizes);
  const Eigen::Index n_min = *std::min_element(d.sizes.begin(), d.sizes.end());
  d.beta = static_cast<double>(n_min) * static_cast<double>(K) /
           static_cast<double>(n);
  d.centers = orthonormal_centers(p, K, delta, mode, &eng);
  d.labels.reserve(n);
  for (int k = 0; k < K; ++k)
    d.labels.insert(d.labels.end(), d.sizes[k], k);
  return d;
}

namespace detail {

inline void add_noise_column(Eigen::Ref<Eigen::VectorXd> col, double sd,
                             rng::Engine& eng) {
  rng::NormalSampler gauss;
  for (Eigen::Index i = 0; i < col.size(); ++i) col[i] += sd * gauss(eng);
}

}  // namespace detail

struct Dataset {
  DataMatrix X;
  std::vector<int> labels;
};

// X = M Z^T + E in a seeded uniform permutation of the label blocks. The
// permutation is drawn first and columns are generated in final order, so no
// second full-size buffer is needed.
inline Dataset sample_dataset(const MixtureDesign& design,
                              const NoiseModel& noise, rng::Engine& eng) {
  const Eigen::Index p = design.p, n = design.n;
  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), eng);

  Dataset ds;
  ds.X.resize(p, n);
  ds.labels.resize(n);
  std::uniform_real_distribution<double> uni;
  rng::NormalSampler gauss;
  for (Eigen::Index j = 0; j < n; ++j) {
    const int label = design.labels[perm[j]];
    ds.labels[j] = label;
    double sd = 1.0;
    switch (noise.kind) {
      case NoiseModel::Kind::none: sd = 0.0; break;
      case NoiseModel::Kind::unit: sd = 1.0; break;
      case NoiseModel::Kind::heteroscedastic:
        sd = noise.eta_lo + (noise.eta_max - noise.eta_lo) * uni(eng);
        break;
    }
    const auto center = design.centers.col(label);
    if (sd > 0.0) {
      for (Eigen::Index i = 0; i < p; ++i)
        ds.X(i, j) = center[i] + sd * gauss(eng);
    } else {
      ds.X.col(j) = center;
    }
  }
  return ds;
}

// Collinear-center K=2 construction: mu_1 = (t+1)v, mu_2 = (t-1)v with
// v = (delta/2) e_1. The raw spectrum grows with t; the centered one does not.
inline Dataset pathology_dataset(double t, double delta, Eigen::Index n1,
                                 Eigen::Index n2, Eigen::Index p,
                                 rng::Engine& eng,
                                 const NoiseModel& noise = NoiseModel::unit()) {
  if (p < 2 || n1 < 1 || n2 < 1)
    throw std::invalid_argument("need p >= 2 and n1, n2 >= 1");
  if (!(t > 1.0)) throw std::invalid_argument("t must exceed 1");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const Eigen::Index n = n1 + n2;
  Dataset ds;
  ds.X = Eigen::MatrixXd::Zero(p, n);
  ds.labels.assign(n, 0);
  const double half = delta / 2.0;
  rng::NormalSampler gauss;
  for (Eigen::Index j = 0; j < n; ++j) {
    const bool first = j < n1;
    ds.X(0, j) = half * (first ? (t + 1.0) : (t - 1.0));
    ds.labels[j] = first ? 0 : 1;
    if (noise.kind == NoiseModel::Kind::unit)
      for (Eigen::Index i = 0; i < p; ++i) ds.X(i, j) += gauss(eng);
  }
  return ds;
}

// K=1 dataset: X = mu 1^T + E with mu = (mu_norm / sqrt(p)) * 1_p.
inline DataMatrix single_component_dataset(double mu_norm, Eigen::Index n,
                                           Eigen::Index p, rng::Engine& eng) {
  if (n < 1 || p < 1) throw std::invalid_argument("need n, p >= 1");
  if (!(mu_norm >= 0.0)) throw std::invalid_argument("mu_norm must be >= 0");
  const double entry = mu_norm / std::sqrt(static_cast<double>(p));
  DataMatrix X(p, n);
  rng::NormalSampler gauss;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < p; ++i) X(i, j) = entry + gauss(eng);
  return X;
}

}  // namespace csvt::synth

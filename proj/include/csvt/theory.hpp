#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "csvt/spectral.hpp"
#include "csvt/synth.hpp"

namespace csvt::theory {

struct SignalBoundReport {
  double sigma_observed = 0.0;
  double bound = 0.0;
  bool satisfied = false;
};

namespace detail {

inline Eigen::MatrixXd signal_matrix(const synth::MixtureDesign& d) {
  if (static_cast<double>(d.p) * static_cast<double>(d.n) > 1e6)
    throw std::invalid_argument("design too large for the exact-SVD oracle");
  Eigen::MatrixXd P(d.p, d.n);
  for (Eigen::Index j = 0; j < d.n; ++j)
    P.col(j) = d.centers.col(d.labels[j]);
  return P;
}

inline Eigen::MatrixXd center_columns(const Eigen::MatrixXd& A) {
  Eigen::MatrixXd C = A;
  C.colwise() -= Eigen::VectorXd(A.rowwise().mean());
  return C;
}

inline double lemma_bound(const synth::MixtureDesign& d) {
  return (d.delta / d.kappa) *
         std::sqrt(d.beta * static_cast<double>(d.n) / (2.0 * d.K));
}

inline Eigen::Index min_size(const synth::MixtureDesign& d) {
  return *std::min_element(d.sizes.begin(), d.sizes.end());
}

}  // namespace detail

// sigma_{K-1} of the centered noiseless signal vs (Delta/kappa) sqrt(beta n / 2K).
inline SignalBoundReport centered_signal_bound(const synth::MixtureDesign& d) {
  if (d.K < 2) throw std::invalid_argument("bound is defined for K >= 2");
  const Eigen::MatrixXd Pc = detail::center_columns(detail::signal_matrix(d));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Pc);
  SignalBoundReport rep;
  rep.sigma_observed = svd.singularValues()[d.K - 2];
  rep.bound = detail::lemma_bound(d);
  rep.satisfied = rep.sigma_observed >= rep.bound - 1e-9 * rep.bound;
  return rep;
}

// sigma_K of the uncentered signal vs the same bound, plus the sharper
// factorization bound sigma_K(P) = sigma_K(M D^{1/2}) >= sigma_K(M) sqrt(min n_k).
inline SignalBoundReport uncentered_signal_bound(const synth::MixtureDesign& d) {
  if (d.K < 2) throw std::invalid_argument("bound is defined for K >= 2");
  const Eigen::MatrixXd P = detail::signal_matrix(d);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P);
  SignalBoundReport rep;
  rep.sigma_observed = svd.singularValues()[d.K - 1];
  rep.bound = detail::lemma_bound(d);

  Eigen::MatrixXd MD = d.centers;
  for (int k = 0; k < d.K; ++k)
    MD.col(k) *= std::sqrt(static_cast<double>(d.sizes[k]));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_md(MD);
  const double sigma_md = svd_md.singularValues()[d.K - 1];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_m(d.centers);
  const double sharper = svd_m.singularValues()[d.K - 1] *
                         std::sqrt(static_cast<double>(detail::min_size(d)));

  const double tol = 1e-9 * std::max(1.0, rep.sigma_observed);
  rep.satisfied = rep.sigma_observed >= rep.bound - 1e-9 * rep.bound &&
                  std::abs(rep.sigma_observed - sigma_md) <= tol &&
                  sigma_md >= sharper - 1e-9 * std::max(1.0, sharper);
  return rep;
}

// A = Z^T H: checks A A^T = D - (1/n) m m^T, A A^T 1 = 0, and
// sigma_{K-1}(A) >= sqrt(min_k n_k).
inline bool gram_structure_check(const synth::MixtureDesign& d) {
  const Eigen::Index n = d.n;
  const int K = d.K;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, K);
  for (Eigen::Index i = 0; i < n; ++i) Z(i, d.labels[i]) = 1.0;
  Eigen::VectorXd colsum = Z.colwise().sum();
  Eigen::MatrixXd AH =
      Z.transpose() -
      (1.0 / static_cast<double>(n)) * colsum * Eigen::RowVectorXd::Ones(n);

  Eigen::VectorXd m(K);
  for (int k = 0; k < K; ++k) m[k] = static_cast<double>(d.sizes[k]);
  Eigen::MatrixXd expected =
      Eigen::MatrixXd(m.asDiagonal()) -
      (1.0 / static_cast<double>(n)) * m * m.transpose();

  Eigen::MatrixXd AAt = AH * AH.transpose();
  if ((AAt - expected).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, m.maxCoeff()))
    return false;
  if ((AAt * Eigen::VectorXd::Ones(K)).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, m.maxCoeff()))
    return false;
  if (K < 2) return true;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(AH);
  const double sig = svd.singularValues()[K - 2];
  const double lower = std::sqrt(m.minCoeff());
  return sig >= lower - 1e-9 * lower;
}

struct NoiseBoundResult {
  double violation_rate = 0.0;
  double bound = 1.0;
};

// Monte Carlo check of P(||E|| >= sqrt(p)+sqrt(n)+t) <= exp(-t^2/2).
inline NoiseBoundResult noise_bound_test(Eigen::Index p, Eigen::Index n,
                                         double t, int reps, rng::Engine& eng) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
  const double level = std::sqrt(static_cast<double>(p)) +
                       std::sqrt(static_cast<double>(n)) + t;
  rng::NormalSampler gauss;
  int violations = 0;
  DataMatrix E(p, n);
  for (int r = 0; r < reps; ++r) {
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < p; ++i) E(i, j) = gauss(eng);
    if (spectral_norm(E) >= level) ++violations;
  }
  return {static_cast<double>(violations) / reps, std::exp(-t * t / 2.0)};
}

// Weyl inequalities on one sampled dataset:
// sigma_hat_{K-1} >= sigma_{K-1}(Pc) - ||Ec|| and sigma_hat_K <= ||Ec||.
inline bool weyl_gap_check(const synth::MixtureDesign& d,
                           const synth::NoiseModel& noise, rng::Engine& eng) {
  if (d.K < 2) throw std::invalid_argument("check requires K >= 2");
  const Eigen::MatrixXd P = detail::signal_matrix(d);
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(d.p, d.n);
  if (noise.kind != synth::NoiseModel::Kind::none) {
    std::uniform_real_distribution<double> uni;
    rng::NormalSampler gauss;
    for (Eigen::Index j = 0; j < d.n; ++j) {
      double sd = 1.0;
      if (noise.kind == synth::NoiseModel::Kind::heteroscedastic)
        sd = noise.eta_lo + (noise.eta_max - noise.eta_lo) * uni(eng);
      for (Eigen::Index i = 0; i < d.p; ++i) E(i, j) = sd * gauss(eng);
    }
  }
  const Eigen::MatrixXd Pc = detail::center_columns(P);
  const Eigen::MatrixXd Ec = detail::center_columns(E);
  const Eigen::MatrixXd Xc = detail::center_columns(P + E);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd_p(Pc), svd_x(Xc);
  const double noise_norm = spectral_norm(Ec);
  const double sig_km1 = svd_p.singularValues()[d.K - 2];
  const double hat_km1 = svd_x.singularValues()[d.K - 2];
  const Eigen::Index m = std::min(d.p, d.n);
  const double hat_k = (d.K - 1 < m) ? svd_x.singularValues()[d.K - 1] : 0.0;

  const double slack = 1e-9 * std::max(1.0, sig_km1);
  return hat_km1 >= sig_km1 - noise_norm - slack &&
         hat_k <= noise_norm + slack;
}

// Closed form sigma_1 of the centered pathology signal: Delta sqrt(n1 n2 / n).
inline double pathology_sigma1(double delta, Eigen::Index n1, Eigen::Index n2) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("need n1, n2 >= 1");
  return delta * std::sqrt(static_cast<double>(n1) * static_cast<double>(n2) /
                           static_cast<double>(n1 + n2));
}

}  // namespace csvt::theory

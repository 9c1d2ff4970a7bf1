#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace csvt {

// Dense p x n data matrix, columns are samples.
using DataMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Strategy { auto_select, direct, gram };
enum class GramSide { rows, cols };

struct SpectrumResult {
  Vector singular_values;  // length min(p,n), sorted non-increasing
  enum class Used { direct, gram_rows, gram_cols } strategy;
  double wall_time = 0.0;  // seconds
};

inline const char* to_string(SpectrumResult::Used u) {
  switch (u) {
    case SpectrumResult::Used::direct: return "direct";
    case SpectrumResult::Used::gram_rows: return "gram_rows";
    default: return "gram_cols";
  }
}

namespace detail {

inline void check_valid(const DataMatrix& X) {
  if (X.rows() < 1 || X.cols() < 1)
    throw std::invalid_argument("data matrix must have p >= 1, n >= 1");
  if (!X.allFinite())
    throw std::invalid_argument("data matrix contains non-finite entries");
}

inline double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace detail

inline Vector column_mean(const DataMatrix& X) {
  detail::check_valid(X);
  return X.rowwise().mean();
}

// Exact centered Gram of the chosen side, accumulated in streamed blocks.
// rows: X~ X~^T = X X^T - n xbar xbar^T, one pass over column blocks.
// cols: X~^T X~ = H (X^T X) H, one pass over row blocks, then H applied on
// both sides via rank-one corrections.
// Per-block products run in double; cross-block accumulation uses long double.
// Blocks are reduced in index order, so the result depends only on the input
// and block_size. Output is symmetrized: (G + G^T)/2.
inline Eigen::MatrixXd centered_gram(const DataMatrix& X, GramSide side,
                                     Eigen::Index block_size = 4096) {
  detail::check_valid(X);
  if (block_size < 1) throw std::invalid_argument("block_size must be >= 1");
  const Eigen::Index p = X.rows(), n = X.cols();
  const Eigen::Index m = (side == GramSide::rows) ? p : n;
  if (static_cast<double>(m) * static_cast<double>(m) > 2.5e8)
    throw std::length_error("requested Gram side is too large; use the other side");

  using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  LongMatrix acc = LongMatrix::Zero(m, m);
  Eigen::MatrixXd block_gram(m, m);
  Eigen::MatrixXd G(m, m);

  if (side == GramSide::rows) {
    Eigen::Matrix<long double, Eigen::Dynamic, 1> sum_acc =
        Eigen::Matrix<long double, Eigen::Dynamic, 1>::Zero(p);
    for (Eigen::Index j0 = 0; j0 < n; j0 += block_size) {
      const Eigen::Index w = std::min(block_size, n - j0);
      const auto B = X.middleCols(j0, w);
      block_gram.setZero();
      block_gram.selfadjointView<Eigen::Lower>().rankUpdate(B);
      acc.triangularView<Eigen::Lower>() += block_gram.cast<long double>();
      sum_acc += (B.rowwise().sum()).cast<long double>();
    }
    acc.triangularView<Eigen::StrictlyUpper>() =
        acc.transpose().triangularView<Eigen::StrictlyUpper>();
    Eigen::VectorXd s = sum_acc.cast<double>();
    G = acc.cast<double>();
    G.noalias() -= (1.0 / static_cast<double>(n)) * (s * s.transpose());
  } else {
    for (Eigen::Index i0 = 0; i0 < p; i0 += block_size) {
      const Eigen::Index h = std::min(block_size, p - i0);
      const auto B = X.middleRows(i0, h);
      block_gram.setZero();
      block_gram.selfadjointView<Eigen::Lower>().rankUpdate(B.transpose());
      acc.triangularView<Eigen::Lower>() += block_gram.cast<long double>();
    }
    acc.triangularView<Eigen::StrictlyUpper>() =
        acc.transpose().triangularView<Eigen::StrictlyUpper>();
    G = acc.cast<double>();
    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::VectorXd r = G * Eigen::VectorXd::Ones(n);
    const double s = r.sum();
    G.noalias() -= inv_n * (r * Eigen::RowVectorXd::Ones(n));
    G.noalias() -= inv_n * (Eigen::VectorXd::Ones(n) * r.transpose());
    G.array() += s * inv_n * inv_n;
  }
  G = 0.5 * (G + G.transpose()).eval();
  return G;
}

namespace detail {

inline Vector svals_from_gram(const Eigen::MatrixXd& G) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigensolver failed");
  Vector ev = es.eigenvalues();  // ascending
  Vector sv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    sv[i] = std::sqrt(std::max(0.0, ev[ev.size() - 1 - i]));
  return sv;
}

inline Vector svals_direct(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  return svd.singularValues();
}

// Shared driver for centered and uncentered spectra.
inline SpectrumResult spectrum(const DataMatrix& X, bool centered,
                               Strategy strategy, Eigen::Index direct_cutoff,
                               Eigen::Index block_size) {
  check_valid(X);
  const Eigen::Index p = X.rows(), n = X.cols();
  const double t0 = now_seconds();
  SpectrumResult out;
  const bool use_direct =
      strategy == Strategy::direct ||
      (strategy == Strategy::auto_select && std::max(p, n) <= direct_cutoff);
  if (use_direct) {
    Eigen::MatrixXd A = X;
    if (centered) A.colwise() -= column_mean(X);
    out.singular_values = svals_direct(A);
    out.strategy = SpectrumResult::Used::direct;
  } else {
    const GramSide side = (p <= n) ? GramSide::rows : GramSide::cols;
    Eigen::MatrixXd G;
    if (centered) {
      G = centered_gram(X, side, block_size);
    } else {
      G = (side == GramSide::rows)
              ? Eigen::MatrixXd(X * X.transpose())
              : Eigen::MatrixXd(X.transpose() * X);
      G = 0.5 * (G + G.transpose()).eval();
    }
    out.singular_values = svals_from_gram(G);
    out.strategy = (side == GramSide::rows) ? SpectrumResult::Used::gram_rows
                                            : SpectrumResult::Used::gram_cols;
  }
  out.wall_time = now_seconds() - t0;
  return out;
}

}  // namespace detail

// Singular values of X - xbar 1^T, sorted non-increasing.
inline SpectrumResult singular_values_centered(
    const DataMatrix& X, Strategy strategy = Strategy::auto_select,
    Eigen::Index direct_cutoff = 2048, Eigen::Index block_size = 4096) {
  return detail::spectrum(X, true, strategy, direct_cutoff, block_size);
}

// Singular values of X itself (no centering).
inline SpectrumResult singular_values_raw(
    const DataMatrix& X, Strategy strategy = Strategy::auto_select,
    Eigen::Index direct_cutoff = 2048, Eigen::Index block_size = 4096) {
  return detail::spectrum(X, false, strategy, direct_cutoff, block_size);
}

inline double spectral_norm(const DataMatrix& X) {
  return singular_values_raw(X).singular_values[0];
}

}  // namespace csvt

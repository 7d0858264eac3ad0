// Small dense exact linear algebra over Q plus the few floating-point
// estimators (spectral norm by power iteration, principal angles) the audits
// need.  Matrices here are tiny (ambient dimension <= 6), so everything is
// written for clarity, not blocking.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "stratchern/rational.hpp"

namespace stratchern {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;  // row major

inline RatVec rv_zero(size_t n) { return RatVec(n, Rat(0)); }

inline RatVec rv_sub(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline RatVec rv_add(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline RatVec rv_scale(const Rat& s, const RatVec& a) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

inline Rat rv_dot(const RatVec& a, const RatVec& b) {
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat rv_norm2(const RatVec& a) { return rv_dot(a, a); }

inline bool rv_is_zero(const RatVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

inline RatMat rm_zero(size_t r, size_t c) { return RatMat(r, rv_zero(c)); }

inline RatMat rm_identity(size_t n) {
  RatMat m = rm_zero(n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline RatMat rm_transpose(const RatMat& a) {
  if (a.empty()) return {};
  RatMat t = rm_zero(a[0].size(), a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline RatMat rm_mul(const RatMat& a, const RatMat& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  RatMat r = rm_zero(n, m);
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
    }
  return r;
}

inline RatVec rm_apply(const RatMat& a, const RatVec& x) {
  RatVec r(a.size(), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = rv_dot(a[i], x);
  return r;
}

inline RatMat rm_sub(const RatMat& a, const RatMat& b) {
  RatMat r = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) r[i][j] -= b[i][j];
  return r;
}

// Rank by fraction-free-ish Gaussian elimination (pivot = first nonzero).
inline size_t rm_rank(RatMat a) {
  size_t rows = a.size();
  if (rows == 0) return 0;
  size_t cols = a[0].size(), rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (size_t i = rank + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      Rat f = a[i][c] / a[rank][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

inline Rat rm_det(RatMat a) {
  size_t n = a.size();
  Rat det(1);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return Rat(0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rat f = a[i][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

// Solves A x = b exactly; returns nullopt when A is singular (square only).
inline std::optional<RatVec> rm_solve(RatMat a, RatVec b) {
  size_t n = a.size();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rat f = a[i][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
      b[i] -= f * b[c];
    }
  }
  RatVec x(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Least-squares-free exact solve of an overdetermined consistent system:
// finds x with A x = b when one exists (A is rows x cols, rows >= cols).
inline std::optional<RatVec> rm_solve_consistent(RatMat a, RatVec b) {
  size_t rows = a.size();
  if (rows == 0) return RatVec{};
  size_t cols = a[0].size();
  std::vector<size_t> pivot_col;
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    std::swap(b[piv], b[rank]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i][c] == 0) continue;
      Rat f = a[i][c] / a[rank][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
      b[i] -= f * b[rank];
    }
    pivot_col.push_back(c);
    ++rank;
  }
  for (size_t i = rank; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;  // inconsistent
  RatVec x(cols, Rat(0));
  for (size_t i = 0; i < rank; ++i) x[pivot_col[i]] = b[i] / a[i][pivot_col[i]];
  return x;
}

// Gram-Schmidt without normalization: returns an orthogonal rational basis of
// span(vectors).  Unit length would leave Q, and every consumer (independence
// tests, projectors, degrees) is scale-invariant.
inline std::vector<RatVec> orthogonalize(const std::vector<RatVec>& vectors) {
  std::vector<RatVec> basis;
  for (const auto& v : vectors) {
    RatVec w = v;
    for (const auto& b : basis) {
      Rat f = rv_dot(w, b) / rv_norm2(b);
      w = rv_sub(w, rv_scale(f, b));
    }
    if (!rv_is_zero(w)) basis.push_back(w);
  }
  return basis;
}

// Orthogonal projector onto span(columns of B), B given as a list of columns:
// P = B (B^T B)^{-1} B^T, exact.  Empty basis projects to 0.
inline RatMat projector_onto(const std::vector<RatVec>& cols, size_t ambient) {
  RatMat p = rm_zero(ambient, ambient);
  auto basis = orthogonalize(cols);
  for (const auto& b : basis) {
    Rat n2 = rv_norm2(b);
    for (size_t i = 0; i < ambient; ++i)
      for (size_t j = 0; j < ambient; ++j) p[i][j] += b[i] * b[j] / n2;
  }
  return p;
}

inline Eigen::MatrixXd rm_to_eigen(const RatMat& a) {
  Eigen::MatrixXd m(a.size(), a.empty() ? 0 : a[0].size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) m(i, j) = to_double(a[i][j]);
  return m;
}

struct SpectralEstimate {
  double value = 0.0;    // power-iteration estimate of ||A||_2
  double lower = 0.0;    // certified: Rayleigh quotient of the final iterate
  double upper = 0.0;    // certified: sqrt(||A||_1 ||A||_inf)
  int iterations = 0;
};

// Spectral norm of a (rectangular) matrix via power iteration on A^T A with a
// residual-based stop, plus cheap certified brackets.
inline SpectralEstimate spectral_norm(const RatMat& a, int max_iter = 200,
                                      double tol = 1e-12) {
  SpectralEstimate est;
  Eigen::MatrixXd m = rm_to_eigen(a);
  if (m.rows() == 0 || m.cols() == 0) return est;
  Eigen::MatrixXd g = m.transpose() * m;  // symmetric PSD
  double norm1 = 0, norminf = 0;
  for (int j = 0; j < m.cols(); ++j) norm1 = std::max(norm1, m.col(j).cwiseAbs().sum());
  for (int i = 0; i < m.rows(); ++i) norminf = std::max(norminf, m.row(i).cwiseAbs().sum());
  est.upper = std::sqrt(norm1 * norminf);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(g.cols());
  x.normalize();
  double lambda = 0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd y = g * x;
    double ny = y.norm();
    est.iterations = it + 1;
    if (ny == 0) break;
    y /= ny;
    double next = y.dot(g * y);
    double resid = (g * y - next * y).norm();
    x = y;
    lambda = next;
    if (resid <= tol * std::max(1.0, next)) break;
  }
  est.lower = std::sqrt(std::max(0.0, lambda));
  est.value = est.lower;
  est.upper = std::max(est.upper, est.value);
  return est;
}

// Sines of principal angles between the column spans of two rational bases,
// computed independently of spectral_norm (SVD route) for cross-checks.
inline std::vector<double> principal_angle_sines(const std::vector<RatVec>& u,
                                                 const std::vector<RatVec>& v,
                                                 size_t ambient) {
  RatMat pu = projector_onto(u, ambient);
  RatMat pv = projector_onto(v, ambient);
  // sin of angles of span(v) out of span(u): singular values of (I-Pu) Pv.
  RatMat perp = rm_sub(rm_identity(ambient), pu);
  Eigen::MatrixXd prod = rm_to_eigen(rm_mul(perp, pv));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(prod);
  std::vector<double> out;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    double s = svd.singularValues()(i);
    if (s > 1e-13) out.push_back(std::min(1.0, s));
  }
  return out;
}

}  // namespace stratchern

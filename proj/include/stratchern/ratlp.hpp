// Exact linear programming over Q: two-phase primal simplex with Bland's
// rule (no cycling, no tolerances).  Problems here are tiny — barycentric
// feasibility, open-cell disjointness, zero-crossing certificates — so a
// dense tableau is the right tool.
#pragma once

#include <cassert>
#include <vector>

#include "stratchern/linalg.hpp"
#include "stratchern/rational.hpp"

namespace stratchern {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rat objective = Rat(0);
  RatVec x;  // primal solution (original variables only)
};

namespace detail {

// Tableau with rows 0..m-1 = constraints, row m = objective (maximization,
// optimal when every reduced cost <= 0).  basis[i] = variable basic in row i.
struct Tableau {
  RatMat t;
  std::vector<int> basis;
  size_t m, n;  // constraints, variables (excluding rhs column)

  void pivot(size_t row, size_t col) {
    Rat p = t[row][col];
    for (auto& v : t[row]) v /= p;
    for (size_t i = 0; i <= m; ++i) {
      if (i == row || t[i][col] == 0) continue;
      Rat f = t[i][col];
      for (size_t j = 0; j <= n; ++j) t[i][j] -= f * t[row][j];
    }
    basis[row] = static_cast<int>(col);
  }

  // Bland's rule; returns false when optimal, throws-free.
  bool step(bool& unbounded) {
    size_t enter = n;
    for (size_t j = 0; j < n; ++j)
      if (t[m][j] > 0) {
        enter = j;
        break;
      }
    if (enter == n) return false;
    size_t leave = m;
    Rat best;
    for (size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rat ratio = t[i][n] / t[i][enter];
      if (leave == m || ratio < best ||
          (ratio == best && basis[i] < basis[leave]))
        leave = i, best = ratio;
    }
    if (leave == m) {
      unbounded = true;
      return false;
    }
    pivot(leave, enter);
    return true;
  }

  LpStatus run() {
    bool unbounded = false;
    while (step(unbounded)) {
    }
    return unbounded ? LpStatus::Unbounded : LpStatus::Optimal;
  }
};

}  // namespace detail

// max c.x subject to A x = b, x >= 0.
inline LpResult lp_solve(const RatMat& a, const RatVec& b, const RatVec& c) {
  size_t m = a.size();
  size_t n = m == 0 ? c.size() : a[0].size();
  assert(c.size() == n);
  detail::Tableau tb;
  tb.m = m;
  tb.n = n + m;  // artificials appended
  tb.t = rm_zero(m + 1, tb.n + 1);
  tb.basis.assign(m, 0);
  for (size_t i = 0; i < m; ++i) {
    int sign = b[i] < 0 ? -1 : 1;
    for (size_t j = 0; j < n; ++j) tb.t[i][j] = sign * a[i][j];
    tb.t[i][n + i] = 1;
    tb.t[i][tb.n] = sign * b[i];
    tb.basis[i] = static_cast<int>(n + i);
  }
  // Phase I: maximize -sum(artificials); price out the artificial basis.
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j <= tb.n; ++j)
      if (j < n || j == tb.n) tb.t[m][j] += tb.t[i][j];
  for (size_t j = n; j < tb.n; ++j) tb.t[m][j] = 0;
  tb.t[m][tb.n] = 0;
  tb.run();  // cannot be unbounded (objective bounded by 0)
  Rat art_sum(0);
  for (size_t i = 0; i < m; ++i)
    if (tb.basis[i] >= static_cast<int>(n)) art_sum += tb.t[i][tb.n];
  LpResult res;
  if (art_sum != 0) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  // Drive remaining zero-valued artificials out of the basis; rows where no
  // real pivot exists are redundant and get dropped below.
  for (size_t i = 0; i < m; ++i) {
    if (tb.basis[i] < static_cast<int>(n)) continue;
    for (size_t j = 0; j < n; ++j)
      if (tb.t[i][j] != 0) {
        tb.pivot(i, j);
        break;
      }
  }
  // Rebuild a pure phase-II tableau without the artificial columns so they
  // can never re-enter the basis.
  detail::Tableau t2;
  t2.n = n;
  t2.m = 0;
  t2.t.clear();
  t2.basis.clear();
  for (size_t i = 0; i < m; ++i) {
    if (tb.basis[i] >= static_cast<int>(n)) continue;  // redundant row
    RatVec row(n + 1);
    for (size_t j = 0; j < n; ++j) row[j] = tb.t[i][j];
    row[n] = tb.t[i][tb.n];
    t2.t.push_back(std::move(row));
    t2.basis.push_back(tb.basis[i]);
    ++t2.m;
  }
  RatVec obj(n + 1, Rat(0));
  for (size_t j = 0; j < n; ++j) obj[j] = c[j];
  t2.t.push_back(std::move(obj));
  for (size_t i = 0; i < t2.m; ++i) {
    int bv = t2.basis[i];
    if (c[bv] != 0) {
      Rat f = c[bv];
      for (size_t j = 0; j <= n; ++j) t2.t[t2.m][j] -= f * t2.t[i][j];
    }
  }
  res.status = t2.run();
  if (res.status == LpStatus::Optimal) {
    res.x = rv_zero(n);
    for (size_t i = 0; i < t2.m; ++i) res.x[t2.basis[i]] = t2.t[i][n];
    res.objective = rv_dot(c, res.x);
  }
  return res;
}

inline bool lp_feasible(const RatMat& a, const RatVec& b) {
  RatVec c(a.empty() ? 0 : a[0].size(), Rat(0));
  LpResult r = lp_solve(a, b, c);
  return r.status == LpStatus::Optimal;
}

// Is 0 in the convex hull of the given points?  (Exact zero-crossing test for
// an affine map on a simplex: the image of the closed simplex is the hull of
// the vertex values.)
inline bool zero_in_convex_hull(const std::vector<RatVec>& pts) {
  if (pts.empty()) return false;
  size_t q = pts[0].size(), k = pts.size();
  RatMat a = rm_zero(q + 1, k);
  RatVec b = rv_zero(q + 1);
  for (size_t j = 0; j < k; ++j) {
    for (size_t i = 0; i < q; ++i) a[i][j] = pts[j][i];
    a[q][j] = 1;
  }
  b[q] = 1;
  return lp_feasible(a, b);
}

// Do the open simplices conv°(A), conv°(B) intersect?  Solves
//   max t  s.t.  sum λ_i a_i = sum μ_j b_j,  sum λ = sum μ = 1,
//                λ_i >= t, μ_j >= t
// and reports whether the optimum is positive.  Substitutes λ = s + t,
// μ = r + t with s, r >= 0 and t = t+ - t-.
inline bool open_simplices_intersect(const std::vector<RatVec>& av,
                                     const std::vector<RatVec>& bv) {
  size_t q = av[0].size(), ka = av.size(), kb = bv.size();
  size_t n = ka + kb + 2;  // s..., r..., t+, t-
  RatMat a = rm_zero(q + 2, n);
  RatVec b = rv_zero(q + 2);
  RatVec c = rv_zero(n);
  for (size_t i = 0; i < q; ++i) {
    Rat tcol(0);
    for (size_t j = 0; j < ka; ++j) {
      a[i][j] = av[j][i];
      tcol += av[j][i];
    }
    for (size_t j = 0; j < kb; ++j) {
      a[i][ka + j] = -bv[j][i];
      tcol -= bv[j][i];
    }
    a[i][ka + kb] = tcol;
    a[i][ka + kb + 1] = -tcol;
  }
  for (size_t j = 0; j < ka; ++j) a[q][j] = 1;
  a[q][ka + kb] = Rat(static_cast<int>(ka));
  a[q][ka + kb + 1] = -Rat(static_cast<int>(ka));
  b[q] = 1;
  for (size_t j = 0; j < kb; ++j) a[q + 1][ka + j] = 1;
  a[q + 1][ka + kb] = Rat(static_cast<int>(kb));
  a[q + 1][ka + kb + 1] = -Rat(static_cast<int>(kb));
  b[q + 1] = 1;
  c[ka + kb] = 1;
  c[ka + kb + 1] = -1;
  LpResult r = lp_solve(a, b, c);
  if (r.status == LpStatus::Infeasible) return false;  // closed hulls disjoint
  assert(r.status == LpStatus::Optimal);               // t <= 1 always
  return r.objective > 0;
}

// Extremes of a linear functional over conv(A) ∩ conv(B); nullopt when the
// closed hulls do not intersect.  Used to certify single-point intersections.
inline std::optional<std::pair<Rat, Rat>> functional_range_on_intersection(
    const std::vector<RatVec>& av, const std::vector<RatVec>& bv,
    const RatVec& functional) {
  size_t q = av[0].size(), ka = av.size(), kb = bv.size();
  size_t n = ka + kb;
  RatMat a = rm_zero(q + 2, n);
  RatVec b = rv_zero(q + 2);
  for (size_t i = 0; i < q; ++i) {
    for (size_t j = 0; j < ka; ++j) a[i][j] = av[j][i];
    for (size_t j = 0; j < kb; ++j) a[i][ka + j] = -bv[j][i];
  }
  for (size_t j = 0; j < ka; ++j) a[q][j] = 1;
  b[q] = 1;
  for (size_t j = 0; j < kb; ++j) a[q + 1][ka + j] = 1;
  b[q + 1] = 1;
  RatVec c = rv_zero(n);
  for (size_t j = 0; j < ka; ++j) c[j] = rv_dot(functional, av[j]);
  LpResult hi = lp_solve(a, b, c);
  if (hi.status != LpStatus::Optimal) return std::nullopt;
  RatVec cneg = rv_zero(n);
  for (size_t j = 0; j < ka; ++j) cneg[j] = -c[j];
  LpResult lo = lp_solve(a, b, cneg);
  assert(lo.status == LpStatus::Optimal);
  return std::make_pair(-lo.objective, hi.objective);
}

}  // namespace stratchern

// Integer homology of simplicial complexes (and of abstract subcomplexes)
// via Smith normal form.  Arbitrary-precision integers throughout: entry
// growth under elimination is real, silent overflow is not acceptable.
#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "stratchern/mesh.hpp"

namespace stratchern {

struct SmithResult {
  std::vector<Int> diagonal;  // invariant factors d_1 | d_2 | ...
  size_t rank = 0;            // count of nonzero diagonal entries
};

// In-place Smith normal form reduction; returns invariant factors.  Pivoting
// on minimal nonzero magnitude keeps intermediate entries tame at the scale
// we run (hundreds of rows).
inline SmithResult smith_normal_form(IntMat a) {
  SmithResult res;
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  size_t t = 0;
  auto abs_int = [](const Int& x) { return x < 0 ? Int(-x) : x; };
  while (t < rows && t < cols) {
    // find minimal nonzero pivot in the remaining block
    size_t pi = rows, pj = cols;
    Int best(0);
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pi == rows || abs_int(a[i][j]) < best)) {
          pi = i;
          pj = j;
          best = abs_int(a[i][j]);
        }
    if (pi == rows) break;  // block is zero
    std::swap(a[t], a[pi]);
    for (size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][pj]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Int q = a[i][t] / a[t][t];
        for (size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {  // remainder smaller than pivot: swap up
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Int q = a[t][j] / a[t][t];
        for (size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][j]);
          clean = false;
        }
      }
    }
    ++t;
  }
  // enforce divisibility chain
  for (size_t i = 0; i + 1 < t; ++i)
    for (size_t j = i + 1; j < t; ++j)
      if (a[j][j] % a[i][i] != 0) {
        // standard trick: fold a[j][j] into column i and re-reduce the 2x2
        Int x = a[i][i], y = a[j][j];
        Int g = boost::multiprecision::gcd(x, y);
        a[i][i] = g;
        a[j][j] = x / g * y;
      }
  for (size_t i = 0; i < t; ++i) {
    Int d = a[i][i] < 0 ? Int(-a[i][i]) : a[i][i];
    if (d != 0) res.diagonal.push_back(d);
  }
  res.rank = res.diagonal.size();
  return res;
}

inline size_t int_rank(const IntMat& a) { return smith_normal_form(a).rank; }

// Smith normal form with unimodular transforms: d = u * a * v with u, v
// invertible over the integers.  Needed wherever coordinates matter (kernel
// bases, class coordinates in a quotient), not just invariant factors.
struct SmithTransforms {
  IntMat d, u, v;
  size_t rows = 0, cols = 0, rank = 0;
  std::vector<Int> diagonal;  // nonzero invariant factors d_1 | d_2 | ...
};

inline IntMat int_identity(size_t n) {
  IntMat e(n, std::vector<Int>(n, Int(0)));
  for (size_t i = 0; i < n; ++i) e[i][i] = 1;
  return e;
}

inline std::vector<Int> int_apply(const IntMat& a, const std::vector<Int>& x) {
  std::vector<Int> y(a.size(), Int(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline SmithTransforms smith_with_transforms(IntMat a, size_t rows,
                                             size_t cols) {
  SmithTransforms res;
  res.rows = rows;
  res.cols = cols;
  if (a.empty()) a.assign(rows, std::vector<Int>(cols, Int(0)));
  STRATCHERN_CHECK(a.size() == rows && (rows == 0 || a[0].size() == cols),
                   "smith input shape mismatch");
  res.u = int_identity(rows);
  res.v = int_identity(cols);
  auto abs_int = [](const Int& x) { return x < 0 ? Int(-x) : x; };
  auto row_sub = [&](size_t i, size_t t, const Int& q) {
    for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[t][j];
    for (size_t j = 0; j < rows; ++j) res.u[i][j] -= q * res.u[t][j];
  };
  auto col_sub = [&](size_t j, size_t t, const Int& q) {
    for (size_t i = 0; i < rows; ++i) a[i][j] -= q * a[i][t];
    for (size_t i = 0; i < cols; ++i) res.v[i][j] -= q * res.v[i][t];
  };
  auto row_swap = [&](size_t i, size_t t) {
    std::swap(a[i], a[t]);
    std::swap(res.u[i], res.u[t]);
  };
  auto col_swap = [&](size_t j, size_t t) {
    for (size_t i = 0; i < rows; ++i) std::swap(a[i][j], a[i][t]);
    for (size_t i = 0; i < cols; ++i) std::swap(res.v[i][j], res.v[i][t]);
  };
  auto row_negate = [&](size_t i) {
    for (size_t j = 0; j < cols; ++j) a[i][j] = -a[i][j];
    for (size_t j = 0; j < rows; ++j) res.u[i][j] = -res.u[i][j];
  };
  size_t t = 0;
  while (t < rows && t < cols) {
    size_t pi = rows, pj = cols;
    Int best(0);
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pi == rows || abs_int(a[i][j]) < best)) {
          pi = i;
          pj = j;
          best = abs_int(a[i][j]);
        }
    if (pi == rows) break;
    row_swap(t, pi);
    col_swap(t, pj);
    if (a[t][t] < 0) row_negate(t);
    bool settled = false;
    while (!settled) {
      settled = true;
      for (size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Int q = a[i][t] / a[t][t];
        row_sub(i, t, q);
        if (a[i][t] != 0) {  // remainder beats the pivot
          row_swap(t, i);
          if (a[t][t] < 0) row_negate(t);
          settled = false;
        }
      }
      for (size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Int q = a[t][j] / a[t][t];
        col_sub(j, t, q);
        if (a[t][j] != 0) {
          col_swap(t, j);
          if (a[t][t] < 0) row_negate(t);
          settled = false;
        }
      }
      if (settled) {
        // divisibility: pivot must divide the rest of the block
        for (size_t i = t + 1; i < rows && settled; ++i)
          for (size_t j = t + 1; j < cols && settled; ++j)
            if (a[i][j] % a[t][t] != 0) {
              row_sub(t, i, Int(-1));  // fold row i into row t, re-reduce
              settled = false;
            }
      }
    }
    ++t;
  }
  res.d = std::move(a);
  for (size_t i = 0; i < t; ++i) res.diagonal.push_back(res.d[i][i]);
  res.rank = t;
  return res;
}

// Integer quotient ker(out_map) / im(in_map) on Z^n, with coordinates of
// cycles relative to the Smith-basis of the quotient.  out_map carries cells
// of this degree down one degree (rows indexed by the lower degree); in_map
// brings the degree above in (columns indexed by the degree above).  Empty
// matrices stand for zero maps.
struct ClassCoords {
  std::vector<Int> coords;  // torsion coordinates first, then free
  std::vector<Int> orders;  // matching orders; 0 marks a free factor
};

class QuotientSpace {
 public:
  QuotientSpace(size_t n, const IntMat& out_map, size_t out_rows,
                const IntMat& in_map, size_t in_cols)
      : n_(n) {
    SmithTransforms osnf = smith_with_transforms(out_map, out_rows, n);
    // Integer kernel basis of out_map: trailing columns of v.
    kdim_ = n - osnf.rank;
    kernel_.assign(n, std::vector<Int>(kdim_, Int(0)));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < kdim_; ++j)
        kernel_[i][j] = osnf.v[i][osnf.rank + j];
    ksnf_ = smith_with_transforms(kernel_, n, kdim_);
    STRATCHERN_CHECK(ksnf_.rank == kdim_, "kernel basis lost rank");
    // Express the image columns in kernel coordinates and smith-reduce.
    IntMat img(kdim_, std::vector<Int>(in_cols, Int(0)));
    for (size_t c = 0; c < in_cols; ++c) {
      std::vector<Int> col(n, Int(0));
      for (size_t i = 0; i < n; ++i) col[i] = in_map[i][c];
      std::vector<Int> x = kernel_coords(col);
      for (size_t i = 0; i < kdim_; ++i) img[i][c] = x[i];
    }
    qsnf_ = smith_with_transforms(img, kdim_, in_cols);
    for (const Int& d : qsnf_.diagonal)
      if (d > 1) torsion_.push_back(d);
  }

  size_t betti() const { return kdim_ - qsnf_.rank; }
  const std::vector<Int>& torsion() const { return torsion_; }

  // Coordinates of a cycle's class: torsion factors (order > 1) first, then
  // the free factors.  The chain must lie in the kernel lattice.
  ClassCoords coords(const std::vector<Int>& chain) const {
    std::vector<Int> x = kernel_coords(chain);
    std::vector<Int> tcoord = int_apply(qsnf_.u, x);
    ClassCoords out;
    for (size_t i = 0; i < qsnf_.rank; ++i) {
      const Int& d = qsnf_.diagonal[i];
      if (d <= 1) continue;  // killed factor: no content
      Int m = tcoord[i] % d;
      if (m < 0) m += d;
      out.coords.push_back(m);
      out.orders.push_back(d);
    }
    for (size_t i = qsnf_.rank; i < kdim_; ++i) {
      out.coords.push_back(tcoord[i]);
      out.orders.push_back(0);
    }
    return out;
  }

 private:
  // Solve kernel_ * x = c exactly over the integers.
  std::vector<Int> kernel_coords(const std::vector<Int>& c) const {
    std::vector<Int> rhs = int_apply(ksnf_.u, c);
    std::vector<Int> y(kdim_, Int(0));
    for (size_t i = 0; i < ksnf_.rank; ++i) {
      STRATCHERN_CHECK(rhs[i] % ksnf_.d[i][i] == 0,
                       "chain is not an integer cycle combination");
      y[i] = rhs[i] / ksnf_.d[i][i];
    }
    for (size_t i = ksnf_.rank; i < n_; ++i)
      STRATCHERN_CHECK(rhs[i] == 0, "chain leaves the cycle lattice");
    return int_apply(ksnf_.v, y);
  }

  size_t n_ = 0, kdim_ = 0;
  IntMat kernel_;
  SmithTransforms ksnf_, qsnf_;
  std::vector<Int> torsion_;
};

struct HomologyProfile {
  std::vector<long long> betti;          // betti[q]
  std::vector<std::vector<Int>> torsion; // torsion[q] = factors > 1 of H_q
  long long euler = 0;

  bool torsion_free() const {
    for (const auto& tq : torsion)
      if (!tq.empty()) return false;
    return true;
  }
};

// Abstract chain-complex homology from a list of boundary matrices, where
// dims[q] = number of q-cells and bnd[q] : C_q -> C_{q-1} (bnd[0] is empty).
inline HomologyProfile homology_from_boundaries(
    const std::vector<size_t>& dims, const std::vector<IntMat>& bnd) {
  HomologyProfile h;
  int top = static_cast<int>(dims.size()) - 1;
  std::vector<size_t> rank(top + 2, 0);
  std::vector<std::vector<Int>> tor(top + 2);
  for (int q = 1; q <= top; ++q) {
    if (dims[q] == 0 || dims[q - 1] == 0) continue;
    auto snf = smith_normal_form(bnd[q]);
    rank[q] = snf.rank;
    for (const auto& d : snf.diagonal)
      if (d > 1) tor[q].push_back(d);
  }
  h.betti.resize(top + 1);
  h.torsion.resize(top + 1);
  for (int q = 0; q <= top; ++q) {
    h.betti[q] = static_cast<long long>(dims[q]) - rank[q] - rank[q + 1];
    h.torsion[q] = tor[q + 1];  // torsion of H_q comes from ∂_{q+1}
    h.euler += (q % 2 == 0 ? 1 : -1) * static_cast<long long>(dims[q]);
  }
  return h;
}

inline HomologyProfile homology(const EmbeddedComplex& k) {
  int top = k.top_dimension();
  std::vector<size_t> dims(top + 1);
  std::vector<IntMat> bnd(top + 1);
  for (int q = 0; q <= top; ++q) {
    dims[q] = k.simplices_of_dim(q).size();
    if (q > 0) bnd[q] = boundary_matrix(k, q).m;
  }
  return homology_from_boundaries(dims, bnd);
}

// Homology of an abstract simplicial complex given as vertex lists (used for
// dual-cell and link subcomplexes, where no geometric realization is needed).
inline HomologyProfile homology_of_abstract(
    const std::vector<std::vector<int>>& simplices) {
  // collect faces per dimension with ids
  std::map<std::vector<int>, int> id_of;
  std::vector<std::vector<int>> all;
  for (auto s : simplices) {
    std::sort(s.begin(), s.end());
    size_t k = s.size();
    for (size_t mask = 1; mask < (1u << k); ++mask) {
      std::vector<int> sub;
      for (size_t b = 0; b < k; ++b)
        if (mask & (1u << b)) sub.push_back(s[b]);
      if (id_of.emplace(sub, static_cast<int>(all.size())).second)
        all.push_back(sub);
    }
  }
  int top = 0;
  for (const auto& s : all) top = std::max(top, static_cast<int>(s.size()) - 1);
  std::vector<std::vector<int>> by_dim(top + 1);
  std::map<int, std::pair<int, int>> pos;  // id -> (dim, index)
  for (size_t i = 0; i < all.size(); ++i) {
    int d = static_cast<int>(all[i].size()) - 1;
    pos[static_cast<int>(i)] = {d, static_cast<int>(by_dim[d].size())};
    by_dim[d].push_back(static_cast<int>(i));
  }
  std::vector<size_t> dims(top + 1);
  for (int q = 0; q <= top; ++q) dims[q] = by_dim[q].size();
  std::vector<IntMat> bnd(top + 1);
  for (int q = 1; q <= top; ++q) {
    bnd[q].assign(dims[q - 1], std::vector<Int>(dims[q], Int(0)));
    for (size_t c = 0; c < by_dim[q].size(); ++c) {
      const auto& s = all[by_dim[q][c]];
      for (size_t k2 = 0; k2 < s.size(); ++k2) {
        std::vector<int> f;
        for (size_t i = 0; i < s.size(); ++i)
          if (i != k2) f.push_back(s[i]);
        int fid = id_of.at(f);
        bnd[q][pos.at(fid).second][c] += (k2 % 2 == 0) ? 1 : -1;
      }
    }
  }
  return homology_from_boundaries(dims, bnd);
}

}  // namespace stratchern

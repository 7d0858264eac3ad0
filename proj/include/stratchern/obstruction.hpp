// Integer indices and characteristic-class assembly.
//
// The pieces, bottom up: a cited homotopy-group table says when an index is
// an integer at all; pl_degree counts signed ray preimages of an affine-
// per-simplex sphere map, exactly; frame_index turns the last radial field
// around a dual cell into such a map (through a chart plane certified
// orientation-positive against every cell member); assemble_cocycle collects
// the indices into a cocycle on the dual decomposition, verify_cocycle
// applies the cellular coboundary, and dual_homology_cycle carries the
// cocycle over to a simplicial cycle with integral class coordinates on
// both sides.  Poincare-Hopf and subdivision-invariance reports close the
// loop against independently computable data.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stratchern/dualize.hpp"
#include "stratchern/fields.hpp"
#include "stratchern/homology.hpp"
#include "stratchern/rng.hpp"

namespace stratchern {

// ---------------------------------------------------------------------------
// Homotopy-group table for complex Stiefel manifolds.

enum class HomotopyGroup { Zero, Integers };

inline const char* to_string(HomotopyGroup g) {
  return g == HomotopyGroup::Zero ? "0" : "Z";
}

// pi_{k-1}(V_r(C^m)): trivial below k = 2m-2r+2, the integers exactly there.
// Above that line the cited table ends and we refuse to guess.
inline HomotopyGroup homotopy_table(int k, int r, int m) {
  if (r < 1 || m < r)
    throw StratError("bad-config", "homotopy table needs 1 <= r <= m");
  if (k < 1) throw StratError("bad-config", "sphere dimension must be >= 1");
  int edge = 2 * m - 2 * r + 2;
  if (k < edge) return HomotopyGroup::Zero;
  if (k == edge) return HomotopyGroup::Integers;
  throw StratError("outside-cited-table",
                   "pi_{k-1}(V_" + std::to_string(r) + "(C^" +
                       std::to_string(m) + ")) with k = " + std::to_string(k) +
                       " lies outside the cited table");
}

// ---------------------------------------------------------------------------
// PL degree of a simplexwise-affine map from an oriented (q-1)-sphere to
// R^q minus the origin.

struct SphereMap {
  int q = 0;                                // target dimension
  std::vector<std::vector<int>> simplices;  // (q-1)-simplices, q vertices each
  std::vector<int> signs;                   // orientation sign per simplex
  std::map<int, RatVec> values;             // vertex -> value in R^q
};

// Signed-preimage count along a generic rational ray.  The map is affine on
// each domain simplex, so a preimage of the ray {t u : t > 0} is one exact
// linear solve; genericity failures (a hit on a simplex face, t = 0, or a
// direction parallel to a degenerate image) are detected exactly and the
// direction is redrawn.
inline int pl_degree(const SphereMap& sm, uint64_t seed = 1,
                     uint64_t salt = 0) {
  int n = sm.q;
  STRATCHERN_CHECK(n >= 1, "degree target dimension must be positive");
  STRATCHERN_CHECK(sm.simplices.size() == sm.signs.size(),
                   "sphere map signs out of step with simplices");
  for (const auto& [v, val] : sm.values) {
    STRATCHERN_CHECK(static_cast<int>(val.size()) == n,
                     "sphere map value has the wrong dimension");
    if (rv_is_zero(val))
      throw StratError("singular-on-boundary",
                       "field vanishes at boundary vertex " +
                           std::to_string(v));
  }
  std::vector<std::vector<const RatVec*>> vals(sm.simplices.size());
  for (size_t i = 0; i < sm.simplices.size(); ++i) {
    const auto& simp = sm.simplices[i];
    STRATCHERN_CHECK(static_cast<int>(simp.size()) == n,
                     "sphere simplex has the wrong vertex count");
    std::vector<RatVec> hull;
    for (int v : simp) {
      auto it = sm.values.find(v);
      STRATCHERN_CHECK(it != sm.values.end(), "sphere vertex missing a value");
      vals[i].push_back(&it->second);
      hull.push_back(it->second);
    }
    if (zero_in_convex_hull(hull))
      throw StratError("singular-on-boundary",
                       "field crosses zero inside a boundary simplex");
  }

  if (n == 1) {
    // S^0: the degree is half the signed jump of the value signs.
    long long sum = 0;
    for (size_t i = 0; i < sm.simplices.size(); ++i)
      sum += sm.signs[i] * ((*vals[i][0])[0] > 0 ? 1 : -1);
    STRATCHERN_CHECK(sum % 2 == 0, "S^0 degree sum is odd");
    return static_cast<int>(sum / 2);
  }

  const int kMaxDirections = 32;
  for (int attempt = 0; attempt < kMaxDirections; ++attempt) {
    Substream rng(seed, "degree-direction", salt,
                  static_cast<uint64_t>(attempt));
    RatVec u = rng.direction(static_cast<size_t>(n));
    if (rv_is_zero(u)) continue;
    bool degenerate = false;
    long long deg = 0;
    for (size_t i = 0; i < sm.simplices.size() && !degenerate; ++i) {
      // Solve sum_j lambda_j v_j = t u with sum lambda = 1.
      RatMat M = rm_zero(static_cast<size_t>(n) + 1,
                         static_cast<size_t>(n) + 1);
      RatVec rhs = rv_zero(static_cast<size_t>(n) + 1);
      for (int row = 0; row < n; ++row) {
        for (int j = 0; j < n; ++j) M[row][j] = (*vals[i][j])[row];
        M[row][n] = -u[row];
      }
      for (int j = 0; j < n; ++j) M[n][j] = 1;
      rhs[n] = 1;
      auto sol = rm_solve(M, rhs);
      if (!sol) {
        // Singular: either the image simplex is flat in codimension >= 2
        // (the ray misses it for every generic direction) or the direction
        // is unluckily parallel to its hull.
        RatMat diffs = rm_zero(static_cast<size_t>(n),
                               static_cast<size_t>(n) - 1);
        for (int j = 1; j < n; ++j)
          for (int row = 0; row < n; ++row)
            diffs[row][j - 1] = (*vals[i][j])[row] - (*vals[i][0])[row];
        if (rm_rank(diffs) < static_cast<size_t>(n) - 1) continue;
        degenerate = true;
        break;
      }
      bool miss = (*sol)[n] < 0;
      for (int j = 0; j < n && !miss; ++j)
        if ((*sol)[j] < 0) miss = true;
      if (miss) continue;
      bool boundary_hit = (*sol)[n] == 0;
      for (int j = 0; j < n && !boundary_hit; ++j)
        if ((*sol)[j] == 0) boundary_hit = true;
      if (boundary_hit) {
        degenerate = true;
        break;
      }
      RatMat D = rm_zero(static_cast<size_t>(n), static_cast<size_t>(n));
      for (int row = 0; row < n; ++row) {
        D[row][0] = u[row];
        for (int j = 1; j < n; ++j)
          D[row][j] = (*vals[i][j])[row] - (*vals[i][0])[row];
      }
      Rat det = rm_det(D);
      STRATCHERN_CHECK(det != 0, "interior hit with a flat image simplex");
      deg += sm.signs[i] * (det > 0 ? 1 : -1);
    }
    if (!degenerate) return static_cast<int>(deg);
  }
  throw StratError("degenerate-direction",
                   "degenerate direction sampling: retries exhausted");
}

namespace detail {

// Complex projection of v off the complex span of the frame vectors
// (ambient coordinates paired (x1,y1,...,xm,ym)).
inline RatVec project_off_frame(const std::vector<RatVec>& frame, RatVec v) {
  int m = static_cast<int>(v.size()) / 2;
  for (const RatVec& u : frame) {
    Rat re(0), im(0), n2(0);
    for (int t = 0; t < m; ++t) {
      Rat vr = v[2 * t], vi = v[2 * t + 1];
      Rat ur = u[2 * t], ui = u[2 * t + 1];
      re += vr * ur + vi * ui;
      im += vi * ur - vr * ui;
      n2 += ur * ur + ui * ui;
    }
    re = re / n2;
    im = im / n2;
    for (int t = 0; t < m; ++t) {
      Rat ur = u[2 * t], ui = u[2 * t + 1];
      v[2 * t] -= re * ur - im * ui;
      v[2 * t + 1] -= re * ui + im * ur;
    }
  }
  return v;
}

// A linear chart R^ambient -> R^n: coordinates of the orthogonal projection
// onto span(basis) relative to that basis.
struct Chart {
  std::vector<RatVec> basis;  // n ambient vectors, independent
  RatMat gram;                // cached basis Gram matrix

  RatVec coords(const RatVec& w) const {
    size_t n = basis.size();
    RatVec rhs = rv_zero(n);
    for (size_t i = 0; i < n; ++i) rhs[i] = rv_dot(basis[i], w);
    auto sol = rm_solve(gram, rhs);
    STRATCHERN_CHECK(sol.has_value(), "chart basis lost independence");
    return *sol;
  }
};

inline Chart make_chart(std::vector<RatVec> basis) {
  Chart ch;
  ch.basis = std::move(basis);
  size_t n = ch.basis.size();
  ch.gram = rm_zero(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      ch.gram[i][j] = rv_dot(ch.basis[i], ch.basis[j]);
  return ch;
}

// Tangent basis of a full-dimensional stratum simplex, ordered so that the
// cell decomposition's coherent orientation makes it positive.
inline std::vector<RatVec> oriented_basis(const EmbeddedComplex& k,
                                          const DualDecomposition& dd, int t) {
  std::vector<RatVec> b = k.edge_vectors(t);
  STRATCHERN_CHECK(dd.orientation[t] != 0, "member simplex lacks orientation");
  if (dd.orientation[t] < 0) {
    if (b.size() >= 2)
      std::swap(b[0], b[1]);
    else
      b[0] = rv_scale(Rat(-1), b[0]);
  }
  return b;
}

// det of the member basis seen through the chart; positive for every member
// certifies that the chart projects the whole cell orientation-faithfully.
inline int chart_member_sign(const Chart& ch, const std::vector<RatVec>& b) {
  size_t n = b.size();
  RatMat m = rm_zero(n, n);
  for (size_t j = 0; j < n; ++j) {
    RatVec c = ch.coords(b[j]);
    for (size_t i = 0; i < n; ++i) m[i][j] = c[i];
  }
  Rat det = rm_det(m);
  if (det == 0) return 0;
  return det > 0 ? 1 : -1;
}

// Generalized cross product: the vector orthogonal to n ambient vectors in
// R^{n+1}, with det[b_1, ..., b_n, cross] > 0.
inline RatVec cross_general(const std::vector<RatVec>& b) {
  size_t amb = b[0].size();
  STRATCHERN_CHECK(b.size() + 1 == amb, "cross product needs codimension one");
  RatVec out = rv_zero(amb);
  for (size_t i = 0; i < amb; ++i) {
    RatMat minor = rm_zero(amb - 1, amb - 1);
    for (size_t r = 0; r < b.size(); ++r) {
      size_t cc = 0;
      for (size_t c = 0; c < amb; ++c) {
        if (c == i) continue;
        minor[r][cc++] = b[r][c];
      }
    }
    Rat det = rm_det(minor);
    // Laplace expansion of det[b_1; ...; b_n; x] along the last row.
    out[i] = ((amb - 1 + i) % 2 == 0) ? det : -det;
  }
  return out;
}

// Chart plane for the dual cell of source simplex s (r = 1, possibly curved
// embedding): a rational n-plane projecting every member's oriented tangent
// basis with positive determinant.  Candidates: the ambient itself when the
// region is full-dimensional, a shared member plane, the summed-normal plane
// in codimension one, then seeded draws.
inline Chart chart_for_cell(const EmbeddedComplex& k,
                            const DualDecomposition& dd, int s,
                            uint64_t seed) {
  int n = dd.region_dim;
  // distinct member top simplices with oriented bases
  std::vector<int> tops;
  for (const auto& flag : dd.cells[s].members) {
    int t = flag.back();
    if (std::find(tops.begin(), tops.end(), t) == tops.end()) tops.push_back(t);
  }
  std::vector<std::vector<RatVec>> bases;
  for (int t : tops) bases.push_back(oriented_basis(k, dd, t));
  auto certified = [&](const Chart& ch) {
    for (const auto& b : bases)
      if (chart_member_sign(ch, b) <= 0) return false;
    return true;
  };
  if (k.ambient_dim == n) {
    std::vector<RatVec> id;
    for (int i = 0; i < n; ++i) {
      RatVec e = rv_zero(static_cast<size_t>(n));
      e[static_cast<size_t>(i)] = 1;
      id.push_back(e);
    }
    Chart ch = make_chart(std::move(id));
    STRATCHERN_CHECK(certified(ch), "full-dimensional chart lost orientation");
    return ch;
  }
  {  // shared plane (flat embeddings)
    Chart ch = make_chart(bases.front());
    if (certified(ch)) return ch;
  }
  if (k.ambient_dim == n + 1) {  // summed-normal plane
    RatVec nsum = rv_zero(static_cast<size_t>(k.ambient_dim));
    for (const auto& b : bases) nsum = rv_add(nsum, cross_general(b));
    if (!rv_is_zero(nsum)) {
      std::vector<RatVec> w;
      Rat n2 = rv_norm2(nsum);
      for (int i = 0; i < k.ambient_dim && static_cast<int>(w.size()) < n;
           ++i) {
        RatVec e = rv_zero(static_cast<size_t>(k.ambient_dim));
        e[static_cast<size_t>(i)] = 1;
        RatVec p = rv_sub(e, rv_scale(rv_dot(e, nsum) / n2, nsum));
        if (rv_is_zero(p)) continue;
        std::vector<RatVec> trial = w;
        trial.push_back(p);
        RatMat m = rm_zero(static_cast<size_t>(k.ambient_dim), trial.size());
        for (size_t j = 0; j < trial.size(); ++j)
          for (int row = 0; row < k.ambient_dim; ++row)
            m[row][j] = trial[j][row];
        if (rm_rank(m) == trial.size()) w.push_back(p);
      }
      if (static_cast<int>(w.size()) == n) {
        Chart ch = make_chart(w);
        if (certified(ch)) return ch;
        std::swap(w[0], w[1]);
        Chart flipped = make_chart(w);
        if (certified(flipped)) return flipped;
      }
    }
  }
  const int kMaxChartSeeds = 512;
  for (int attempt = 0; attempt < kMaxChartSeeds; ++attempt) {
    Substream rng(seed, "cell-chart", static_cast<uint64_t>(s),
                  static_cast<uint64_t>(attempt));
    std::vector<RatVec> w;
    for (int j = 0; j < n; ++j) {
      RatVec v(static_cast<size_t>(k.ambient_dim));
      for (auto& c : v) c = rng.rat(16);
      w.push_back(v);
    }
    RatMat m = rm_zero(static_cast<size_t>(k.ambient_dim),
                       static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
      for (int row = 0; row < k.ambient_dim; ++row) m[row][j] = w[j][row];
    if (rm_rank(m) != static_cast<size_t>(n)) continue;
    Chart ch = make_chart(w);
    int first = chart_member_sign(ch, bases.front());
    if (first == 0) continue;
    if (first < 0 && n >= 2) {
      std::swap(w[0], w[1]);
      ch = make_chart(w);
    } else if (first < 0) {
      continue;
    }
    if (certified(ch)) return ch;
  }
  throw StratError("degenerate-direction",
                   "no chart plane projects all members of the cell dual to "
                   "simplex " +
                       std::to_string(s) + " positively");
}

// Chart onto the complex-orthogonal complement of the leading frame: its
// real dimension equals the obstruction dimension, and projected values lie
// inside it exactly, so coordinates are an isomorphism there.
inline Chart complement_chart(const std::vector<RatVec>& frame, int ambient,
                              int q) {
  std::vector<RatVec> w;
  RatMat probe = rm_zero(static_cast<size_t>(ambient), 0);
  for (int i = 0; i < ambient && static_cast<int>(w.size()) < q; ++i) {
    RatVec e = rv_zero(static_cast<size_t>(ambient));
    e[static_cast<size_t>(i)] = 1;
    RatVec p = project_off_frame(frame, e);
    if (rv_is_zero(p)) continue;
    std::vector<RatVec> trial = w;
    trial.push_back(p);
    RatMat m = rm_zero(static_cast<size_t>(ambient), trial.size());
    for (size_t j = 0; j < trial.size(); ++j)
      for (int row = 0; row < ambient; ++row) m[row][j] = trial[j][row];
    if (rm_rank(m) == trial.size()) w.push_back(p);
  }
  (void)probe;
  STRATCHERN_CHECK(static_cast<int>(w.size()) == q,
                   "frame complement has the wrong dimension");
  return make_chart(w);
}

// Last-field value at the barycenter of source simplex g (zero when the
// field omits the vertex, which marks an intended zero).
inline RatVec last_value_at(const RField& rf, int g) {
  const PAField& f = rf.fields.back();
  int v = rf.map.barycenter_vertex[g];
  if (!f.has(v)) return rv_zero(static_cast<size_t>(f.ambient_dim));
  return f.at(v);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Index of the radial frame around one dual cell.

struct IndexRecord {
  int cell = -1;        // source simplex whose dual cell carries the zero
  RatVec barycenter;    // position of the zero
  int stratum = -1;
  int index = 0;
  std::string method;   // winding | signed-preimage | stratum-restricted
  std::optional<int> restricted;  // stratum-restricted index when computed
};

inline IndexRecord frame_index(const EmbeddedComplex& k,
                               const DualDecomposition& dd, const RField& rf,
                               int s, uint64_t seed = 1) {
  IndexRecord rec;
  rec.cell = s;
  rec.barycenter = k.barycenter(s);
  rec.stratum = k.simplices[s].stratum;
  if (!rf.leading_frame.independent)
    throw StratError("independence-failure",
                     "leading frame dependent at carrier vertex " +
                         std::to_string(rf.leading_frame.witness_vertex));

  const SingularPoint* sp = nullptr;
  for (const SingularPoint& cand : rf.singular)
    if (cand.source_simplex == s) sp = &cand;

  if (sp && sp->base_case) {
    // Base stratum: the field is straight-line homotopic to the outward
    // cone field on the cell, whose index is +1 by convention.
    if (rf.r == 1 && !sp->outward_certified)
      throw StratError("outward-unverifiable",
                       "base-case cell dual to simplex " + std::to_string(s) +
                           " lacks the cone-homotopy certificate");
    rec.index = 1;
    rec.method = "stratum-restricted";
    rec.restricted = 1;
    return rec;
  }

  // Frame and chart.
  std::vector<RatVec> frame;
  for (int c = 0; c + 1 < rf.r; ++c)
    frame.push_back(rf.fields[c].values.begin()->second);
  detail::Chart chart =
      rf.r >= 2
          ? detail::complement_chart(frame, k.ambient_dim, rf.obstruction_dim)
          : detail::chart_for_cell(k, dd, s, seed);

  SphereMap sm;
  sm.q = rf.obstruction_dim;
  const DualCell& cell = dd.cells[s];
  for (size_t g = 0; g < cell.members.size(); ++g) {
    const auto& flag = cell.members[g];
    STRATCHERN_CHECK(flag.front() == s, "cell member does not start at source");
    std::vector<int> link(flag.begin() + 1, flag.end());
    sm.simplices.push_back(link);
    sm.signs.push_back(cell.member_sign[g]);
    for (int u : link)
      if (!sm.values.count(u)) {
        RatVec val = detail::last_value_at(rf, u);
        if (rf.r >= 2) val = detail::project_off_frame(frame, val);
        sm.values.emplace(u, chart.coords(val));
      }
  }
  rec.index = pl_degree(sm, seed, static_cast<uint64_t>(s));
  rec.method = sm.q == 2 ? "winding" : "signed-preimage";

  // Stratum-restricted index where the stratum geometry supports one.
  const StratumInfo* st = stratum_info(k, rec.stratum);
  STRATCHERN_CHECK(st != nullptr, "cell stratum missing from table");
  if (st->real_dim == dd.region_dim) {
    rec.restricted = rec.index;  // the cell lies inside its stratum
  } else if (rf.r == 1 && st->real_dim == 1 && k.simplices[s].dim() == 0) {
    // Curve stratum: S^0 degree of the field along the two curve edges.
    std::vector<int> curve;
    for (int e : k.cofaces(s, 1))
      if (k.simplices[e].stratum == rec.stratum) curve.push_back(e);
    if (curve.size() == 2) {
      RatVec b0 = k.barycenter(curve[0]), b1 = k.barycenter(curve[1]);
      if (b1 < b0) std::swap(curve[0], curve[1]), std::swap(b0, b1);
      RatVec d = rv_sub(b1, b0);
      Rat lo = rv_dot(detail::last_value_at(rf, curve[0]), d);
      Rat hi = rv_dot(detail::last_value_at(rf, curve[1]), d);
      if (lo != 0 && hi != 0)
        rec.restricted = ((hi > 0 ? 1 : -1) - (lo > 0 ? 1 : -1)) / 2;
    }
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Cocycle assembly, verification, duality.

struct ObstructionCocycle {
  int r = 1;
  int degree = 0;           // cell dimension 2p carrying the cocycle
  int zero_source_dim = 0;  // dimension of the dual sources
  std::map<int, int> gamma;  // interior source simplex -> index (0 elsewhere)
  std::vector<IndexRecord> records;
  long long total = 0;
};

inline ObstructionCocycle assemble_cocycle(const EmbeddedComplex& k,
                                           const DualDecomposition& dd,
                                           const RField& rf,
                                           uint64_t seed = 1) {
  STRATCHERN_CHECK(rf.theorem.pass(),
                   "radial frame failed its structure report");
  ObstructionCocycle coc;
  coc.r = rf.r;
  coc.degree = rf.obstruction_dim;
  coc.zero_source_dim = dd.region_dim - rf.obstruction_dim;
  std::vector<int> cells;
  for (int s : k.simplices_of_dim(coc.zero_source_dim))
    if (!dd.boundary_simplex[s]) cells.push_back(s);
  coc.records.resize(cells.size());
  parallel_for(cells.size(), [&](size_t i) {
    coc.records[i] = frame_index(k, dd, rf, cells[i], seed);
  });
  for (const IndexRecord& rec : coc.records) {
    coc.gamma[rec.cell] = rec.index;
    coc.total += rec.index;
  }
  return coc;
}

struct CocycleCheck {
  bool closed = true;
  int witness_cell = -1;  // a (2p+1)-cell where the coboundary is nonzero
};

// Cellular coboundary on the dual decomposition relative to its boundary:
// for every (2p+1)-cell (dual to a (zsd-1)-source) the incidence-weighted
// sum of the cocycle over its boundary 2p-cells must vanish.  Dual cells of
// boundary sources are honest cells of the pair (only the induced cells
// inside the region boundary are quotiented away); they carry zero because
// the frame has no zeros there.
inline CocycleCheck verify_cocycle(const EmbeddedComplex& k,
                                   const DualDecomposition& dd,
                                   const ObstructionCocycle& coc) {
  CocycleCheck chk;
  int lower = coc.zero_source_dim - 1;
  if (lower < 0) return chk;
  for (int t : k.simplices_of_dim(lower)) {
    Int sum(0);
    for (int s : k.cofaces(t, 1)) {
      auto it = coc.gamma.find(s);
      int g = it == coc.gamma.end() ? 0 : it->second;
      if (g != 0) sum += Int(dd.incidence(t, s)) * g;
    }
    if (sum != 0) {
      chk.closed = false;
      chk.witness_cell = t;
      return chk;
    }
  }
  return chk;
}

struct ClassReport {
  // Dual homology side: the cycle sum gamma(d(sigma)) * sigma on the source
  // complex, with class coordinates in H_{zsd}(X).
  std::map<int, int> cycle;  // zsd-simplex -> nonzero coefficient
  bool cycle_closed = false;
  std::vector<Int> class_coords;
  std::vector<Int> class_orders;  // 0 marks a free factor
  long long homology_betti = 0;
  std::vector<Int> homology_torsion;
  // Cohomology side: the cocycle's class in H^{2p} of the dual decomposition
  // relative to its boundary, in Smith-basis coordinates.
  std::vector<Int> cocycle_class_coords;
  std::vector<Int> cocycle_class_orders;
  long long cohomology_betti = 0;
  std::vector<Int> cohomology_torsion;
  long long total = 0;
};

inline ClassReport dual_homology_cycle(const EmbeddedComplex& k,
                                       const DualDecomposition& dd,
                                       const ObstructionCocycle& coc) {
  ClassReport rep;
  int z = coc.zero_source_dim;
  int top = k.top_dimension();
  rep.total = coc.total;

  // ---- homology of the source complex in degree z ------------------------
  std::vector<int> zcells = k.simplices_of_dim(z);
  std::map<int, size_t> zpos;
  for (size_t i = 0; i < zcells.size(); ++i) zpos[zcells[i]] = i;
  std::vector<Int> chain(zcells.size(), Int(0));
  for (const auto& [s, g] : coc.gamma) {
    chain[zpos.at(s)] = g;
    if (g != 0) rep.cycle[s] = g;
  }
  IntMat dz;
  size_t dz_rows = 0;
  if (z >= 1) {
    BoundaryMatrix bm = boundary_matrix(k, z);
    dz_rows = bm.rows.size();
    dz = std::move(bm.m);
    std::vector<Int> bd = int_apply(dz, chain);
    for (const Int& c : bd)
      if (c != 0)
        throw StratError("index-placement",
                         "duality chain has nonzero boundary");
  }
  rep.cycle_closed = true;
  IntMat dz1;
  size_t dz1_cols = 0;
  if (z + 1 <= top) {
    BoundaryMatrix bm = boundary_matrix(k, z + 1);
    dz1_cols = bm.cols.size();
    dz1 = std::move(bm.m);
  } else {
    dz1.assign(zcells.size(), std::vector<Int>());
  }
  QuotientSpace hz(zcells.size(), dz, dz_rows, dz1, dz1_cols);
  ClassCoords hc = hz.coords(chain);
  rep.class_coords = hc.coords;
  rep.class_orders = hc.orders;
  rep.homology_betti = static_cast<long long>(hz.betti());
  rep.homology_torsion = hz.torsion();

  // ---- cohomology of (D, boundary D) in degree 2p ------------------------
  // Every dual cell is a cell of the pair, including duals of boundary
  // sources; the quotiented subcomplex consists of the induced cells inside
  // the region boundary, which are not dual cells at all.
  auto cells_of = [&](int d) {
    std::vector<int> out;
    if (d < 0 || d > top) return out;
    return k.simplices_of_dim(d);
  };
  std::vector<int> iz = cells_of(z), izm = cells_of(z - 1),
                   izp = cells_of(z + 1);
  std::map<int, size_t> ipos;
  for (size_t i = 0; i < iz.size(); ++i) ipos[iz[i]] = i;
  IntMat up(izm.size(), std::vector<Int>(iz.size(), Int(0)));
  for (size_t ridx = 0; ridx < izm.size(); ++ridx)
    for (int s : k.cofaces(izm[ridx], 1)) {
      auto it = ipos.find(s);
      if (it != ipos.end())
        up[ridx][it->second] = dd.incidence(izm[ridx], s);
    }
  IntMat dn(iz.size(), std::vector<Int>(izp.size(), Int(0)));
  for (size_t cidx = 0; cidx < izp.size(); ++cidx)
    for (size_t ridx = 0; ridx < iz.size(); ++ridx)
      if (k.is_face_of(iz[ridx], izp[cidx]))
        dn[ridx][cidx] = dd.incidence(iz[ridx], izp[cidx]);
  QuotientSpace hco(iz.size(), up, izm.size(), dn, izp.size());
  std::vector<Int> gvec(iz.size(), Int(0));
  for (size_t i = 0; i < iz.size(); ++i) {
    auto it = coc.gamma.find(iz[i]);
    if (it != coc.gamma.end()) gvec[i] = it->second;
  }
  ClassCoords cc = hco.coords(gvec);
  rep.cocycle_class_coords = cc.coords;
  rep.cocycle_class_orders = cc.orders;
  rep.cohomology_betti = static_cast<long long>(hco.betti());
  rep.cohomology_torsion = hco.torsion();
  return rep;
}

struct PoincareHopfReport {
  long long total = 0;
  long long chi = 0;
  bool match = false;
};

inline PoincareHopfReport poincare_hopf_check(const ObstructionCocycle& coc,
                                              const EmbeddedComplex& k) {
  STRATCHERN_CHECK(coc.r == 1, "Poincare-Hopf check applies to r = 1");
  PoincareHopfReport rep;
  rep.total = coc.total;
  rep.chi = euler_characteristic(k);
  rep.match = rep.total == rep.chi;
  return rep;
}

// ---------------------------------------------------------------------------
// Subdivision / seed / config invariance of the class.

struct InvarianceRun {
  std::string label;
  bool ok = false;
  std::string error;
  long long total = 0;
  std::vector<Int> coords, orders;
};

struct InvarianceReport {
  bool pass = false;
  std::vector<InvarianceRun> runs;
  std::vector<std::string> notes;
};

inline InvarianceRun detail_invariance_run(const EmbeddedComplex& k0,
                                           const StratConfig& cfg, int r,
                                           int refine,
                                           const std::string& label) {
  InvarianceRun run;
  run.label = label;
  try {
    EmbeddedComplex k = k0;
    for (int i = 0; i < refine; ++i) k = barycentric_subdivide(k);
    DualDecomposition dd = build_dual(k);
    if (!dd.ok) {
      run.error = dd.error;
      return run;
    }
    RField rf = radial_frame(k, dd, cfg, r);
    ObstructionCocycle coc = assemble_cocycle(k, dd, rf, cfg.seed);
    CocycleCheck chk = verify_cocycle(k, dd, coc);
    if (!chk.closed) {
      run.error = "coboundary nonzero at the cell dual to simplex " +
                  std::to_string(chk.witness_cell);
      return run;
    }
    ClassReport rep = dual_homology_cycle(k, dd, coc);
    run.total = rep.total;
    run.coords = rep.class_coords;
    run.orders = rep.class_orders;
    run.ok = true;
  } catch (const StratError& e) {
    run.error = std::string(e.code()) + ": " + e.what();
  }
  return run;
}

// Replays the class pipeline at one extra refinement level, with a changed
// field seed, and with a changed chain exponent; passes when the totals all
// agree, same-triangulation runs agree in exact class coordinates, and the
// refined run agrees in every basis-independent quantity (total, factor
// orders, free coordinates up to order and sign).
inline InvarianceReport subdivision_invariance_check(const EmbeddedComplex& k,
                                                     const StratConfig& cfg,
                                                     int r) {
  InvarianceReport rep;
  rep.runs.push_back(detail_invariance_run(k, cfg, r, 0, "base"));
  rep.runs.push_back(detail_invariance_run(k, cfg, r, 1, "refined"));
  StratConfig reseeded = cfg;
  reseeded.seed += 1;
  rep.runs.push_back(detail_invariance_run(k, reseeded, r, 0, "reseeded"));
  StratConfig rechained = cfg;
  rechained.k_chain = cfg.k_chain == 2 ? 4 : 2;
  rep.runs.push_back(detail_invariance_run(k, rechained, r, 0,
                                           "chain-exponent"));
  const InvarianceRun& base = rep.runs[0];
  rep.pass = true;
  for (const InvarianceRun& run : rep.runs) {
    if (!run.ok) {
      rep.pass = false;
      rep.notes.push_back(run.label + " failed: " + run.error);
    }
  }
  if (!rep.pass) return rep;
  for (const InvarianceRun& run : rep.runs)
    if (run.total != base.total) {
      rep.pass = false;
      rep.notes.push_back(run.label + " total " + std::to_string(run.total) +
                          " != base " + std::to_string(base.total));
    }
  for (size_t i = 2; i < rep.runs.size(); ++i)
    if (rep.runs[i].coords != base.coords ||
        rep.runs[i].orders != base.orders) {
      rep.pass = false;
      rep.notes.push_back(rep.runs[i].label +
                          " class coordinates differ from base");
    }
  // The refined run lives on another triangulation, whose Smith basis is
  // unrelated: compare the invariant content only.
  const InvarianceRun& fine = rep.runs[1];
  auto abs_sorted = [](const InvarianceRun& run) {
    std::vector<Int> out;
    for (size_t i = 0; i < run.coords.size(); ++i)
      if (run.orders[i] == 0)
        out.push_back(run.coords[i] < 0 ? Int(-run.coords[i])
                                        : run.coords[i]);
    std::sort(out.begin(), out.end());
    return out;
  };
  auto orders_sorted = [](const InvarianceRun& run) {
    std::vector<Int> out = run.orders;
    std::sort(out.begin(), out.end());
    return out;
  };
  if (orders_sorted(fine) != orders_sorted(base) ||
      abs_sorted(fine) != abs_sorted(base)) {
    rep.pass = false;
    rep.notes.push_back("refined class content differs from base");
  }
  return rep;
}

}  // namespace stratchern

// Dual cell decomposition of a pure, orientable simplicial region.
//
// The cell dual to a k-simplex s is the union of the barycentric flag
// simplices (s < f_1 < ... < f_q) with dim f_i = k + i; it has dimension
// q = n - k where n is the region dimension.  Cells are stored through their
// maximal flags ("members"), each carrying an orientation sign derived from
// a coherent orientation of the region, so boundary chains and incidence
// numbers follow mechanically from the simplicial boundary of the signed
// member chain.
#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "stratchern/homology.hpp"
#include "stratchern/mesh.hpp"

namespace stratchern {

struct DualCell {
  int source = -1;  // simplex this cell is dual to
  int dim = 0;      // n - dim(source)
  std::vector<std::vector<int>> members;  // maximal flags, ascending dims
  std::vector<int> member_sign;           // orientation sign per member
};

// A flag-simplex chain: coefficients on flags (chains of simplex ids).
using FlagChain = std::map<std::vector<int>, Int>;

class DualDecomposition {
 public:
  bool ok = false;
  std::string error;
  int region_dim = 0;
  std::vector<int> orientation;         // top simplex id -> +-1, else 0
  std::vector<char> boundary_simplex;   // id -> lies in the region boundary
  std::vector<DualCell> cells;          // cells[i] is dual to simplex i

  // Simplicial boundary of the signed member chain of a cell, as a chain on
  // flags.  Support consists of frontier flags (starting strictly above the
  // source) plus, for sources in the region boundary, membrane flags ending
  // at a boundary facet.
  FlagChain boundary_chain(int cell_id) const {
    const DualCell& c = cells[cell_id];
    FlagChain out;
    for (size_t g = 0; g < c.members.size(); ++g) {
      const auto& flag = c.members[g];
      for (size_t i = 0; i < flag.size(); ++i) {
        std::vector<int> face;
        for (size_t j = 0; j < flag.size(); ++j)
          if (j != i) face.push_back(flag[j]);
        if (face.empty()) continue;
        Int coef = Int(c.member_sign[g]) * ((i % 2 == 0) ? 1 : -1);
        auto it = out.find(face);
        if (it == out.end())
          out.emplace(std::move(face), coef);
        else {
          it->second += coef;
          if (it->second == 0) out.erase(it);
        }
      }
    }
    return out;
  }

  // Incidence number [d(s) : d(t)] for t a one-higher-dimensional coface of
  // s; every maximal member of d(t) must appear in the boundary chain of
  // d(s) with one and the same relative sign.
  int incidence(int s, int t) const {
    auto key = std::make_pair(s, t);
    auto it = incidence_cache_.find(key);
    if (it != incidence_cache_.end()) return it->second;
    FlagChain bd = boundary_chain(s);
    const DualCell& ct = cells[t];
    int val = 0;
    for (size_t h = 0; h < ct.members.size(); ++h) {
      auto jt = bd.find(ct.members[h]);
      STRATCHERN_CHECK(jt != bd.end(),
                       "coface member missing from boundary chain");
      Int rel = jt->second * ct.member_sign[h];
      STRATCHERN_CHECK(rel == 1 || rel == -1, "incidence coefficient not +-1");
      int r = rel > 0 ? 1 : -1;
      if (h == 0)
        val = r;
      else
        STRATCHERN_CHECK(r == val, "inconsistent incidence over members");
    }
    incidence_cache_[key] = val;
    return val;
  }

 private:
  mutable std::map<std::pair<int, int>, int> incidence_cache_;
};

namespace detail {

// Coordinates of v in the span of basis (as rows); empty if inconsistent.
inline std::optional<RatVec> coords_in_span(const std::vector<RatVec>& basis,
                                            const RatVec& v) {
  size_t nn = basis.size(), amb = v.size();
  RatMat a = rm_zero(amb, nn);
  for (size_t j = 0; j < nn; ++j)
    for (size_t i = 0; i < amb; ++i) a[i][j] = basis[j][i];
  return rm_solve_consistent(a, v);
}

}  // namespace detail

// Builds the dual decomposition.  Requirements checked here: the complex is
// pure of its top dimension, a pseudomanifold (facets have at most two top
// cofaces), and orientable; a coherent orientation is fixed by ascending-
// vertex determinant sign for full-dimensional regions and by propagation
// across interior facets otherwise.
inline DualDecomposition build_dual(const EmbeddedComplex& k) {
  DualDecomposition dd;
  dd.region_dim = k.top_dimension();
  int n = dd.region_dim;
  size_t ns = k.simplices.size();

  // purity
  for (size_t i = 0; i < ns; ++i)
    if (k.simplices[i].dim() < n && k.cofaces(static_cast<int>(i), 1).empty()) {
      dd.error = "not pure: simplex " + std::to_string(i) +
                 " has no higher-dimensional coface";
      return dd;
    }

  // pseudomanifold + region boundary
  dd.boundary_simplex.assign(ns, 0);
  std::vector<int> tops = k.simplices_of_dim(n);
  for (int f : k.simplices_of_dim(n - 1)) {
    size_t deg = k.cofaces(f, 1).size();
    if (deg > 2) {
      dd.error = "not a pseudomanifold: facet " + std::to_string(f) +
                 " has " + std::to_string(deg) + " top cofaces";
      return dd;
    }
    if (deg == 1) {
      const auto& vs = k.simplices[f].verts;
      size_t nv = vs.size();
      for (size_t mask = 1; mask < (1u << nv); ++mask) {
        std::vector<int> sub;
        for (size_t b = 0; b < nv; ++b)
          if (mask & (1u << b)) sub.push_back(vs[b]);
        int id = k.find_simplex(sub);
        if (id >= 0) dd.boundary_simplex[id] = 1;
      }
    }
  }

  // orientation
  dd.orientation.assign(ns, 0);
  if (n == k.ambient_dim) {
    for (int t : tops) {
      std::vector<RatVec> dirs = k.edge_vectors(t);
      RatMat m(dirs.begin(), dirs.end());
      int s = rat_sign(rm_det(m));
      STRATCHERN_CHECK(s != 0, "degenerate top simplex");
      dd.orientation[t] = s;
    }
  } else {
    // propagate across interior facets; orientability is required
    std::map<int, std::vector<int>> facet_tops;
    for (int t : tops)
      for (auto [fid, sgn] : k.facets_signed(t)) facet_tops[fid].push_back(t);
    auto induced = [&](int t, int f) {
      const auto& tv = k.simplices[t].verts;
      const auto& fv = k.simplices[f].verts;
      size_t drop = 0;
      for (size_t i = 0, j = 0; i < tv.size(); ++i) {
        if (j < fv.size() && tv[i] == fv[j])
          ++j;
        else
          drop = i;
      }
      return (drop % 2 == 0) ? 1 : -1;
    };
    for (int root : tops) {
      if (dd.orientation[root] != 0) continue;
      dd.orientation[root] = 1;
      std::deque<int> queue = {root};
      while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        for (auto [fid, sgn] : k.facets_signed(t)) {
          for (int t2 : facet_tops[fid]) {
            if (t2 == t) continue;
            int need = -dd.orientation[t] * induced(t, fid) * induced(t2, fid);
            if (dd.orientation[t2] == 0) {
              dd.orientation[t2] = need;
              queue.push_back(t2);
            } else if (dd.orientation[t2] != need) {
              dd.error = "region is not orientable";
              return dd;
            }
          }
        }
      }
    }
  }

  // cells: saturated coface chains from each simplex, with orientation signs
  dd.cells.resize(ns);
  for (size_t s = 0; s < ns; ++s) {
    DualCell& cell = dd.cells[s];
    cell.source = static_cast<int>(s);
    int sk = k.simplices[s].dim();
    cell.dim = n - sk;
    std::vector<int> chain = {static_cast<int>(s)};
    auto grow = [&](auto&& self) -> void {
      int last = chain.back();
      if (k.simplices[last].dim() == n) {
        cell.members.push_back(chain);
        return;
      }
      for (int c : k.cofaces(last, 1)) {
        chain.push_back(c);
        self(self);
        chain.pop_back();
      }
    };
    grow(grow);

    for (const auto& flag : cell.members) {
      int top = flag.back();
      std::vector<RatVec> basis = k.edge_vectors(top);
      std::vector<RatVec> cols;
      const auto& sv = k.simplices[s].verts;
      for (size_t i = 1; i < sv.size(); ++i)
        cols.push_back(rv_sub(k.vertex(sv[i]), k.vertex(sv[0])));
      RatVec apex = k.barycenter(static_cast<int>(s));
      for (size_t i = 1; i < flag.size(); ++i)
        cols.push_back(rv_sub(k.barycenter(flag[i]), apex));
      RatMat m = rm_zero(n, n);
      for (size_t j = 0; j < cols.size(); ++j) {
        auto co = detail::coords_in_span(basis, cols[j]);
        STRATCHERN_CHECK(co.has_value(),
                         "member direction outside top simplex span");
        for (int i = 0; i < n; ++i) m[i][j] = (*co)[i];
      }
      int sg = rat_sign(rm_det(m));
      STRATCHERN_CHECK(sg != 0, "degenerate member flag");
      cell.member_sign.push_back(sg * dd.orientation[top]);
    }
  }

  // structural verification of every boundary chain: middle-drop faces must
  // cancel (diamond property); survivors are frontier or membrane flags
  for (size_t s = 0; s < ns; ++s) {
    FlagChain bd = dd.boundary_chain(static_cast<int>(s));
    for (const auto& [flag, coef] : bd) {
      if (flag.front() != static_cast<int>(s)) {
        // frontier: saturated chain starting at a one-up coface
        if (k.simplices[flag.front()].dim() != k.simplices[s].dim() + 1) {
          dd.error = "boundary chain of cell " + std::to_string(s) +
                     " has a non-frontier face";
          return dd;
        }
      } else {
        int last = flag.back();
        if (k.simplices[last].dim() != n - 1 || !dd.boundary_simplex[last]) {
          dd.error = "uncancelled interior face in boundary of cell " +
                     std::to_string(s);
          return dd;
        }
      }
    }
  }

  // chain-level d^2 = 0 through incidence numbers
  for (size_t s = 0; s < ns; ++s) {
    if (dd.cells[s].dim < 2) continue;
    std::map<int, Int> second;
    for (int t : k.cofaces(static_cast<int>(s), 1)) {
      int a = dd.incidence(static_cast<int>(s), t);
      for (int u : k.cofaces(t, 1))
        second[u] += Int(a) * dd.incidence(t, u);
    }
    for (const auto& [u, v] : second)
      if (v != 0) {
        dd.error = "incidence numbers do not square to zero at cell " +
                   std::to_string(s);
        return dd;
      }
  }

  dd.ok = true;
  return dd;
}

// ---------------------------------------------------------------------------
// ball structure of cells

struct CellBallReport {
  int cell = -1;
  std::string kind;  // "interior", "region-boundary", "singular"
  bool cone_ok = false;             // cell itself has point homology
  bool boundary_matches_link = false;
  bool strict_ok = false;           // sphere/half-ball homology where expected
  bool pass = false;
  std::vector<long long> link_betti;
};

// Verifies the ball structure of one dual cell.  The cell must be a cone on
// its frontier (point homology), the frontier must have the homology of the
// link of the source simplex, and where the source lies in a top stratum the
// link homology must be the sphere (interior) or point (region boundary)
// profile.  For sources in singular strata the first two checks certify the
// cell as the cone over its link, and the link's homology is reported.
inline CellBallReport cell_ball_check(const EmbeddedComplex& k,
                                      const DualDecomposition& dd,
                                      int cell_id) {
  CellBallReport rep;
  rep.cell = cell_id;
  const DualCell& c = dd.cells[cell_id];
  int n = dd.region_dim;
  int sk = k.simplices[c.source].dim();
  int stratum = k.simplices[c.source].stratum;
  int sdim = n;
  for (const auto& st : k.strata)
    if (st.id == stratum) sdim = st.real_dim;
  bool smooth = k.strata.empty() || sdim == n;
  bool on_boundary = dd.boundary_simplex[c.source] != 0;
  rep.kind = !smooth ? "singular" : (on_boundary ? "region-boundary" : "interior");

  // cone check
  HomologyProfile cone = homology_of_abstract(c.members);
  rep.cone_ok = cone.torsion_free() && cone.betti.size() >= 1 &&
                cone.betti[0] == 1;
  for (size_t q = 1; q < cone.betti.size(); ++q)
    if (cone.betti[q] != 0) rep.cone_ok = false;

  // link of the source simplex
  std::vector<std::vector<int>> link;
  for (int t : k.cofaces(c.source, n - sk)) {
    std::vector<int> rest;
    for (int v : k.simplices[t].verts) {
      const auto& sv = k.simplices[c.source].verts;
      if (!std::binary_search(sv.begin(), sv.end(), v)) rest.push_back(v);
    }
    link.push_back(rest);
  }

  if (c.dim == 0) {
    // top simplex: no frontier, link empty
    rep.boundary_matches_link = link.empty();
    rep.strict_ok = !smooth || link.empty();
  } else {
    std::vector<std::vector<int>> frontier;
    for (const auto& flag : c.members)
      frontier.push_back(std::vector<int>(flag.begin() + 1, flag.end()));
    HomologyProfile hb = homology_of_abstract(frontier);
    HomologyProfile hl = homology_of_abstract(link);
    rep.link_betti = hl.betti;
    rep.boundary_matches_link =
        hb.betti == hl.betti && hb.torsion == hl.torsion;
    if (!smooth) {
      rep.strict_ok = true;  // cone certificate only
    } else if (on_boundary) {
      // half-ball: contractible frontier
      rep.strict_ok = hl.torsion_free() && !hl.betti.empty() && hl.betti[0] == 1;
      for (size_t q = 1; q < hl.betti.size(); ++q)
        if (hl.betti[q] != 0) rep.strict_ok = false;
    } else {
      // sphere S^{n-k-1}
      int d = n - sk - 1;
      std::vector<long long> want(std::max(d + 1, 1), 0);
      want[0] = 1;
      want[d] += 1;
      std::vector<long long> got = hl.betti;
      while (got.size() > want.size() && got.back() == 0) got.pop_back();
      rep.strict_ok = hl.torsion_free() && got == want;
    }
  }
  rep.pass = rep.cone_ok && rep.boundary_matches_link && rep.strict_ok;
  return rep;
}

inline std::vector<CellBallReport> all_ball_checks(const EmbeddedComplex& k,
                                                   const DualDecomposition& dd) {
  std::vector<CellBallReport> out;
  for (size_t i = 0; i < dd.cells.size(); ++i)
    out.push_back(cell_ball_check(k, dd, static_cast<int>(i)));
  return out;
}

// ---------------------------------------------------------------------------
// transversality of cells to strata

struct TransversalityRecord {
  int cell = -1;
  int stratum = -1;
  int expected_dim = 0;  // dim(closure of stratum) - dim(source)
  int actual_dim = 0;
  bool pure = true;
  bool pass = false;
};

struct TransversalityReport {
  bool ok = true;
  std::vector<TransversalityRecord> records;
};

// The intersection of d(s) with the closure of a stratum S is carried by the
// flags staying inside that closure; transversality holds when for every
// source s inside the closure this intersection is pure of dimension
// dim(S) - dim(s) (ambient codimensions add).
inline TransversalityReport check_transversality(const EmbeddedComplex& k,
                                                 const DualDecomposition& dd) {
  (void)dd;
  TransversalityReport rep;
  for (const auto& st : k.strata) {
    std::set<int> closure = {st.id};
    for (const auto& other : k.strata)
      for (int up : other.in_closure_of)
        if (up == st.id) closure.insert(other.id);
    for (size_t s = 0; s < k.simplices.size(); ++s) {
      if (!closure.count(k.simplices[s].stratum)) continue;
      TransversalityRecord rec;
      rec.cell = static_cast<int>(s);
      rec.stratum = st.id;
      rec.expected_dim = st.real_dim - k.simplices[s].dim();
      int deepest = 0;
      bool pure = true;
      std::vector<int> chain = {static_cast<int>(s)};
      auto grow = [&](auto&& self) -> void {
        bool extended = false;
        for (int c : k.cofaces(chain.back(), 1)) {
          if (!closure.count(k.simplices[c].stratum)) continue;
          extended = true;
          chain.push_back(c);
          self(self);
          chain.pop_back();
        }
        if (!extended) {
          int len = static_cast<int>(chain.size()) - 1;
          deepest = std::max(deepest, len);
          if (len != rec.expected_dim) pure = false;
        }
      };
      grow(grow);
      rec.actual_dim = deepest;
      rec.pure = pure;
      rec.pass = pure && deepest == rec.expected_dim;
      if (!rec.pass) rep.ok = false;
      rep.records.push_back(rec);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// cellular neighbourhood of a subcomplex

struct CellularNeighbourhood {
  std::vector<int> interior_cells;  // duals of simplices inside the subset
  std::vector<int> boundary_cells;  // duals of outside simplices touching it
};

// Cells dual to simplices of the subset form the cellular neighbourhood; its
// boundary consists of cells dual to simplices outside the subset having at
// least one face inside it.
inline CellularNeighbourhood cellular_neighbourhood(
    const EmbeddedComplex& k, const DualDecomposition& dd,
    const std::set<int>& subset_strata) {
  CellularNeighbourhood out;
  for (size_t s = 0; s < k.simplices.size(); ++s) {
    if (subset_strata.count(k.simplices[s].stratum)) {
      out.interior_cells.push_back(static_cast<int>(s));
      continue;
    }
    const auto& vs = k.simplices[s].verts;
    size_t nv = vs.size();
    bool touches = false;
    for (size_t mask = 1; mask + 1 < (1u << nv) && !touches; ++mask) {
      std::vector<int> sub;
      for (size_t b = 0; b < nv; ++b)
        if (mask & (1u << b)) sub.push_back(vs[b]);
      int id = k.find_simplex(sub);
      if (id >= 0 && subset_strata.count(k.simplices[id].stratum))
        touches = true;
    }
    if (touches) out.boundary_cells.push_back(static_cast<int>(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// geometric certificate: a dual cell meets its source only at the barycenter

// Exact check that conv(member) intersects the source simplex in the single
// point at the barycenter, for every member flag of the cell.
inline bool certify_cell_meets_source_at_barycenter(const EmbeddedComplex& k,
                                                    const DualDecomposition& dd,
                                                    int cell_id) {
  const DualCell& c = dd.cells[cell_id];
  RatVec bary = k.barycenter(c.source);
  std::vector<RatVec> src;
  for (int v : k.simplices[c.source].verts) src.push_back(k.vertex(v));
  for (const auto& flag : c.members) {
    std::vector<RatVec> pts;
    for (int f : flag) pts.push_back(k.barycenter(f));
    for (int i = 0; i < k.ambient_dim; ++i) {
      RatVec e = rv_zero(k.ambient_dim);
      e[i] = 1;
      auto range = functional_range_on_intersection(pts, src, e);
      if (!range) return false;  // must meet: the barycenter is in both
      if (range->first != bary[i] || range->second != bary[i]) return false;
    }
  }
  return true;
}

}  // namespace stratchern

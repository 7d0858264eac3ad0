// Embedded stratified simplicial complexes: storage, validation, barycentric
// subdivision, boundary operators, chains/cochains.
//
// Conventions fixed here and relied on everywhere else:
//  * simplices are stored with ascending vertex indices; that ordering is the
//    simplex's orientation;
//  * all faces of every simplex are present explicitly, each with an id;
//  * boundary signs follow the alternating-face rule on the ascending list.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratchern/linalg.hpp"
#include "stratchern/ratlp.hpp"

namespace stratchern {

struct Simplex {
  std::vector<int> verts;  // ascending vertex indices
  int stratum = 0;
  int dim() const { return static_cast<int>(verts.size()) - 1; }
};

struct StratumInfo {
  int id = 0;
  int real_dim = 0;
  std::optional<int> complex_dim;
  std::vector<int> in_closure_of;  // strata whose closure contains this one
};

struct ValidationIssue {
  std::string kind;  // "missing-face", "degenerate", "overlap", ...
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
  void fail(const std::string& kind, const std::string& detail) {
    ok = false;
    issues.push_back({kind, detail});
  }
};

// Maps each simplex of a subdivided complex to the source simplex whose open
// cell contains it, and each source simplex to its barycenter vertex.
struct SubdivisionMap {
  std::vector<int> carrier;            // fine simplex id -> source simplex id
  std::vector<int> barycenter_vertex;  // source simplex id -> fine vertex id
};

class EmbeddedComplex {
 public:
  int ambient_dim = 0;
  bool complex_structure = false;  // ambient pairing (x1,y1,...,xm,ym)
  std::vector<RatVec> vertices;
  std::vector<Simplex> simplices;
  std::vector<StratumInfo> strata;

  int top_dimension() const {
    int d = -1;
    for (const auto& s : simplices) d = std::max(d, s.dim());
    return d;
  }

  const RatVec& vertex(int v) const { return vertices[v]; }

  // id lookup by sorted vertex list
  int find_simplex(std::vector<int> verts) const {
    ensure_index();
    std::sort(verts.begin(), verts.end());
    auto it = index_.find(verts);
    return it == index_.end() ? -1 : it->second;
  }

  int add_vertex(RatVec coords) {
    vertices.push_back(std::move(coords));
    index_dirty_ = true;
    return static_cast<int>(vertices.size()) - 1;
  }

  int add_simplex(std::vector<int> verts, int stratum) {
    std::sort(verts.begin(), verts.end());
    simplices.push_back({std::move(verts), stratum});
    index_dirty_ = true;
    return static_cast<int>(simplices.size()) - 1;
  }

  RatVec barycenter(int simplex_id) const {
    const auto& s = simplices[simplex_id];
    RatVec b = rv_zero(ambient_dim);
    for (int v : s.verts) b = rv_add(b, vertices[v]);
    return rv_scale(Rat(1, static_cast<int>(s.verts.size())), b);
  }

  // Direction vectors spanning the simplex (ascending-order edge vectors).
  std::vector<RatVec> edge_vectors(int simplex_id) const {
    const auto& s = simplices[simplex_id];
    std::vector<RatVec> dirs;
    for (size_t i = 1; i < s.verts.size(); ++i)
      dirs.push_back(rv_sub(vertices[s.verts[i]], vertices[s.verts[0]]));
    return dirs;
  }

  std::vector<int> simplices_of_dim(int d) const {
    std::vector<int> out;
    for (size_t i = 0; i < simplices.size(); ++i)
      if (simplices[i].dim() == d) out.push_back(static_cast<int>(i));
    return out;
  }

  // Codimension-one faces with alternating signs: face k drops the k-th
  // smallest vertex and carries sign (-1)^k.
  std::vector<std::pair<int, int>> facets_signed(int simplex_id) const {
    const auto& s = simplices[simplex_id];
    std::vector<std::pair<int, int>> out;
    if (s.dim() == 0) return out;
    for (size_t k = 0; k < s.verts.size(); ++k) {
      std::vector<int> f;
      for (size_t i = 0; i < s.verts.size(); ++i)
        if (i != k) f.push_back(s.verts[i]);
      int id = find_simplex(f);
      out.emplace_back(id, (k % 2 == 0) ? 1 : -1);
    }
    return out;
  }

  std::vector<int> cofaces(int simplex_id, int dim_up = 1) const {
    ensure_coface_index();
    std::vector<int> out;
    for (int c : coface_lists_[simplex_id])
      if (simplices[c].dim() == simplices[simplex_id].dim() + dim_up)
        out.push_back(c);
    return out;
  }

  // All simplices containing the given one (any higher dimension, excl. self).
  std::vector<int> star(int simplex_id) const {
    ensure_coface_index();
    return coface_lists_[simplex_id];
  }

  bool is_face_of(int face, int of) const {
    const auto& a = simplices[face].verts;
    const auto& b = simplices[of].verts;
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  }

  void invalidate_caches() const {
    index_dirty_ = true;
    coface_dirty_ = true;
  }

 private:
  mutable std::map<std::vector<int>, int> index_;
  mutable std::vector<std::vector<int>> coface_lists_;
  mutable bool index_dirty_ = true;
  mutable bool coface_dirty_ = true;

  void ensure_index() const {
    if (!index_dirty_) return;
    index_.clear();
    for (size_t i = 0; i < simplices.size(); ++i)
      index_[simplices[i].verts] = static_cast<int>(i);
    index_dirty_ = false;
    coface_dirty_ = true;
  }

  void ensure_coface_index() const {
    ensure_index();
    if (!coface_dirty_) return;
    coface_lists_.assign(simplices.size(), {});
    for (size_t i = 0; i < simplices.size(); ++i) {
      const auto& vs = simplices[i].verts;
      size_t k = vs.size();
      // enumerate proper nonempty subsets
      for (size_t mask = 1; mask + 1 < (1u << k); ++mask) {
        std::vector<int> sub;
        for (size_t b = 0; b < k; ++b)
          if (mask & (1u << b)) sub.push_back(vs[b]);
        auto it = index_.find(sub);
        if (it != index_.end())
          coface_lists_[it->second].push_back(static_cast<int>(i));
      }
    }
    coface_dirty_ = false;
  }
};

inline std::optional<RatVec> barycentric_coords(const EmbeddedComplex& k,
                                                int simplex_id,
                                                const RatVec& point) {
  const auto& s = k.simplices[simplex_id];
  size_t nv = s.verts.size();
  RatMat a = rm_zero(k.ambient_dim + 1, nv);
  RatVec b = rv_zero(k.ambient_dim + 1);
  for (size_t j = 0; j < nv; ++j) {
    const RatVec& p = k.vertex(s.verts[j]);
    for (int i = 0; i < k.ambient_dim; ++i) a[i][j] = p[i];
    a[k.ambient_dim][j] = 1;
  }
  for (int i = 0; i < k.ambient_dim; ++i) b[i] = point[i];
  b[k.ambient_dim] = 1;
  return rm_solve_consistent(a, b);
}

// ---------------------------------------------------------------------------
// validation

struct ValidateOptions {
  bool check_disjoint_open_cells = false;  // quadratic; off by default
};

inline ValidationReport validate(const EmbeddedComplex& k,
                                 const ValidateOptions& opt = {}) {
  ValidationReport rep;
  std::set<int> stratum_ids;
  for (const auto& s : k.strata) stratum_ids.insert(s.id);
  for (size_t i = 0; i < k.vertices.size(); ++i)
    if (static_cast<int>(k.vertices[i].size()) != k.ambient_dim)
      rep.fail("bad-vertex", "vertex " + std::to_string(i) +
                                 " has wrong coordinate count");
  for (size_t i = 0; i < k.simplices.size(); ++i) {
    const auto& s = k.simplices[i];
    for (size_t j = 1; j < s.verts.size(); ++j)
      if (s.verts[j] == s.verts[j - 1])
        rep.fail("degenerate", "repeated vertex in simplex " + std::to_string(i));
    for (int v : s.verts)
      if (v < 0 || v >= static_cast<int>(k.vertices.size()))
        rep.fail("bad-vertex-ref", "simplex " + std::to_string(i));
    if (!k.strata.empty() && !stratum_ids.count(s.stratum))
      rep.fail("bad-stratum", "simplex " + std::to_string(i) +
                                  " references unknown stratum " +
                                  std::to_string(s.stratum));
    // affine independence
    std::vector<RatVec> dirs;
    for (size_t j = 1; j < s.verts.size(); ++j)
      dirs.push_back(rv_sub(k.vertex(s.verts[j]), k.vertex(s.verts[0])));
    if (!dirs.empty()) {
      RatMat m(dirs.begin(), dirs.end());
      if (rm_rank(m) != dirs.size())
        rep.fail("degenerate",
                 "affinely dependent vertices in simplex " + std::to_string(i));
    }
    // closure: every facet present
    if (s.dim() > 0)
      for (auto [fid, sign] : k.facets_signed(static_cast<int>(i)))
        if (fid < 0)
          rep.fail("missing-face",
                   "facet of simplex " + std::to_string(i) + " absent");
  }
  // duplicate simplices
  {
    std::map<std::vector<int>, int> seen;
    for (size_t i = 0; i < k.simplices.size(); ++i) {
      auto [it, fresh] = seen.emplace(k.simplices[i].verts, i);
      if (!fresh)
        rep.fail("duplicate", "simplices " + std::to_string(it->second) +
                                  " and " + std::to_string(i));
    }
  }
  if (opt.check_disjoint_open_cells && rep.ok) {
    for (size_t i = 0; i < k.simplices.size(); ++i)
      for (size_t j = i + 1; j < k.simplices.size(); ++j) {
        const auto& a = k.simplices[i].verts;
        const auto& b = k.simplices[j].verts;
        if (a == b) continue;
        std::vector<RatVec> av, bv;
        for (int v : a) av.push_back(k.vertex(v));
        for (int v : b) bv.push_back(k.vertex(v));
        if (open_simplices_intersect(av, bv))
          rep.fail("overlap", "open cells of simplices " + std::to_string(i) +
                                  " and " + std::to_string(j) + " intersect");
      }
  }
  if (k.complex_structure && k.ambient_dim % 2 != 0)
    rep.fail("bad-complex-structure", "ambient_dim must be even");
  return rep;
}

// ---------------------------------------------------------------------------
// barycentric subdivision

// Subdivides every simplex; fine simplices are flags sigma_0 < ... < sigma_k
// of source faces, realized at their barycenters.  Stratum labels are
// inherited from the top element of the flag (the carrier).
inline EmbeddedComplex barycentric_subdivide(const EmbeddedComplex& k,
                                             SubdivisionMap* map_out = nullptr) {
  EmbeddedComplex out;
  out.ambient_dim = k.ambient_dim;
  out.complex_structure = k.complex_structure;
  out.strata = k.strata;
  out.vertices.reserve(k.simplices.size());
  std::vector<int> bary(k.simplices.size());
  for (size_t i = 0; i < k.simplices.size(); ++i)
    bary[i] = out.add_vertex(k.barycenter(static_cast<int>(i)));

  // enumerate flags: chains in the face poset
  std::vector<std::vector<int>> flags;
  std::vector<std::vector<int>> covers(k.simplices.size());
  for (size_t i = 0; i < k.simplices.size(); ++i)
    for (int c : k.star(static_cast<int>(i)))
      covers[i].push_back(c);  // all strict cofaces
  std::vector<int> chain;
  auto extend = [&](auto&& self, int last) -> void {
    flags.push_back(chain);
    for (int nxt : covers[last]) {
      chain.push_back(nxt);
      self(self, nxt);
      chain.pop_back();
    }
  };
  for (size_t i = 0; i < k.simplices.size(); ++i) {
    chain = {static_cast<int>(i)};
    extend(extend, static_cast<int>(i));
  }

  if (map_out) {
    map_out->carrier.assign(flags.size(), -1);
    map_out->barycenter_vertex = bary;
  }
  for (size_t f = 0; f < flags.size(); ++f) {
    std::vector<int> verts;
    for (int sid : flags[f]) verts.push_back(bary[sid]);
    int carrier = flags[f].back();  // largest face in the flag
    int id = out.add_simplex(verts, k.simplices[carrier].stratum);
    if (map_out) map_out->carrier[id] = carrier;
  }
  return out;
}

// ---------------------------------------------------------------------------
// boundary operator and chains

using IntMat = std::vector<std::vector<Int>>;

// Matrix of the boundary map C_q -> C_{q-1} in the ascending-vertex bases.
// Columns are indexed by the complex's q-simplices in id order, rows by its
// (q-1)-simplices in id order; row/column key vectors are returned so callers
// can map ids.
struct BoundaryMatrix {
  IntMat m;                 // rows x cols
  std::vector<int> rows;    // (q-1)-simplex ids
  std::vector<int> cols;    // q-simplex ids
};

inline BoundaryMatrix boundary_matrix(const EmbeddedComplex& k, int q) {
  BoundaryMatrix bm;
  bm.rows = k.simplices_of_dim(q - 1);
  bm.cols = k.simplices_of_dim(q);
  std::map<int, int> row_of;
  for (size_t i = 0; i < bm.rows.size(); ++i) row_of[bm.rows[i]] = i;
  bm.m.assign(bm.rows.size(), std::vector<Int>(bm.cols.size(), Int(0)));
  for (size_t c = 0; c < bm.cols.size(); ++c)
    for (auto [fid, sign] : k.facets_signed(bm.cols[c]))
      bm.m[row_of.at(fid)][c] += sign;
  return bm;
}

inline long long euler_characteristic(const EmbeddedComplex& k) {
  long long chi = 0;
  for (const auto& s : k.simplices) chi += (s.dim() % 2 == 0) ? 1 : -1;
  return chi;
}

}  // namespace stratchern

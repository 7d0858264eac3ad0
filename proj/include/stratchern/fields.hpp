// Stratified piecewise-affine vector fields.
//
// Four constructions on a stratified embedded complex:
//   * tube membership and nearest-point projection for the stratum
//     neighbourhoods U'_j in U_j in U~_j (widths eps/2, eps, 2 eps with the
//     comparison d_j < width * d_{j-1}^K, all evaluated in exact rationals);
//   * the basic normal field x - pi(x) of a skeleton level, ramped to zero
//     across the outer tube shell;
//   * parallel extension of a stratum field into its tube by nearest-point
//     pullback and tangential projection;
//   * the combined outward field  w = sum_j c_j w_j  with verified outward
//     angles, and the radial r-field on the dual decomposition whose zeros
//     sit at barycenters of the obstruction-dimension cells.
//
// All membership tests, norm caps, tangency statements and zero-exclusion
// statements are exact; only reported angles are floating point.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stratchern/dualize.hpp"
#include "stratchern/linalg.hpp"
#include "stratchern/mesh.hpp"
#include "stratchern/ratlp.hpp"
#include "stratchern/rng.hpp"
#include "stratchern/strata.hpp"
#include "stratchern/util.hpp"

namespace stratchern {

// ---------------------------------------------------------------------------
// Piecewise-affine fields.

// One vector per carrier vertex of a complex; affine interpolation inside
// each simplex.  Vertices without an entry read as zero.
struct PAField {
  int ambient_dim = 0;
  bool complex_structure = false;
  std::map<int, RatVec> values;  // carrier vertex id -> vector

  bool has(int v) const { return values.count(v) != 0; }
  RatVec at(int v) const {
    auto it = values.find(v);
    if (it != values.end()) return it->second;
    return rv_zero(static_cast<size_t>(ambient_dim));
  }
};

// Value of the field at barycentric coordinates `bary` over vertex list
// `verts` (affine interpolation).
inline RatVec pa_eval(const PAField& f, const std::vector<int>& verts,
                      const RatVec& bary) {
  STRATCHERN_CHECK(verts.size() == bary.size(), "barycentric arity mismatch");
  RatVec out = rv_zero(static_cast<size_t>(f.ambient_dim));
  for (size_t i = 0; i < verts.size(); ++i)
    out = rv_add(out, rv_scale(bary[i], f.at(verts[i])));
  return out;
}

// Value at an arbitrary point of the complex: scans for a simplex containing
// the point (all barycentric coordinates >= 0).
inline RatVec pa_eval_at_point(const EmbeddedComplex& k, const PAField& f,
                               const RatVec& q) {
  for (int d = k.top_dimension(); d >= 0; --d) {
    for (int sid : k.simplices_of_dim(d)) {
      auto bc = barycentric_coords(k, sid, q);
      if (!bc) continue;
      bool inside = true;
      for (const Rat& c : *bc)
        if (c < 0) {
          inside = false;
          break;
        }
      if (inside) return pa_eval(f, k.simplices[sid].verts, *bc);
    }
  }
  throw StratError("outside-complex", "point lies outside the complex");
}

// ---------------------------------------------------------------------------
// Tube membership.

// Exact membership of a point in the three nested tubes around skeleton
// level j.  The comparisons are squared:  d_j^2 < w^2 * (d_{j-1}^2)^K.
// When no stratum of dimension < j exists the tubes cover everything.
struct TubeMembership {
  Rat dj2 = Rat(0);    // squared distance to the level-j skeleton
  Rat dlow2 = Rat(0);  // squared distance to the skeleton below
  bool lower_empty = true;
  bool inner = false;   // U'_j, width eps/2
  bool inside = false;  // U_j,  width eps
  bool outer = false;   // U~_j, width 2 eps
};

namespace detail {

inline Rat rat_pow(const Rat& base, int e) {
  Rat out(1);
  for (int i = 0; i < e; ++i) out = out * base;
  return out;
}

}  // namespace detail

inline TubeMembership tube_membership(const EmbeddedComplex& k,
                                      const StratConfig& cfg, int j,
                                      const RatVec& q) {
  TubeMembership tm;
  SkeletonDistance dj = distance_to_skeleton(k, q, j);
  STRATCHERN_CHECK(!dj.empty, "tube level has no strata");
  tm.dj2 = dj.dist2;
  SkeletonDistance dl = distance_to_skeleton(k, q, j - 1);
  tm.lower_empty = dl.empty;
  if (dl.empty) {
    tm.inner = tm.inside = tm.outer = true;
    return tm;
  }
  tm.dlow2 = dl.dist2;
  int kexp = effective_exponent(cfg);
  Rat powk = detail::rat_pow(tm.dlow2, kexp);
  Rat e2 = cfg.eps_nbhd * cfg.eps_nbhd;
  tm.inner = tm.dj2 * 4 < e2 * powk;
  tm.inside = tm.dj2 < e2 * powk;
  tm.outer = tm.dj2 < e2 * powk * 4;
  return tm;
}

// ---------------------------------------------------------------------------
// Nearest-point projection with an ambiguity margin.

struct Projection {
  RatVec point;      // nearest point on the skeleton
  int simplex = -1;  // simplex whose open face holds the witness
  int stratum = -1;
  Rat dist2 = Rat(0);
  bool smooth = false;  // witness face spans its stratum's dimension
};

// Nearest point of the level-j skeleton.  In strict mode a second simplex
// realizing a distinct nearest point within a 1/16 relative margin on
// squared distances raises "ambiguous-projection"; otherwise ties resolve
// deterministically (smallest squared distance, then lexicographic point)
// so field construction stays total across tube creases.
inline Projection project_to_skeleton(const EmbeddedComplex& k,
                                      const StratConfig& cfg, int j,
                                      const RatVec& q, bool strict = true) {
  (void)cfg;
  std::vector<int> sk = skeleton_maximal(k, j);
  STRATCHERN_CHECK(!sk.empty(), "projection target skeleton is empty");
  std::optional<NearestPoint> best;
  int best_sid = -1;
  for (int sid : sk) {
    NearestPoint np = nearest_on_simplex(k, sid, q);
    if (!best || np.dist2 < best->dist2 ||
        (np.dist2 == best->dist2 && np.point < best->point)) {
      best = np;
      best_sid = sid;
    }
  }
  if (strict)
    for (int sid : sk) {
      if (sid == best_sid) continue;
      NearestPoint np = nearest_on_simplex(k, sid, q);
      if (np.point == best->point) continue;  // same witness through a face
      if (np.dist2 * 16 <= best->dist2 * 17)
        throw StratError("ambiguous-projection",
                         "ambiguous projection; shrink the neighbourhood or "
                         "refine the mesh");
    }
  Projection pr;
  pr.point = best->point;
  pr.dist2 = best->dist2;
  int fid = k.find_simplex(best->face);
  STRATCHERN_CHECK(fid >= 0, "witness face is not a declared simplex");
  pr.simplex = fid;
  pr.stratum = k.simplices[fid].stratum;
  const StratumInfo* st = stratum_info(k, pr.stratum);
  STRATCHERN_CHECK(st != nullptr, "witness stratum missing from the table");
  pr.smooth = k.simplices[fid].dim() == st->real_dim;
  return pr;
}

// Nearest-point map of the tube U_j; the point must lie inside U_j.
inline RatVec nearest_point_map(const EmbeddedComplex& k,
                                const StratConfig& cfg, int j,
                                const RatVec& q) {
  TubeMembership tm = tube_membership(k, cfg, j, q);
  STRATCHERN_CHECK(tm.inside, "nearest_point_map requires a U_j point");
  return project_to_skeleton(k, cfg, j, q).point;
}

// ---------------------------------------------------------------------------
// Basic normal field of a skeleton level.

// Field value x - pi(x) inside U_j, ramped down across the shell of U~_j,
// zero outside.  The ramp is the rational scalar (4 - t)/3 with
// t = d_j^2 / (eps^2 (d_{j-1}^2)^K) in [1, 4) on the shell, 1 inside U_j.
// Because eps <= 1/2, the shell lies inside {d_j < d_{j-1}^K} and the cap
// |w|^2 <= min(d_j^2, (d_{j-1}^2)^K) holds exactly at every carrier vertex.
struct NormalFieldData {
  int level = 0;  // skeleton dimension j
  PAField field;
  std::map<int, TubeMembership> zone;  // carrier vertex -> membership
  std::map<int, Projection> proj;      // carrier vertex -> projection
  bool norm_caps_exact = true;
};

inline NormalFieldData basic_normal_field(const EmbeddedComplex& k,
                                          const StratConfig& cfg, int j) {
  check_config(cfg);
  NormalFieldData out;
  out.level = j;
  out.field.ambient_dim = k.ambient_dim;
  out.field.complex_structure = k.complex_structure;
  int kexp = effective_exponent(cfg);
  Rat e2 = cfg.eps_nbhd * cfg.eps_nbhd;
  for (size_t v = 0; v < k.vertices.size(); ++v) {
    const RatVec& q = k.vertex(static_cast<int>(v));
    TubeMembership tm = tube_membership(k, cfg, j, q);
    if (!tm.outer) continue;  // outside the closed support: value zero
    Projection pr = project_to_skeleton(k, cfg, j, q, /*strict=*/false);
    RatVec r = rv_sub(q, pr.point);
    STRATCHERN_CHECK(rv_norm2(r) == tm.dj2,
                     "normal field norm must equal the skeleton distance");
    Rat ramp(1);
    if (!tm.inside && !tm.lower_empty) {
      Rat powk = detail::rat_pow(tm.dlow2, kexp);
      Rat t = tm.dj2 / (e2 * powk);
      ramp = (Rat(4) - t) / Rat(3);
      STRATCHERN_CHECK(ramp > 0 && ramp <= 1, "shell ramp out of range");
    }
    RatVec w = rv_scale(ramp, r);
    Rat w2 = rv_norm2(w);
    if (!(w2 <= tm.dj2)) out.norm_caps_exact = false;
    if (!tm.lower_empty) {
      Rat powk = detail::rat_pow(tm.dlow2, kexp);
      if (!(w2 <= powk)) out.norm_caps_exact = false;
    }
    out.zone.emplace(static_cast<int>(v), tm);
    out.proj.emplace(static_cast<int>(v), pr);
    if (!rv_is_zero(w)) out.field.values.emplace(static_cast<int>(v), w);
  }
  STRATCHERN_CHECK(out.norm_caps_exact, "normal field norm caps violated");
  return out;
}

// ---------------------------------------------------------------------------
// Parallel extension.

namespace detail {

// Tangent projector for a carrier vertex: the plane of the least-id
// full-dimensional simplex of the vertex's own stratum containing it.
inline TangentProjector carrier_projector(const EmbeddedComplex& k,
                                          int vertex) {
  int zid = k.find_simplex({vertex});
  STRATCHERN_CHECK(zid >= 0, "carrier vertex has no 0-simplex");
  int sid = k.simplices[zid].stratum;
  const StratumInfo* st = stratum_info(k, sid);
  STRATCHERN_CHECK(st != nullptr, "carrier vertex stratum missing");
  int want = st->real_dim;
  if (want == 0) {
    TangentProjector tp;
    tp.simplex = zid;
    tp.stratum = sid;
    tp.dim = 0;
    size_t nn = static_cast<size_t>(k.ambient_dim);
    tp.P = rm_zero(nn, nn);
    tp.P_perp = rm_identity(nn);
    return tp;
  }
  int pick = -1;
  std::vector<int> cand = k.star(zid);
  cand.push_back(zid);
  std::sort(cand.begin(), cand.end());
  for (int c : cand)
    if (k.simplices[c].stratum == sid && k.simplices[c].dim() == want) {
      pick = c;
      break;
    }
  STRATCHERN_CHECK(pick >= 0, "no full-dimensional stratum simplex at vertex");
  return projector_for_simplex(k, pick);
}

}  // namespace detail

// Extends a field given on the level-j skeleton into its tube: value at a
// carrier vertex x is the tangential projection P_x v(pi(x)), ramped down
// across the outer shell, zero beyond it, and equal to v on the skeleton.
inline PAField parallel_extension(const EmbeddedComplex& k,
                                  const StratConfig& cfg, const PAField& base,
                                  int j) {
  check_config(cfg);
  PAField out;
  out.ambient_dim = k.ambient_dim;
  out.complex_structure = k.complex_structure;
  int kexp = effective_exponent(cfg);
  Rat e2 = cfg.eps_nbhd * cfg.eps_nbhd;
  for (size_t v = 0; v < k.vertices.size(); ++v) {
    const RatVec& q = k.vertex(static_cast<int>(v));
    TubeMembership tm = tube_membership(k, cfg, j, q);
    if (tm.dj2 == 0) {  // on the skeleton: keep the base value
      RatVec val = base.at(static_cast<int>(v));
      if (!rv_is_zero(val)) out.values.emplace(static_cast<int>(v), val);
      continue;
    }
    if (!tm.outer) continue;
    Projection pr = project_to_skeleton(k, cfg, j, q, /*strict=*/false);
    auto bc = barycentric_coords(k, pr.simplex, pr.point);
    STRATCHERN_CHECK(bc.has_value(), "projection point must lie in its face");
    RatVec pulled = pa_eval(base, k.simplices[pr.simplex].verts, *bc);
    TangentProjector tp = detail::carrier_projector(k, static_cast<int>(v));
    RatVec val = rm_apply(tp.P, pulled);
    if (!tm.inside && !tm.lower_empty) {
      Rat powk = detail::rat_pow(tm.dlow2, kexp);
      Rat t = tm.dj2 / (e2 * powk);
      val = rv_scale((Rat(4) - t) / Rat(3), val);
    }
    if (!rv_is_zero(val)) out.values.emplace(static_cast<int>(v), val);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Complex-linear rank (exact elimination over Q(i)).

namespace detail {

struct CRat {
  Rat re, im;
  bool zero() const { return re == 0 && im == 0; }
};

inline CRat c_mul(const CRat& a, const CRat& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline CRat c_sub(const CRat& a, const CRat& b) {
  return {a.re - b.re, a.im - b.im};
}

inline CRat c_div(const CRat& a, const CRat& b) {
  Rat n = b.re * b.re + b.im * b.im;
  STRATCHERN_CHECK(n != 0, "complex division by zero");
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

}  // namespace detail

// Rank over C of real 2m-vectors read as m complex coordinates
// (x_0 + i x_1, x_2 + i x_3, ...).
inline int complex_rank(const std::vector<RatVec>& vectors, int m) {
  using detail::CRat;
  std::vector<std::vector<CRat>> rows;
  for (const RatVec& v : vectors) {
    STRATCHERN_CHECK(v.size() == static_cast<size_t>(2 * m),
                     "complex rank needs 2m real coordinates");
    std::vector<CRat> row(static_cast<size_t>(m));
    for (int t = 0; t < m; ++t) row[t] = {v[2 * t], v[2 * t + 1]};
    rows.push_back(std::move(row));
  }
  int rank = 0;
  for (int col = 0; col < m && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (!rows[r][col].zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][col].zero()) continue;
      CRat f = detail::c_div(rows[r][col], rows[rank][col]);
      for (int c = col; c < m; ++c)
        rows[r][c] = detail::c_sub(rows[r][c], detail::c_mul(f, rows[rank][c]));
    }
    ++rank;
  }
  return rank;
}

// Linear independence of the listed fields at every vertex where any of them
// is supported; complex rank when the complex structure is declared.
struct IndependenceReport {
  bool independent = true;
  int checked = 0;
  int witness_vertex = -1;
};

inline IndependenceReport independence_check(
    const EmbeddedComplex& k, const std::vector<const PAField*>& fields) {
  IndependenceReport rep;
  std::set<int> verts;
  for (const PAField* f : fields)
    for (const auto& [v, val] : f->values) verts.insert(v);
  int need = static_cast<int>(fields.size());
  for (int v : verts) {
    std::vector<RatVec> vecs;
    for (const PAField* f : fields) vecs.push_back(f->at(v));
    int rank;
    if (k.complex_structure)
      rank = complex_rank(vecs, k.ambient_dim / 2);
    else {
      RatMat a = rm_zero(vecs.size(), static_cast<size_t>(k.ambient_dim));
      for (size_t i = 0; i < vecs.size(); ++i)
        for (int c = 0; c < k.ambient_dim; ++c) a[i][c] = vecs[i][c];
      rank = static_cast<int>(rm_rank(a));
    }
    ++rep.checked;
    if (rank < need) {
      rep.independent = false;
      rep.witness_vertex = v;
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Tangency certificates.

// Verifies that field values are tangent to their carrier vertex's stratum.
// At an interior smooth carrier the tangent plane is unique; at a crease the
// value is checked against every full-dimensional stratum simplex containing
// the vertex (all pass: strong, some: weak).
struct TangencyReport {
  bool stratified = true;
  int checked = 0;
  std::vector<int> weak;      // vertices tangent to some but not all planes
  std::vector<int> failures;  // vertices tangent to no incident plane
};

inline TangencyReport check_tangency(const EmbeddedComplex& k,
                                     const PAField& f) {
  TangencyReport rep;
  for (const auto& [v, val] : f.values) {
    if (rv_is_zero(val)) continue;
    int zid = k.find_simplex({v});
    STRATCHERN_CHECK(zid >= 0, "valued vertex has no 0-simplex");
    int sid = k.simplices[zid].stratum;
    const StratumInfo* st = stratum_info(k, sid);
    STRATCHERN_CHECK(st != nullptr, "valued vertex stratum missing");
    if (st->real_dim == k.ambient_dim) continue;  // no constraint
    ++rep.checked;
    std::vector<int> planes;
    for (int c : k.star(zid))
      if (k.simplices[c].stratum == sid && k.simplices[c].dim() == st->real_dim)
        planes.push_back(c);
    if (k.simplices[zid].dim() == st->real_dim) planes.push_back(zid);
    STRATCHERN_CHECK(!planes.empty(), "no stratum plane at valued vertex");
    int pass = 0;
    for (int p : planes) {
      TangentProjector tp = projector_for_simplex(k, p);
      if (rv_is_zero(rm_apply(tp.P_perp, val))) ++pass;
    }
    if (pass == static_cast<int>(planes.size())) continue;
    if (pass > 0)
      rep.weak.push_back(v);
    else {
      rep.failures.push_back(v);
      rep.stratified = false;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The combined outward field  w = sum_j c_j w_j.

// The outward condition at a sample x in U'_j with projection q = pi_j(x):
// writing  a = P^perp_q w(x)  (component of the combined field normal to the
// stratum) and  b = x - q,  the verified inequality is
//
//     <a, b> > 0   and   |a|^2 |b|^2 < (1 + tan^2(lambda)) <a, b>^2,
//
// i.e. the angle between the normal component of w and the basic normal
// field is below lambda, exactly in rationals.
//
// Coefficients descend with the stratum dimension: c = 1 on the lowest
// level, divided by the ratio at each next level.  At a level-j sample the
// aligned part of P^perp w is (c_j + lower ramps) r_j, because a lower
// level's field transports to a positive multiple of r_j up to stratum
// curvature, while each higher-level field i > j is capped by
// |w_i| <= d_{i-1}^K <= d_j^K and scaled by c_i <= c_j / ratio, so its
// relative contribution is at most d_j^{K-1} / ratio.  Doubling the ratio
// suppresses that term -- the only error on complexes with flat strata;
// curvature of a lower stratum instead surfaces as failing samples and an
// unverifiable bundle.
struct OutwardComponent {
  int stratum_dim = 0;
  Rat coefficient = Rat(1);
  NormalFieldData data;
};

struct OutwardSample {
  int stratum_dim = 0;
  RatVec point;
  double angle = 0.0;
};

struct OutwardBundle {
  std::vector<OutwardComponent> components;  // ascending stratum dimension
  Rat c_ratio_used = Rat(1);
  int doublings = 0;
  PAField combined;
  int samples_checked = 0;
  int samples_skipped = 0;
  OutwardSample worst;  // largest observed angle (radians, reporting only)
  // Each level's field equals the basic normal field on U_j exactly, so the
  // difference |w_j - r_j| vanishes there at every exponent.
  std::string difference_exponent = "exact (w_j = r_j on U_j)";
  std::vector<std::string> notes;
};

namespace detail {

// Rational lower bound for tan^2(lambda); floored at 6 decimal digits so
// the exact angle comparison stays sufficient for the bound lambda.
inline Rat tan2_lower(const Rat& lambda) {
  double t = std::tan(to_double(lambda));
  double t2 = t * t;
  long long fl = static_cast<long long>(std::floor(t2 * 1e6));
  if (fl < 1) fl = 1;
  return Rat(Int(fl), Int(1000000));
}

struct OutwardProbe {
  bool usable = false;
  bool pass = false;
  double angle = 0.0;
  RatVec point;
};

inline OutwardProbe outward_probe(const EmbeddedComplex& k,
                                  const StratConfig& cfg, const PAField& w,
                                  int j, const std::vector<int>& verts,
                                  const RatVec& bary, const Rat& tan2) {
  OutwardProbe out;
  RatVec q = rv_zero(static_cast<size_t>(k.ambient_dim));
  for (size_t i = 0; i < verts.size(); ++i)
    q = rv_add(q, rv_scale(bary[i], k.vertex(verts[i])));
  TubeMembership tm = tube_membership(k, cfg, j, q);
  if (!tm.inner || tm.dj2 == 0) return out;
  Projection pr;
  try {
    pr = project_to_skeleton(k, cfg, j, q);
  } catch (const StratError&) {
    return out;  // ambiguous nearest point: not an admissible sample
  }
  if (!pr.smooth) return out;
  RatVec b = rv_sub(q, pr.point);
  TangentProjector tp = projector_for_simplex(k, pr.simplex);
  RatVec a = rm_apply(tp.P_perp, pa_eval(w, verts, bary));
  out.usable = true;
  out.point = q;
  Rat dot = rv_dot(a, b);
  Rat a2 = rv_norm2(a), b2 = rv_norm2(b);
  out.pass = dot > 0 && a2 * b2 < (Rat(1) + tan2) * dot * dot;
  double cross2 = to_double(a2 * b2 - dot * dot);
  out.angle = std::atan2(std::sqrt(std::max(0.0, cross2)), to_double(dot));
  return out;
}

}  // namespace detail

inline OutwardBundle build_outward(const EmbeddedComplex& k,
                                   const StratConfig& cfg) {
  check_config(cfg);
  OutwardBundle bundle;
  std::vector<int> dims = present_stratum_dims(k);
  STRATCHERN_CHECK(!dims.empty(), "complex has no strata");
  // One component per stratum dimension below the top; the top level's
  // normal field vanishes identically on the complex.
  for (size_t i = 0; i + 1 < dims.size(); ++i) {
    OutwardComponent c;
    c.stratum_dim = dims[i];
    c.data = basic_normal_field(k, cfg, dims[i]);
    bundle.components.push_back(std::move(c));
  }
  if (bundle.components.empty())
    bundle.notes.push_back("single stratum level: outward field is empty");
  Rat tan2 = detail::tan2_lower(cfg.lambda);

  const int kMaxDoublings = 8;
  for (int attempt = 0; attempt <= kMaxDoublings; ++attempt) {
    Rat ratio = cfg.c_ratio * detail::rat_pow(Rat(2), attempt);
    PAField combined;
    combined.ambient_dim = k.ambient_dim;
    combined.complex_structure = k.complex_structure;
    Rat coeff(1);
    for (auto& comp : bundle.components) {
      comp.coefficient = coeff;
      for (const auto& [v, val] : comp.data.field.values) {
        RatVec add = rv_scale(coeff, val);
        auto it = combined.values.find(v);
        if (it == combined.values.end())
          combined.values.emplace(v, add);
        else
          it->second = rv_add(it->second, add);
      }
      coeff = coeff / ratio;
    }
    for (auto it = combined.values.begin(); it != combined.values.end();)
      it = rv_is_zero(it->second) ? combined.values.erase(it) : std::next(it);

    bool all_pass = true;
    int checked = 0, skipped = 0;
    OutwardSample worst;
    for (const auto& comp : bundle.components) {
      int j = comp.stratum_dim;
      // Sample carriers: full-dimensional simplices of strictly higher
      // strata; those with a vertex at level <= j host the deep draws.
      std::vector<int> cands, touching;
      for (size_t s = 0; s < k.simplices.size(); ++s) {
        const StratumInfo* st = stratum_info(k, k.simplices[s].stratum);
        if (!st || st->real_dim <= j) continue;
        if (k.simplices[s].dim() != st->real_dim) continue;
        cands.push_back(static_cast<int>(s));
        for (int v : k.simplices[s].verts) {
          int zid = k.find_simplex({v});
          const StratumInfo* vs = stratum_info(k, k.simplices[zid].stratum);
          if (vs && vs->real_dim <= j) {
            touching.push_back(static_cast<int>(s));
            break;
          }
        }
      }
      if (cands.empty()) continue;
      int budget = std::max(24, cfg.samples / 4);
      int used = 0;
      for (int i = 0; i < budget * 4 && used < budget; ++i) {
        Substream rng(cfg.seed, "outward", static_cast<uint64_t>(j),
                      static_cast<uint64_t>(i));
        bool deep = (i % 2 == 0) && !touching.empty();
        int sid = deep ? touching[rng.below(touching.size())]
                       : cands[rng.below(cands.size())];
        const std::vector<int>& verts = k.simplices[sid].verts;
        RatVec bary = rng.barycentric(verts.size());
        if (deep) {
          // Pull the sample toward a low-stratum vertex of the simplex.
          int low = -1;
          for (size_t t = 0; t < verts.size(); ++t) {
            int zid = k.find_simplex({verts[t]});
            const StratumInfo* vs = stratum_info(k, k.simplices[zid].stratum);
            if (vs && vs->real_dim <= j) {
              low = static_cast<int>(t);
              break;
            }
          }
          if (low >= 0) {
            Rat t = Rat(1, Int(1) << (1 + (i / 2) % 10));
            for (auto& c : bary) c = c * t;
            bary[static_cast<size_t>(low)] =
                bary[static_cast<size_t>(low)] + (Rat(1) - t);
          }
        }
        detail::OutwardProbe probe =
            detail::outward_probe(k, cfg, combined, j, verts, bary, tan2);
        if (!probe.usable) {
          ++skipped;
          continue;
        }
        ++used;
        ++checked;
        if (probe.angle > worst.angle) worst = {j, probe.point, probe.angle};
        if (!probe.pass) all_pass = false;
      }
      if (used == 0)
        bundle.notes.push_back("no admissible samples at stratum dimension " +
                               std::to_string(j));
    }
    if (all_pass) {
      bundle.c_ratio_used = ratio;
      bundle.doublings = attempt;
      bundle.combined = std::move(combined);
      bundle.samples_checked = checked;
      bundle.samples_skipped = skipped;
      bundle.worst = worst;
      return bundle;
    }
  }
  throw StratError(
      "outward-unverifiable",
      "outward condition unverifiable; refine carrier or raise lambda");
}

// ---------------------------------------------------------------------------
// The radial r-field on the dual decomposition.

struct SingularPoint {
  int source_simplex = -1;  // source simplex whose dual cell holds the zero
  int fine_vertex = -1;     // its barycenter vertex in the carrier
  int stratum = -1;
  int stratum_dim = 0;
  bool base_case = false;          // stratum at the obstruction base level
  bool outward_certified = false;  // homotopic to the cone field on the cell
};

struct TheoremReport {
  bool zeros_only_at_barycenters = false;  // every other cell is zero-free
  bool zeros_only_last_field = false;      // leading frame nonsingular
  bool zeros_in_lowest_stratum = false;    // cell's minimal stratum holds them
  bool none_on_region_boundary = false;    // boundary cells zero-free
  std::vector<std::string> notes;
  bool pass() const {
    return zeros_only_at_barycenters && zeros_only_last_field &&
           zeros_in_lowest_stratum && none_on_region_boundary;
  }
};

struct RField {
  int r = 1;
  int obstruction_dim = 0;  // real dimension 2p of the zero-carrying cells
  EmbeddedComplex carrier;  // barycentric refinement holding the values
  SubdivisionMap map;       // source simplex -> carrier vertex
  std::vector<PAField> fields;
  std::vector<SingularPoint> singular;
  TheoremReport theorem;
  TangencyReport tangency;
  IndependenceReport leading_frame;
  int seed_attempts = 0;
  std::vector<std::string> notes;

  // Field value of component `c` at the barycenter of source simplex `s`.
  RatVec value_at(int c, int s) const {
    return fields[c].at(map.barycenter_vertex[s]);
  }
};

namespace detail {

enum class RadialKind { Unset, Zero, Overlay, Cascade, Seeded };

// Least-id full-dimensional simplex of `stratum` containing simplex `s`.
inline int stratum_top_containing(const EmbeddedComplex& k, int s, int stratum,
                                  int want_dim) {
  std::vector<int> cand = k.star(s);
  cand.push_back(s);
  std::sort(cand.begin(), cand.end());
  for (int c : cand)
    if (k.simplices[c].stratum == stratum && k.simplices[c].dim() == want_dim)
      return c;
  return -1;
}

// Proper faces of simplex `s` lying in strata of dimension below
// `stratum_dim`.
inline std::vector<int> lower_faces(const EmbeddedComplex& k, int s,
                                    int stratum_dim) {
  std::vector<int> out;
  const std::vector<int>& verts = k.simplices[s].verts;
  int n = static_cast<int>(verts.size());
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    std::vector<int> sub;
    for (int b = 0; b < n; ++b)
      if (mask & (1 << b)) sub.push_back(verts[b]);
    int fid = k.find_simplex(sub);
    if (fid < 0) continue;
    const StratumInfo* st = stratum_info(k, k.simplices[fid].stratum);
    if (st && st->real_dim < stratum_dim) out.push_back(fid);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Evaluates a per-source-simplex value table at a point inside the closed
// face `f`: the point is located in a chain of f's face poset and the
// values at the chain's barycenters are combined affinely, matching the
// interpolation over the barycentric subdivision.
inline RatVec eval_on_face(const EmbeddedComplex& k,
                           const std::map<int, RatVec>& value, int f,
                           const RatVec& p) {
  const std::vector<int>& verts = k.simplices[f].verts;
  int n = static_cast<int>(verts.size());
  std::vector<int> faces;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> sub;
    for (int b = 0; b < n; ++b)
      if (mask & (1 << b)) sub.push_back(verts[b]);
    int fid = k.find_simplex(sub);
    STRATCHERN_CHECK(fid >= 0, "face closure is incomplete");
    faces.push_back(fid);
  }
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  std::vector<std::vector<int>> chains;
  std::vector<int> chain;
  auto grow = [&](auto&& self, int last) -> void {
    bool maximal = true;
    for (int nxt : faces)
      if (nxt != last && k.is_face_of(last, nxt)) {
        maximal = false;
        chain.push_back(nxt);
        self(self, nxt);
        chain.pop_back();
      }
    if (maximal) chains.push_back(chain);
  };
  for (int g : faces) {
    bool minimal = true;
    for (int other : faces)
      if (other != g && k.is_face_of(other, g)) minimal = false;
    if (!minimal) continue;
    chain = {g};
    grow(grow, g);
  }
  size_t amb = static_cast<size_t>(k.ambient_dim);
  for (const auto& ch : chains) {
    RatMat a = rm_zero(amb + 1, ch.size());
    RatVec rhs = rv_zero(amb + 1);
    for (size_t i = 0; i < ch.size(); ++i) {
      RatVec b = k.barycenter(ch[i]);
      for (size_t c = 0; c < amb; ++c) a[c][i] = b[c];
      a[amb][i] = Rat(1);
    }
    for (size_t c = 0; c < amb; ++c) rhs[c] = p[c];
    rhs[amb] = Rat(1);
    auto sol = rm_solve_consistent(a, rhs);
    if (!sol) continue;
    bool inside = true;
    for (const Rat& l : *sol)
      if (l < 0) {
        inside = false;
        break;
      }
    if (!inside) continue;
    RatVec out = rv_zero(amb);
    for (size_t i = 0; i < ch.size(); ++i) {
      auto it = value.find(ch[i]);
      if (it != value.end()) out = rv_add(out, rv_scale((*sol)[i], it->second));
    }
    return out;
  }
  throw StratError("outside-complex", "point not located in the face closure");
}

}  // namespace detail

// Builds the radial r-field.  For r = 1 this is the stratified outward
// vector field: zeros exactly at barycenters of cells dual to interior
// source vertices, outward exit along the region boundary, and on every
// cell around a zero-dimensional stratum point p a field homotopic to the
// cone field x - p through nonvanishing fields.  For r >= 2 the complex
// must carry a complex structure with all strata of complex dimension
// >= r - 1; the leading r - 1 fields form a constant complex frame and the
// last field vanishes at interior cells of real dimension 2p = 2(m - r + 1).
inline RField radial_frame(const EmbeddedComplex& k,
                           const DualDecomposition& dd, const StratConfig& cfg,
                           int r) {
  check_config(cfg);
  STRATCHERN_CHECK(dd.ok, "dual decomposition must be valid");
  STRATCHERN_CHECK(dd.cells.size() == k.simplices.size(),
                   "dual decomposition does not match the complex");
  if (r < 1) throw StratError("unsupported-rank", "frame rank must be >= 1");
  RField out;
  out.r = r;
  out.carrier = barycentric_subdivide(k, &out.map);

  int n = k.top_dimension();
  int base_complex_dim = r - 1;  // complex stratum dimension of base zeros
  if (r == 1) {
    out.obstruction_dim = n;
  } else {
    if (!k.complex_structure || k.ambient_dim % 2 != 0)
      throw StratError("unsupported-rank",
                       "r >= 2 requires a complex structure");
    int m = k.ambient_dim / 2;
    if (r > m)
      throw StratError("unsupported-rank",
                       "frame rank exceeds the complex dimension");
    for (const auto& st : k.strata) {
      if (!st.complex_dim)
        throw StratError("unsupported-rank",
                         "r >= 2 requires complex strata dimensions");
      if (*st.complex_dim < r - 1)
        throw StratError("unsupported-rank",
                         "strata below the frame base dimension");
    }
    out.obstruction_dim = 2 * (m - r + 1);
  }
  int zero_source_dim = n - out.obstruction_dim;  // source dim of zero cells

  // ---- leading r-1 constant frame (r >= 2) -------------------------------
  std::vector<RatVec> frame;
  auto c_project_out = [&](RatVec v) -> RatVec {
    // Remove the complex span of the accepted frame vectors from v.
    int m = k.ambient_dim / 2;
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
  };
  if (r >= 2) {
    int top = k.simplices_of_dim(n).front();
    for (const RatVec& e : k.edge_vectors(top)) {
      if (static_cast<int>(frame.size()) == r - 1) break;
      RatVec v = c_project_out(e);  // complex Gram-Schmidt step
      if (!rv_is_zero(v)) frame.push_back(v);
    }
    STRATCHERN_CHECK(static_cast<int>(frame.size()) == r - 1,
                     "edge vectors span too little for the frame");
  }

  // ---- classify source simplices ----------------------------------------
  size_t ns = k.simplices.size();
  std::vector<detail::RadialKind> kind(ns, detail::RadialKind::Unset);
  std::vector<int> sdim(ns), strat(ns), strat_dim(ns);
  for (size_t s = 0; s < ns; ++s) {
    sdim[s] = k.simplices[s].dim();
    strat[s] = k.simplices[s].stratum;
    const StratumInfo* st = stratum_info(k, strat[s]);
    STRATCHERN_CHECK(st != nullptr, "simplex stratum missing from table");
    strat_dim[s] = st->real_dim;
  }
  for (size_t s = 0; s < ns; ++s) {
    if (r >= 2) {
      if (sdim[s] < zero_source_dim) continue;  // below the relevant skeleton
      if (sdim[s] == zero_source_dim && !dd.boundary_simplex[s])
        kind[s] = detail::RadialKind::Zero;
      else
        kind[s] = detail::RadialKind::Seeded;
      continue;
    }
    if (sdim[s] == 0) {
      if (!dd.boundary_simplex[s]) {
        kind[s] = detail::RadialKind::Zero;
      } else if (strat_dim[s] == 0) {
        throw StratError("needs-refinement",
                         "point stratum on the region boundary");
      } else {
        kind[s] = detail::RadialKind::Overlay;
      }
      continue;
    }
    if (!detail::lower_faces(k, static_cast<int>(s), strat_dim[s]).empty())
      kind[s] = detail::RadialKind::Cascade;
    else if (dd.boundary_simplex[s])
      kind[s] = detail::RadialKind::Overlay;
    else
      kind[s] = detail::RadialKind::Seeded;
  }

  // Assignment order: ascending stratum dimension so cascades can read the
  // already-built values on lower strata.
  std::vector<int> order;
  for (size_t s = 0; s < ns; ++s)
    if (kind[s] != detail::RadialKind::Unset)
      order.push_back(static_cast<int>(s));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (strat_dim[a] != strat_dim[b]) return strat_dim[a] < strat_dim[b];
    return sdim[a] < sdim[b];
  });

  // Seeded values start from deterministic defaults -- toward the largest
  // vertex of the simplex for r = 1 (pairing any such value against the
  // affine extension of the vertex order is strictly positive across a
  // flag, so all-seeded cells exclude zero structurally), and the constant
  // completion of the leading frame for r >= 2 (a single nonzero direction
  // in the frame complement, shared by every seeded cell).  Cells that
  // still capture zero (possible where seeds meet boundary or cascade
  // values) have exactly their seeded members resampled.
  RatVec complement_dir = rv_zero(static_cast<size_t>(k.ambient_dim));
  if (r >= 2) {
    for (int i = 0; i < k.ambient_dim && rv_is_zero(complement_dir); ++i) {
      RatVec e = rv_zero(static_cast<size_t>(k.ambient_dim));
      e[static_cast<size_t>(i)] = 1;
      complement_dir = c_project_out(e);
    }
    STRATCHERN_CHECK(!rv_is_zero(complement_dir),
                     "leading frame already spans the ambient space");
  }
  auto seeded_value = [&](int s, bool resample, int salt) -> RatVec {
    Substream rng(cfg.seed, "radial-seed", static_cast<uint64_t>(s),
                  static_cast<uint64_t>(salt));
    if (r >= 2) {
      if (!resample) return complement_dir;
      RatVec v(static_cast<size_t>(k.ambient_dim));
      for (int tries = 0; tries < 16; ++tries) {
        for (auto& c : v) c = rng.rat(8);
        if (!rv_is_zero(c_project_out(v))) break;
      }
      STRATCHERN_CHECK(!rv_is_zero(c_project_out(v)),
                       "seeded value stuck in the frame span");
      return v;
    }
    if (!resample)
      return rv_sub(k.vertex(k.simplices[s].verts.back()), k.barycenter(s));
    std::vector<RatVec> edges = k.edge_vectors(s);
    if (sdim[s] == 1) return rv_scale(Rat(rng.below(2) == 0 ? 1 : -1), edges[0]);
    RatVec v = rv_zero(static_cast<size_t>(k.ambient_dim));
    for (int tries = 0; tries < 16 && rv_is_zero(v); ++tries) {
      v = rv_zero(static_cast<size_t>(k.ambient_dim));
      for (const RatVec& e : edges) v = rv_add(v, rv_scale(rng.rat(8), e));
    }
    STRATCHERN_CHECK(!rv_is_zero(v), "seeded tangent value vanished");
    return v;
  };

  const int kMaxSeedAttempts = 32;
  std::set<int> wobble;         // seeded simplices under local repair
  std::map<int, RatVec> value;  // source simplex -> last-field value
  for (int attempt = 0; attempt < kMaxSeedAttempts; ++attempt) {
    out.seed_attempts = attempt + 1;
    value.clear();
    for (int s : order) {
      switch (kind[s]) {
        case detail::RadialKind::Zero:
          value[s] = rv_zero(static_cast<size_t>(k.ambient_dim));
          break;
        case detail::RadialKind::Overlay: {
          int t = detail::stratum_top_containing(k, s, strat[s], strat_dim[s]);
          STRATCHERN_CHECK(t >= 0, "no stratum simplex for boundary overlay");
          value[s] = rv_sub(k.barycenter(s), k.barycenter(t));
          STRATCHERN_CHECK(!rv_is_zero(value[s]), "degenerate boundary value");
          break;
        }
        case detail::RadialKind::Cascade: {
          std::vector<int> lows = detail::lower_faces(k, s, strat_dim[s]);
          std::optional<NearestPoint> best;
          int best_f = -1;
          RatVec q = k.barycenter(s);
          for (int f : lows) {
            NearestPoint np = nearest_on_simplex(k, f, q);
            if (!best || np.dist2 < best->dist2 ||
                (np.dist2 == best->dist2 && np.point < best->point)) {
              best = np;
              best_f = f;
            }
          }
          RatVec pulled = detail::eval_on_face(k, value, best_f, best->point);
          value[s] = rv_add(pulled, rv_sub(q, best->point));
          STRATCHERN_CHECK(!rv_is_zero(value[s]), "cascade produced a zero");
          break;
        }
        case detail::RadialKind::Seeded:
          value[s] = seeded_value(s, wobble.count(s) != 0, attempt);
          break;
        case detail::RadialKind::Unset:
          break;
      }
    }

    // ---- zero exclusion over every dual cell ----------------------------
    bool ok = true;
    bool structural_failure = false;
    int witness_cell = -1;
    for (size_t s = 0; s < ns; ++s) {
      if (kind[s] == detail::RadialKind::Unset) continue;
      bool apex_zero = kind[s] == detail::RadialKind::Zero;
      for (const auto& flag : dd.cells[s].members) {
        std::vector<RatVec> pts;
        std::vector<int> seeds;
        for (int g : flag) {
          if (apex_zero && g == static_cast<int>(s)) continue;
          auto it = value.find(g);
          STRATCHERN_CHECK(it != value.end(), "cell member missing a value");
          pts.push_back(r >= 2 ? c_project_out(it->second) : it->second);
          if (kind[g] == detail::RadialKind::Seeded) seeds.push_back(g);
        }
        if (pts.empty()) continue;
        if (zero_in_convex_hull(pts)) {
          ok = false;
          if (witness_cell < 0) witness_cell = static_cast<int>(s);
          if (seeds.empty()) structural_failure = true;
          wobble.insert(seeds.begin(), seeds.end());
        }
      }
    }
    if (ok) break;
    if (structural_failure || attempt + 1 == kMaxSeedAttempts)
      throw StratError(
          "needs-refinement",
          "zero exclusion failed for the cell dual to simplex " +
              std::to_string(witness_cell) +
              (structural_failure ? " (structural); refine the complex"
                                  : "; seed retries exhausted"));
  }

  // ---- package fields ---------------------------------------------------
  for (int c = 0; c < r - 1; ++c) {
    PAField f;
    f.ambient_dim = k.ambient_dim;
    f.complex_structure = k.complex_structure;
    for (size_t v = 0; v < out.carrier.vertices.size(); ++v)
      f.values.emplace(static_cast<int>(v), frame[c]);
    out.fields.push_back(std::move(f));
  }
  {
    PAField f;
    f.ambient_dim = k.ambient_dim;
    f.complex_structure = k.complex_structure;
    for (const auto& [s, val] : value)
      if (!rv_is_zero(val)) f.values.emplace(out.map.barycenter_vertex[s], val);
    out.fields.push_back(std::move(f));
  }

  // ---- singular points --------------------------------------------------
  for (size_t s = 0; s < ns; ++s) {
    if (kind[s] != detail::RadialKind::Zero) continue;
    SingularPoint sp;
    sp.source_simplex = static_cast<int>(s);
    sp.fine_vertex = out.map.barycenter_vertex[s];
    sp.stratum = strat[s];
    sp.stratum_dim = strat_dim[s];
    const StratumInfo* st = stratum_info(k, strat[s]);
    if (r == 1)
      sp.base_case = strat_dim[s] == 0;
    else
      sp.base_case = st->complex_dim && *st->complex_dim == base_complex_dim;
    if (sp.base_case && r == 1) {
      // Certify the cone homotopy: on each boundary piece of the cell the
      // straight segment from the field to the cone field x - p misses zero
      // whenever zero avoids the hull of the vertex values together with
      // the displaced vertex positions.
      const RatVec& p = k.vertex(k.simplices[s].verts[0]);
      bool cert = true;
      for (const auto& flag : dd.cells[s].members) {
        std::vector<RatVec> pts;
        for (int g : flag) {
          if (g == static_cast<int>(s)) continue;
          pts.push_back(value.at(g));
          pts.push_back(rv_sub(k.barycenter(g), p));
        }
        if (!pts.empty() && zero_in_convex_hull(pts)) cert = false;
      }
      sp.outward_certified = cert;
    }
    out.singular.push_back(sp);
  }

  // ---- structure report -------------------------------------------------
  out.theorem.zeros_only_at_barycenters = true;  // established by the LPs
  out.theorem.none_on_region_boundary = true;
  for (size_t s = 0; s < ns; ++s)
    if (kind[s] == detail::RadialKind::Zero && dd.boundary_simplex[s])
      out.theorem.none_on_region_boundary = false;
  if (r == 1) {
    out.theorem.zeros_only_last_field = true;
    out.leading_frame.independent = true;
    out.theorem.notes.push_back("r = 1: the leading frame is empty");
  } else {
    std::vector<const PAField*> lead;
    for (int c = 0; c < r - 1; ++c) lead.push_back(&out.fields[c]);
    out.leading_frame = independence_check(out.carrier, lead);
    out.theorem.zeros_only_last_field = out.leading_frame.independent;
  }
  out.theorem.zeros_in_lowest_stratum = true;
  for (const SingularPoint& sp : out.singular)
    for (const auto& flag : dd.cells[sp.source_simplex].members)
      for (int g : flag)
        if (strat_dim[g] < sp.stratum_dim)
          out.theorem.zeros_in_lowest_stratum = false;
  out.tangency = check_tangency(out.carrier, out.fields.back());
  if (!out.tangency.stratified)
    out.theorem.notes.push_back("last field failed a tangency certificate");
  return out;
}

}  // namespace stratchern

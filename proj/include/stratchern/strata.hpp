// Stratification checks: compatibility of declared strata with the complex,
// tangent-plane projectors, exact point-to-skeleton distances with witnesses,
// descent chains through the strata, and the sampled regularity audits
// (Lipschitz ratios, Kuo-Verdier ratios, Whitney trends).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stratchern/linalg.hpp"
#include "stratchern/mesh.hpp"
#include "stratchern/rng.hpp"
#include "stratchern/util.hpp"

namespace stratchern {

// ---------------------------------------------------------------------------
// Configuration for chains, neighbourhoods and audits.

struct StratConfig {
  Rat k_chain = Rat(2);      // chain separation constant, > 1
  Rat beta = Rat(1);         // regularity exponent used to floor k_exp
  int k_exp = 2;             // neighbourhood exponent, >= 2
  Rat eps_nbhd = Rat(1, 4);  // neighbourhood width epsilon in (0, 1)
  Rat lambda = Rat(1, 2);    // outward-angle bound in (0, 1)
  Rat c_ratio = Rat(100);    // growth ratio between outward-sum coefficients
  int samples = 200;         // audit sample budget
  uint64_t seed = 1;
};

// Exponent actually used in neighbourhood inequalities: the configured k_exp
// floored by ceil(2 / beta).
inline int effective_exponent(const StratConfig& cfg) {
  STRATCHERN_CHECK(cfg.beta > 0, "beta must be positive");
  Rat flo = Rat(2) / cfg.beta;
  Int num = boost::multiprecision::numerator(flo);
  Int den = boost::multiprecision::denominator(flo);
  Int q = num / den;
  if (q * den != num) q += 1;  // ceiling
  return std::max(cfg.k_exp, static_cast<int>(q));
}

inline void check_config(const StratConfig& cfg) {
  if (!(cfg.k_chain > 1))
    throw StratError("bad-config", "chain constant must exceed 1");
  if (!(cfg.beta > 0)) throw StratError("bad-config", "beta must be positive");
  if (cfg.k_exp < 2)
    throw StratError("bad-config", "neighbourhood exponent must be >= 2");
  // The outer tube {d_j < 2 eps d_{j-1}^K} must stay inside {d_j < d_{j-1}^K}
  // so the per-stratum norm caps hold exactly; that needs eps <= 1/2.
  if (!(cfg.eps_nbhd > 0) || cfg.eps_nbhd > Rat(1, 2))
    throw StratError("bad-config", "eps_nbhd must lie in (0, 1/2]");
  if (!(cfg.lambda > 0) || !(cfg.lambda < 1))
    throw StratError("bad-config", "lambda must lie in (0, 1)");
  if (!(cfg.c_ratio > 1))
    throw StratError("bad-config", "c_ratio must exceed 1");
  if (cfg.samples < 1)
    throw StratError("bad-config", "sample budget must be positive");
}

// ---------------------------------------------------------------------------
// Stratum table helpers.

inline const StratumInfo* stratum_info(const EmbeddedComplex& k, int id) {
  for (const auto& s : k.strata)
    if (s.id == id) return &s;
  return nullptr;
}

// Ids of strata contained in the closure of stratum `id` (including itself).
inline std::set<int> closure_strata(const EmbeddedComplex& k, int id) {
  std::set<int> out{id};
  for (const auto& s : k.strata)
    for (int up : s.in_closure_of)
      if (up == id) out.insert(s.id);
  return out;
}

// Distinct stratum dimensions that actually occur, ascending.
inline std::vector<int> present_stratum_dims(const EmbeddedComplex& k) {
  std::set<int> dims;
  for (const auto& s : k.simplices) {
    const StratumInfo* st = stratum_info(k, s.stratum);
    if (st) dims.insert(st->real_dim);
  }
  return {dims.begin(), dims.end()};
}

// ---------------------------------------------------------------------------
// Compatibility of the declared stratification with the simplicial data.

inline ValidationReport validate_compatibility(const EmbeddedComplex& k) {
  ValidationReport rep;
  std::set<int> ids;
  for (const auto& s : k.strata) {
    if (!ids.insert(s.id).second)
      rep.fail("stratum-table", "duplicate stratum id " + std::to_string(s.id));
    if (s.complex_dim && *s.complex_dim * 2 != s.real_dim)
      rep.fail("complex-dim", "stratum " + std::to_string(s.id) +
                                  " declares complex dimension " +
                                  std::to_string(*s.complex_dim) +
                                  " but real dimension " +
                                  std::to_string(s.real_dim));
  }
  if (k.complex_structure && k.ambient_dim % 2 != 0)
    rep.fail("complex-dim", "paired coordinates need even ambient dimension");
  for (const auto& s : k.strata)
    for (int up : s.in_closure_of) {
      const StratumInfo* other = stratum_info(k, up);
      if (!other) {
        rep.fail("stratum-table", "stratum " + std::to_string(s.id) +
                                      " references unknown stratum " +
                                      std::to_string(up));
      } else if (other->real_dim <= s.real_dim) {
        rep.fail("closure-order",
                 "stratum " + std::to_string(s.id) + " (dim " +
                     std::to_string(s.real_dim) +
                     ") sits in the closure of stratum " + std::to_string(up) +
                     " (dim " + std::to_string(other->real_dim) +
                     ") without a dimension drop");
      }
    }

  std::set<int> used;
  for (size_t i = 0; i < k.simplices.size(); ++i) {
    const Simplex& s = k.simplices[i];
    const StratumInfo* st = stratum_info(k, s.stratum);
    if (!st) {
      rep.fail("stratum-table", "simplex " + std::to_string(i) +
                                    " carries unknown stratum " +
                                    std::to_string(s.stratum));
      continue;
    }
    used.insert(s.stratum);
    if (s.dim() > st->real_dim)
      rep.fail("dimension", "simplex " + std::to_string(i) + " has dimension " +
                                std::to_string(s.dim()) +
                                " above its stratum's declared dimension " +
                                std::to_string(st->real_dim));
    // Frontier condition: every proper face lies in the same stratum or in
    // one that declares itself inside this stratum's closure.
    size_t nv = s.verts.size();
    for (size_t mask = 1; mask + 1 < (size_t(1) << nv); ++mask) {
      std::vector<int> face;
      for (size_t b = 0; b < nv; ++b)
        if (mask & (size_t(1) << b)) face.push_back(s.verts[b]);
      int fid = k.find_simplex(face);
      if (fid < 0) continue;  // missing faces are the mesh validator's job
      int fst = k.simplices[fid].stratum;
      if (fst == s.stratum) continue;
      const StratumInfo* finfo = stratum_info(k, fst);
      bool declared =
          finfo && std::find(finfo->in_closure_of.begin(),
                             finfo->in_closure_of.end(),
                             s.stratum) != finfo->in_closure_of.end();
      if (!declared)
        rep.fail("frontier", "face " + std::to_string(fid) + " of simplex " +
                                 std::to_string(i) + " lies in stratum " +
                                 std::to_string(fst) +
                                 " which does not declare itself inside the "
                                 "closure of stratum " +
                                 std::to_string(s.stratum));
    }
  }
  for (const auto& s : k.strata)
    if (!used.count(s.id))
      rep.fail("empty-stratum",
               "stratum " + std::to_string(s.id) + " has no simplices");

  // Closure purity: the maximal simplices of each stratum's closure must all
  // belong to the stratum itself and have its declared dimension.
  for (const auto& st : k.strata) {
    std::set<int> closure = closure_strata(k, st.id);
    for (size_t i = 0; i < k.simplices.size(); ++i) {
      if (!closure.count(k.simplices[i].stratum)) continue;
      bool maximal = true;
      for (int c : k.cofaces(static_cast<int>(i)))
        if (closure.count(k.simplices[c].stratum)) {
          maximal = false;
          break;
        }
      if (!maximal) continue;
      if (k.simplices[i].stratum != st.id)
        rep.fail("purity", "closure of stratum " + std::to_string(st.id) +
                               " has maximal simplex " + std::to_string(i) +
                               " in lower stratum " +
                               std::to_string(k.simplices[i].stratum));
      else if (k.simplices[i].dim() != st.real_dim)
        rep.fail("purity", "stratum " + std::to_string(st.id) +
                               " has maximal simplex " + std::to_string(i) +
                               " of dimension " +
                               std::to_string(k.simplices[i].dim()) +
                               ", expected " + std::to_string(st.real_dim));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Tangent projectors.

struct TangentProjector {
  int simplex = -1;  // open simplex containing the base point
  int stratum = -1;
  int dim = 0;    // rank of P
  RatMat P;       // orthogonal projector onto the tangent plane
  RatMat P_perp;  // complement projector
};

inline TangentProjector projector_for_simplex(const EmbeddedComplex& k,
                                              int sid) {
  const Simplex& s = k.simplices[sid];
  TangentProjector t;
  t.simplex = sid;
  t.stratum = s.stratum;
  t.dim = s.dim();
  t.P = projector_onto(k.edge_vectors(sid), k.ambient_dim);
  t.P_perp = rm_sub(rm_identity(k.ambient_dim), t.P);
  return t;
}

// Projector onto the tangent plane of the stratum through q.  q must lie in
// the open top-dimensional part of its stratum; creases and points off the
// complex raise a StratError.
inline TangentProjector tangent_projection(const EmbeddedComplex& k,
                                           const RatVec& q) {
  for (size_t i = 0; i < k.simplices.size(); ++i) {
    auto bc = barycentric_coords(k, static_cast<int>(i), q);
    if (!bc) continue;
    bool inside = true;
    for (const auto& w : *bc)
      if (!(w > 0)) {
        inside = false;
        break;
      }
    if (!inside) continue;
    const Simplex& s = k.simplices[i];
    const StratumInfo* st = stratum_info(k, s.stratum);
    STRATCHERN_CHECK(st != nullptr, "simplex with unknown stratum");
    if (s.dim() != st->real_dim)
      throw StratError("non-smooth-point",
                       "non-smooth evaluation point: the point lies on a "
                       "crease of stratum " +
                           std::to_string(s.stratum));
    return projector_for_simplex(k, static_cast<int>(i));
  }
  throw StratError("outside-complex",
                   "evaluation point lies on no open simplex of the complex");
}

// ---------------------------------------------------------------------------
// Exact distances to closed simplices and skeleta.

struct NearestPoint {
  Rat dist2;
  RatVec point;
  std::vector<int> face;  // vertices of the face whose relative interior
                          // contains the nearest point
};

// Nearest point of the closed simplex `sid` to x: enumerate faces, project
// onto each affine hull, keep projections with nonnegative barycentric
// weights.  Ties resolve to the smallest face, then lexicographically, so
// witnesses are deterministic.
inline NearestPoint nearest_on_simplex(const EmbeddedComplex& k, int sid,
                                       const RatVec& x) {
  const Simplex& s = k.simplices[sid];
  size_t nv = s.verts.size();
  std::optional<NearestPoint> best;
  for (size_t mask = 1; mask < (size_t(1) << nv); ++mask) {
    std::vector<int> face;
    for (size_t b = 0; b < nv; ++b)
      if (mask & (size_t(1) << b)) face.push_back(s.verts[b]);
    const RatVec& v0 = k.vertex(face[0]);
    size_t m = face.size() - 1;
    std::vector<RatVec> u(m);
    for (size_t i = 0; i < m; ++i) u[i] = rv_sub(k.vertex(face[i + 1]), v0);
    RatVec t(m, Rat(0));
    if (m > 0) {
      RatMat g = rm_zero(m, m);
      RatVec b = rv_zero(m);
      RatVec d = rv_sub(x, v0);
      for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < m; ++j) g[i][j] = rv_dot(u[i], u[j]);
        b[i] = rv_dot(u[i], d);
      }
      auto sol = rm_solve(g, b);
      STRATCHERN_CHECK(sol.has_value(), "degenerate simplex Gram matrix");
      t = *sol;
    }
    Rat tsum(0);
    bool valid = true;
    for (const auto& ti : t) {
      if (ti < 0) {
        valid = false;
        break;
      }
      tsum += ti;
    }
    if (!valid || tsum > 1) continue;
    RatVec p = v0;
    for (size_t i = 0; i < m; ++i) p = rv_add(p, rv_scale(t[i], u[i]));
    Rat d2 = rv_norm2(rv_sub(x, p));
    bool better = false;
    if (!best) {
      better = true;
    } else if (d2 != best->dist2) {
      better = d2 < best->dist2;
    } else if (face.size() != best->face.size()) {
      better = face.size() < best->face.size();
    } else {
      better = face < best->face;
    }
    if (better) best = NearestPoint{d2, std::move(p), std::move(face)};
  }
  STRATCHERN_CHECK(best.has_value(), "no valid face projection found");
  return *best;
}

struct SkeletonDistance {
  bool empty = true;  // target set has no simplices
  Rat dist2 = Rat(0);
  RatVec witness;
  int witness_simplex = -1;  // simplex whose open cell holds the witness
  int witness_stratum = -1;
  bool witness_smooth = false;  // witness face has its stratum's dimension
};

// Distance from x to the union of the listed closed simplices.
inline SkeletonDistance distance_to_set(const EmbeddedComplex& k,
                                        const std::vector<int>& ids,
                                        const RatVec& x) {
  SkeletonDistance out;
  std::optional<NearestPoint> best;
  for (int sid : ids) {
    NearestPoint np = nearest_on_simplex(k, sid, x);
    bool better = false;
    if (!best) {
      better = true;
    } else if (np.dist2 != best->dist2) {
      better = np.dist2 < best->dist2;
    } else if (np.face.size() != best->face.size()) {
      better = np.face.size() < best->face.size();
    } else {
      better = np.face < best->face;
    }
    if (better) best = std::move(np);
  }
  if (!best) return out;
  out.empty = false;
  out.dist2 = best->dist2;
  out.witness = best->point;
  out.witness_simplex = k.find_simplex(best->face);
  STRATCHERN_CHECK(out.witness_simplex >= 0,
                   "witness face missing from complex");
  const Simplex& ws = k.simplices[out.witness_simplex];
  out.witness_stratum = ws.stratum;
  const StratumInfo* st = stratum_info(k, ws.stratum);
  out.witness_smooth = st && ws.dim() == st->real_dim;
  return out;
}

// Maximal simplices among those whose stratum dimension is <= max_dim; the
// union of their closures is the skeleton of that dimension.
inline std::vector<int> skeleton_maximal(const EmbeddedComplex& k,
                                         int max_dim) {
  std::vector<int> out;
  auto in_set = [&](int sid) {
    const StratumInfo* st = stratum_info(k, k.simplices[sid].stratum);
    return st && st->real_dim <= max_dim;
  };
  for (size_t i = 0; i < k.simplices.size(); ++i) {
    if (!in_set(static_cast<int>(i))) continue;
    bool maximal = true;
    for (int c : k.cofaces(static_cast<int>(i)))
      if (in_set(c)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(static_cast<int>(i));
  }
  return out;
}

// Distance to the skeleton of strata of dimension <= j (empty when none).
inline SkeletonDistance distance_to_skeleton(const EmbeddedComplex& k,
                                             const RatVec& x, int j) {
  return distance_to_set(k, skeleton_maximal(k, j), x);
}

// ---------------------------------------------------------------------------
// Descent chains.

struct ChainPoint {
  RatVec point;
  int stratum = -1;
  int stratum_dim = 0;
  int simplex = -1;    // open simplex of the stratum containing the point
  Rat dist2 = Rat(0);  // squared distance from the chain start
};

// A chain starts at q in the open part of its stratum and descends through
// nearest-point witnesses on lower skeleta.  Each lower dimension j is
// admitted only when every still lower skeleton is at least 2 K^2 times
// farther away than the j-skeleton, so consecutive points separate cleanly.
struct DescentChain {
  bool ok = true;
  std::string error;
  Rat k_const = Rat(2);
  std::vector<ChainPoint> points;            // points[0] is the start
  std::map<int, SkeletonDistance> skeleton;  // by present dimension < start
};

inline DescentChain build_chain(const EmbeddedComplex& k,
                                const StratConfig& cfg, const RatVec& q,
                                int start_stratum) {
  DescentChain chain;
  chain.k_const = cfg.k_chain;
  const StratumInfo* st = stratum_info(k, start_stratum);
  STRATCHERN_CHECK(st != nullptr, "chain start in unknown stratum");
  int j1 = st->real_dim;
  TangentProjector start_proj = tangent_projection(k, q);
  if (start_proj.stratum != start_stratum) {
    chain.ok = false;
    chain.error = "start point lies in stratum " +
                  std::to_string(start_proj.stratum) + ", not " +
                  std::to_string(start_stratum);
    return chain;
  }
  chain.points.push_back({q, start_stratum, j1, start_proj.simplex, Rat(0)});

  std::vector<int> dims = present_stratum_dims(k);
  std::vector<int> lower;
  for (int d : dims)
    if (d < j1) lower.push_back(d);
  for (int d : lower) chain.skeleton[d] = distance_to_skeleton(k, q, d);

  Rat k2 = cfg.k_chain * cfg.k_chain;
  Rat factor = Rat(4) * k2 * k2;  // (2 K^2)^2 for squared comparisons
  int cur = j1;
  while (true) {
    int chosen = -1;
    for (auto it = lower.rbegin(); it != lower.rend(); ++it) {
      int j = *it;
      if (j >= cur) continue;
      const SkeletonDistance& dj = chain.skeleton.at(j);
      if (dj.empty) continue;
      if (dj.dist2 == 0) {
        chain.ok = false;
        chain.error = "start point touches a lower skeleton";
        return chain;
      }
      bool admissible = true;
      for (int jp : lower) {
        if (jp >= j) continue;
        const SkeletonDistance& djp = chain.skeleton.at(jp);
        if (djp.empty) continue;
        if (!(djp.dist2 >= factor * dj.dist2)) {
          admissible = false;
          break;
        }
      }
      if (admissible) {
        chosen = j;
        break;
      }
    }
    if (chosen < 0) break;
    const SkeletonDistance& dj = chain.skeleton.at(chosen);
    const StratumInfo* wst = stratum_info(k, dj.witness_stratum);
    if (!dj.witness_smooth || !wst || wst->real_dim != chosen) {
      chain.ok = false;
      chain.error = "chain witness at dimension " + std::to_string(chosen) +
                    " lies on a crease or lower-dimensional face";
      return chain;
    }
    chain.points.push_back({dj.witness, dj.witness_stratum, chosen,
                            dj.witness_simplex, dj.dist2});
    cur = chosen;
  }

  // Replay the chain inequalities: each witness realizes the skeleton
  // distance exactly, so |q - q_t| <= K d(q, skeleton) holds with K > 1.
  for (size_t t = 1; t < chain.points.size(); ++t) {
    Rat gap2 = rv_norm2(rv_sub(chain.points[t].point, chain.points[0].point));
    STRATCHERN_CHECK(gap2 == chain.points[t].dist2,
                     "chain witness does not realize its distance");
    STRATCHERN_CHECK(gap2 <= k2 * chain.points[t].dist2,
                     "chain separation inequality failed");
  }
  return chain;
}

// ---------------------------------------------------------------------------
// Sampled audits.

struct AuditWitness {
  std::string kind;
  double value = 0.0;
  std::vector<double> x, y;
  int stratum_x = -1, stratum_y = -1;
};

struct StratAudit {
  std::string mode;
  int samples_requested = 0;
  int samples_used = 0;
  uint64_t seed = 0;
  double c_est = 0.0;  // largest Lipschitz-type ratio seen
  double g_est = 0.0;  // largest angle-per-distance ratio seen
  double min_lower_gap = std::numeric_limits<double>::infinity();
  long long implication_checked = 0;
  long long implication_failures = 0;
  std::vector<double> scale_deltas;  // shrink factors, decreasing
  std::vector<double> scale_values;  // per-scale maxima of the metric
  bool pass = true;
  std::string note;
  std::vector<AuditWitness> witnesses;
};

namespace detail {

inline RatVec sample_in_open_simplex(const EmbeddedComplex& k, int sid,
                                     Substream& rng) {
  const Simplex& s = k.simplices[sid];
  RatVec w = rng.barycentric(s.verts.size());
  RatVec p = rv_zero(k.ambient_dim);
  for (size_t i = 0; i < s.verts.size(); ++i)
    p = rv_add(p, rv_scale(w[i], k.vertex(s.verts[i])));
  return p;
}

inline std::vector<double> to_doubles(const RatVec& v) {
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

// Top-dimensional simplices of every stratum of dimension >= min_dim.
inline std::vector<int> smooth_top_simplices(const EmbeddedComplex& k,
                                             int min_dim) {
  std::vector<int> out;
  for (size_t i = 0; i < k.simplices.size(); ++i) {
    const StratumInfo* st = stratum_info(k, k.simplices[i].stratum);
    if (st && st->real_dim >= min_dim && k.simplices[i].dim() == st->real_dim)
      out.push_back(static_cast<int>(i));
  }
  return out;
}

// Greatest present dimension strictly below j, or nullopt.
inline std::optional<int> dim_below(const std::vector<int>& present, int j) {
  std::optional<int> best;
  for (int d : present)
    if (d < j && (!best || d > *best)) best = d;
  return best;
}

// A top simplex of the same stratum sharing a facet with sid, if any.
inline int stratum_neighbor(const EmbeddedComplex& k, int sid) {
  const Simplex& s = k.simplices[sid];
  for (size_t drop = 0; drop < s.verts.size(); ++drop) {
    std::vector<int> f;
    for (size_t i = 0; i < s.verts.size(); ++i)
      if (i != drop) f.push_back(s.verts[i]);
    int fid = k.find_simplex(f);
    if (fid < 0) continue;
    for (int c : k.cofaces(fid))
      if (c != sid && k.simplices[c].stratum == s.stratum &&
          k.simplices[c].dim() == s.dim())
        return c;
  }
  return -1;
}

// Largest pairwise vertex distance; scales the audit annuli.
inline double complex_diameter(const EmbeddedComplex& k) {
  double best = 0;
  for (size_t i = 0; i < k.vertices.size(); ++i)
    for (size_t j = i + 1; j < k.vertices.size(); ++j)
      best = std::max(
          best, to_double(rv_norm2(rv_sub(k.vertices[i], k.vertices[j]))));
  return std::sqrt(best);
}

struct RatioHit {
  double ratio = -1.0;
  AuditWitness witness;
};

inline void take_max(RatioHit& best, double ratio, const AuditWitness& w) {
  if (ratio > best.ratio) {
    best.ratio = ratio;
    best.witness = w;
  }
}

// Squared distance from q to the skeleton strictly below dimension j, read
// from a chain's precomputed table.  Empty when no stratum lies below j.
inline std::optional<Rat> chain_gap_below(const DescentChain& chain,
                                          const std::vector<int>& present,
                                          int j) {
  auto below = dim_below(present, j);
  if (!below) return std::nullopt;
  const SkeletonDistance& d = chain.skeleton.at(*below);
  if (d.empty) return std::nullopt;
  return d.dist2;
}

}  // namespace detail

// Lipschitz audit: estimates the smallest constant C for which the chainwise
// projector products and same-stratum projector differences stay below
// C |q - q'| / d(q, lower skeleton) at the sampled points.
inline StratAudit audit_lipschitz(const EmbeddedComplex& k,
                                  const StratConfig& cfg) {
  check_config(cfg);
  StratAudit audit;
  audit.mode = "lipschitz";
  audit.samples_requested = cfg.samples;
  audit.seed = cfg.seed;
  std::vector<int> present = present_stratum_dims(k);
  std::vector<int> starts = detail::smooth_top_simplices(k, 1);
  if (starts.empty()) {
    audit.note = "no positive-dimensional strata; nothing to audit";
    return audit;
  }
  if (present.size() <= 1)
    audit.note = "single stratum dimension; conditions hold vacuously";

  struct Slot {
    bool used = false;
    bool degenerate = false;
    std::string error;
    detail::RatioHit best;
    double lower_gap = std::numeric_limits<double>::infinity();
  };
  std::vector<Slot> slots(cfg.samples);
  Rat radius_factor =
      Rat(1) / (Rat(4) * cfg.k_chain * cfg.k_chain);  // (1 / 2K)^2

  parallel_for(static_cast<size_t>(cfg.samples), [&](size_t i) {
    Substream rng(cfg.seed, "lipschitz", i);
    Slot& slot = slots[i];
    for (int attempt = 0; attempt < 8 && !slot.used; ++attempt) {
      int sid = starts[rng.below(starts.size())];
      int stratum = k.simplices[sid].stratum;
      RatVec q = detail::sample_in_open_simplex(k, sid, rng);
      DescentChain chain;
      try {
        chain = build_chain(k, cfg, q, stratum);
      } catch (const StratError&) {
        continue;
      }
      if (!chain.ok) continue;
      slot.used = true;

      if (auto own =
              detail::chain_gap_below(chain, present, chain.points[0].stratum_dim))
        slot.lower_gap = std::min(slot.lower_gap, std::sqrt(to_double(*own)));

      // Chainwise products: Pperp at the start times the projectors along
      // the chain, cut at every length, against the gap below the cut.
      if (chain.points.size() >= 2) {
        double step = std::sqrt(to_double(chain.points[1].dist2));
        RatMat prod = projector_for_simplex(k, chain.points[0].simplex).P_perp;
        for (size_t t = 1; t < chain.points.size(); ++t) {
          prod = rm_mul(prod,
                        projector_for_simplex(k, chain.points[t].simplex).P);
          auto denom2 = detail::chain_gap_below(chain, present,
                                                chain.points[t].stratum_dim);
          if (!denom2 || step == 0) continue;
          double ratio = spectral_norm(prod).value *
                         std::sqrt(to_double(*denom2)) / step;
          detail::take_max(
              slot.best, ratio,
              AuditWitness{"chain-product", ratio, detail::to_doubles(q),
                           detail::to_doubles(chain.points[t].point),
                           chain.points[0].stratum, chain.points[t].stratum});
        }
      }

      // Same-stratum pair within the admissible radius
      // rho = (1 / 2K) d(q, lower skeleton).  The partner is sampled
      // globally at a separation anchored to rho (not to the mesh size), so
      // the estimate is stable under subdivision; mesh-local neighbours are
      // only a fallback when the mesh is coarser than rho.
      auto dl2 = detail::chain_gap_below(chain, present,
                                         chain.points[0].stratum_dim);
      if (!dl2) continue;  // no lower skeleton: ratios have no denominator
      Rat rho2 = radius_factor * *dl2;
      // Candidate partner simplices that can reach the band [rho/2, rho],
      // ordered with the mid-band ones first.  A probe below the band is
      // kept as a fallback for meshes too coarse to reach it.
      double rho = std::sqrt(to_double(rho2));
      std::vector<std::pair<double, int>> cands;
      for (int sp : starts) {
        if (sp == sid || k.simplices[sp].stratum != stratum) continue;
        double dmin =
            std::sqrt(to_double(nearest_on_simplex(k, sp, q).dist2));
        if (dmin > rho) continue;
        cands.emplace_back(std::abs(dmin - 0.75 * rho), sp);
      }
      std::sort(cands.begin(), cands.end());
      int partner = -1;
      RatVec qb;
      Rat gap2(0);
      int fallback = -1;
      RatVec fallback_qb;
      Rat fallback_gap2(0);
      for (const auto& [key, cand] : cands) {
        (void)key;
        for (int draw = 0; draw < 4 && partner < 0; ++draw) {
          RatVec qc = detail::sample_in_open_simplex(k, cand, rng);
          Rat g2 = rv_norm2(rv_sub(qc, q));
          if (g2 == 0 || g2 > rho2) continue;
          if (Rat(4) * g2 >= rho2) {
            partner = cand;
            qb = qc;
            gap2 = g2;
          } else if (g2 > fallback_gap2) {
            fallback = cand;
            fallback_qb = qc;
            fallback_gap2 = g2;
          }
        }
        if (partner >= 0) break;
      }
      if (partner < 0 && fallback >= 0) {
        partner = fallback;
        qb = fallback_qb;
        gap2 = fallback_gap2;
      }
      if (partner < 0) continue;
      double gap = std::sqrt(to_double(gap2));
      RatMat diff = rm_sub(projector_for_simplex(k, partner).P,
                           projector_for_simplex(k, sid).P);
      RatMat prod = diff;
      for (size_t t = 0; t < chain.points.size(); ++t) {
        if (t > 0)
          prod = rm_mul(prod,
                        projector_for_simplex(k, chain.points[t].simplex).P);
        auto denom2 = (t == 0) ? dl2
                               : detail::chain_gap_below(
                                     chain, present,
                                     chain.points[t].stratum_dim);
        if (!denom2) continue;
        double ratio =
            spectral_norm(prod).value * std::sqrt(to_double(*denom2)) / gap;
        detail::take_max(
            slot.best, ratio,
            AuditWitness{"projector-difference", ratio, detail::to_doubles(q),
                         detail::to_doubles(qb), stratum, stratum});
      }
    }
    if (!slot.used) {
      slot.degenerate = true;
      slot.error = "chain construction kept hitting crease witnesses";
    }
  });

  detail::RatioHit best;
  for (const auto& slot : slots) {
    if (slot.degenerate)
      throw StratError("sampling-degenerate",
                       "sampling degenerate: " + slot.error);
    ++audit.samples_used;
    audit.min_lower_gap = std::min(audit.min_lower_gap, slot.lower_gap);
    if (slot.best.ratio > best.ratio) best = slot.best;
  }
  if (best.ratio > 0) {
    audit.c_est = best.ratio;
    audit.witnesses.push_back(best.witness);
  }
  return audit;
}

// Kuo-Verdier audit: angle between the tangent plane of an upper stratum and
// the tangent plane at the nearest lower-stratum point, per unit distance.
// When a Lipschitz audit is supplied, the implied bound
//   sin(angle) <= C |x - y| / d(x, lower skeleton)
// is replayed sample by sample with the joint constant.
inline StratAudit audit_kuo_verdier(const EmbeddedComplex& k,
                                    const StratConfig& cfg,
                                    const StratAudit* lipschitz = nullptr) {
  check_config(cfg);
  StratAudit audit;
  audit.mode = "kuo-verdier";
  audit.samples_requested = cfg.samples;
  audit.seed = cfg.seed;
  std::vector<int> present = present_stratum_dims(k);

  // Adjacent stratum pairs (upper, lower) with their sampling pools.
  struct Pair {
    int hi = -1, lo = -1;
    std::vector<int> lo_maximal;  // maximal simplices of the lower closure
    std::vector<int> approach;    // hi top simplices touching that closure
    std::vector<int> hi_top;
  };
  std::vector<Pair> pairs;
  for (const auto& lo : k.strata)
    for (int hi : lo.in_closure_of) {
      Pair p;
      p.hi = hi;
      p.lo = lo.id;
      std::set<int> closure = closure_strata(k, lo.id);
      for (size_t i = 0; i < k.simplices.size(); ++i) {
        if (!closure.count(k.simplices[i].stratum)) continue;
        bool maximal = true;
        for (int c : k.cofaces(static_cast<int>(i)))
          if (closure.count(k.simplices[c].stratum)) {
            maximal = false;
            break;
          }
        if (maximal) p.lo_maximal.push_back(static_cast<int>(i));
      }
      const StratumInfo* hi_info = stratum_info(k, hi);
      if (!hi_info) continue;
      for (size_t i = 0; i < k.simplices.size(); ++i) {
        const Simplex& s = k.simplices[i];
        if (s.stratum != hi || s.dim() != hi_info->real_dim) continue;
        p.hi_top.push_back(static_cast<int>(i));
        size_t nv = s.verts.size();
        bool touches = false;
        for (size_t mask = 1; mask + 1 < (size_t(1) << nv) && !touches;
             ++mask) {
          std::vector<int> face;
          for (size_t b = 0; b < nv; ++b)
            if (mask & (size_t(1) << b)) face.push_back(s.verts[b]);
          int fsid = k.find_simplex(face);
          touches = fsid >= 0 && closure.count(k.simplices[fsid].stratum);
        }
        if (touches) p.approach.push_back(static_cast<int>(i));
      }
      if (!p.hi_top.empty() && !p.lo_maximal.empty()) pairs.push_back(p);
    }
  if (pairs.empty()) {
    audit.note = "no adjacent stratum pairs; nothing to audit";
    return audit;
  }

  struct Sample {
    bool used = false;
    double sin_theta = 0, gap = 0, lower_gap = 0, ratio = 0, lip_ratio = 0;
    AuditWitness witness;
  };
  std::vector<Sample> out(cfg.samples);

  parallel_for(static_cast<size_t>(cfg.samples), [&](size_t i) {
    Substream rng(cfg.seed, "kuo-verdier", i);
    const Pair& pr = pairs[i % pairs.size()];
    Sample& smp = out[i];
    // Even samples hug the lower closure (small gaps); odd samples stay
    // where they land, reaching simplices away from the closure.
    bool pull = (i % 2 == 0) && !pr.approach.empty();
    for (int attempt = 0; attempt < 8 && !smp.used; ++attempt) {
      const std::vector<int>& pool = pull ? pr.approach : pr.hi_top;
      int sid = pool[rng.below(pool.size())];
      RatVec x = detail::sample_in_open_simplex(k, sid, rng);
      if (pull) {
        // Pull toward the lower closure at a shrink factor cycling with i;
        // membership in the open upper stratum is re-checked afterwards.
        SkeletonDistance toward = distance_to_set(k, pr.lo_maximal, x);
        if (toward.empty) break;
        Rat t = Rat(1, 1 << (1 + static_cast<int>(i % 3)));
        x = rv_add(rv_scale(Rat(1) - t, toward.witness), rv_scale(t, x));
      }
      TangentProjector px;
      try {
        px = tangent_projection(k, x);
      } catch (const StratError&) {
        continue;
      }
      if (px.stratum != pr.hi) continue;
      SkeletonDistance near = distance_to_set(k, pr.lo_maximal, x);
      if (near.empty || near.dist2 == 0) continue;
      if (near.witness_stratum != pr.lo || !near.witness_smooth) continue;
      TangentProjector py = projector_for_simplex(k, near.witness_simplex);
      double sin_theta = spectral_norm(rm_mul(px.P_perp, py.P)).value;
      double gap = std::sqrt(to_double(near.dist2));
      const StratumInfo* hi_info = stratum_info(k, pr.hi);
      auto below = detail::dim_below(present, hi_info->real_dim);
      if (!below) continue;
      SkeletonDistance lower = distance_to_skeleton(k, x, *below);
      if (lower.empty || lower.dist2 == 0) continue;
      smp.used = true;
      smp.sin_theta = sin_theta;
      smp.gap = gap;
      smp.lower_gap = std::sqrt(to_double(lower.dist2));
      smp.ratio = gap > 0 ? sin_theta / gap : 0;
      smp.lip_ratio = gap > 0 ? sin_theta * smp.lower_gap / gap : 0;
      smp.witness =
          AuditWitness{"angle-distance", smp.ratio, detail::to_doubles(x),
                       detail::to_doubles(near.witness), pr.hi, pr.lo};
    }
  });

  double c_joint = lipschitz ? lipschitz->c_est : 0.0;
  for (const auto& s : out)
    if (s.used) c_joint = std::max(c_joint, s.lip_ratio);
  AuditWitness worst;
  double worst_ratio = -1;
  for (const auto& s : out) {
    if (!s.used) continue;
    ++audit.samples_used;
    audit.g_est = std::max(audit.g_est, s.ratio);
    audit.min_lower_gap = std::min(audit.min_lower_gap, s.lower_gap);
    if (s.ratio > worst_ratio) {
      worst_ratio = s.ratio;
      worst = s.witness;
    }
    ++audit.implication_checked;
    double bound = c_joint * s.gap / s.lower_gap;
    if (s.sin_theta > bound * (1 + 1e-9) + 1e-15)
      ++audit.implication_failures;
  }
  audit.c_est = c_joint;
  if (worst_ratio >= 0) audit.witnesses.push_back(worst);
  audit.pass = audit.implication_failures == 0;
  if (audit.samples_used == 0)
    audit.note = "all stratum pairs degenerate under sampling";
  return audit;
}

// Whitney trend audit.  For each adjacent pair, a base point y in the open
// lower stratum and upper-stratum points x binned into annuli at three
// decreasing distance scales; the per-scale maxima of the chosen metric must
// not increase as the scale shrinks.
//   variant 'a': || Pperp_x P_y ||   (tangent-plane alignment)
//   variant 'b': || Pperp_x u ||, u the unit secant from y to x.
inline StratAudit audit_whitney(const EmbeddedComplex& k,
                                const StratConfig& cfg, char variant) {
  check_config(cfg);
  STRATCHERN_CHECK(variant == 'a' || variant == 'b',
                   "whitney variant must be 'a' or 'b'");
  StratAudit audit;
  audit.mode = variant == 'a' ? "whitney-a" : "whitney-b";
  audit.samples_requested = cfg.samples;
  audit.seed = cfg.seed;

  // (upper top simplex, open lower face) incidences.
  struct Arrow {
    int hi_simplex = -1, lo_face = -1, hi = -1, lo = -1;
  };
  std::vector<Arrow> arrows;
  for (const auto& lo : k.strata)
    for (int hi : lo.in_closure_of) {
      const StratumInfo* hi_info = stratum_info(k, hi);
      if (!hi_info) continue;
      for (size_t i = 0; i < k.simplices.size(); ++i) {
        const Simplex& s = k.simplices[i];
        if (s.stratum != hi || s.dim() != hi_info->real_dim) continue;
        size_t nv = s.verts.size();
        for (size_t mask = 1; mask + 1 < (size_t(1) << nv); ++mask) {
          std::vector<int> face;
          for (size_t b = 0; b < nv; ++b)
            if (mask & (size_t(1) << b)) face.push_back(s.verts[b]);
          int fid = k.find_simplex(face);
          if (fid < 0) continue;
          const Simplex& f = k.simplices[fid];
          if (f.stratum != lo.id || f.dim() != lo.real_dim) continue;
          arrows.push_back({static_cast<int>(i), fid, hi, lo.id});
        }
      }
    }
  if (arrows.empty()) {
    audit.note = "no adjacent stratum pairs; nothing to audit";
    return audit;
  }

  const std::vector<double> scales = {0.5, 0.125, 0.03125};
  audit.scale_deltas = scales;
  audit.scale_values.assign(scales.size(), 0.0);
  double diam = detail::complex_diameter(k);

  struct Bins {
    bool used = false;
    std::vector<double> maxima = std::vector<double>(3, -1.0);
  };
  std::vector<Bins> bins(cfg.samples);

  parallel_for(static_cast<size_t>(cfg.samples), [&](size_t i) {
    Substream rng(cfg.seed, audit.mode, i);
    const Arrow& ar = arrows[i % arrows.size()];
    RatVec y = detail::sample_in_open_simplex(k, ar.lo_face, rng);
    TangentProjector py = projector_for_simplex(k, ar.lo_face);
    // Hi-stratum pool: all top simplices of the same upper stratum (the
    // incident one reaches the smallest annuli, far ones the largest).
    std::vector<int> pool;
    const StratumInfo* hi_info = stratum_info(k, ar.hi);
    for (size_t s = 0; s < k.simplices.size(); ++s)
      if (k.simplices[s].stratum == ar.hi &&
          k.simplices[s].dim() == hi_info->real_dim)
        pool.push_back(static_cast<int>(s));
    for (int draw = 0; draw < 24; ++draw) {
      int sid = pool[rng.below(pool.size())];
      RatVec x;
      if (draw % 2 == 0 && k.is_face_of(ar.lo_face, sid)) {
        // Walk from y into the incident simplex to reach small distances.
        Rat t(1, 1 << (1 + draw % 12));
        x = rv_add(rv_scale(Rat(1) - t, y),
                   rv_scale(t, k.barycenter(sid)));
      } else {
        x = detail::sample_in_open_simplex(k, sid, rng);
      }
      double gap = std::sqrt(to_double(rv_norm2(rv_sub(x, y))));
      if (gap == 0 || diam == 0) continue;
      int bin = -1;
      for (size_t si = 0; si < scales.size(); ++si)
        if (gap <= scales[si] * diam &&
            (si + 1 == scales.size() || gap > scales[si + 1] * diam)) {
          bin = static_cast<int>(si);
          break;
        }
      if (bin < 0) continue;
      TangentProjector px = projector_for_simplex(k, sid);
      double metric = 0;
      if (variant == 'a') {
        metric = spectral_norm(rm_mul(px.P_perp, py.P)).value;
      } else {
        RatVec d = rv_sub(x, y);
        RatVec pd = rm_apply(px.P_perp, d);
        metric = std::sqrt(to_double(rv_norm2(pd)) / to_double(rv_norm2(d)));
      }
      bins[i].used = true;
      bins[i].maxima[bin] = std::max(bins[i].maxima[bin], metric);
    }
  });

  std::vector<bool> seen(scales.size(), false);
  for (const auto& b : bins) {
    if (!b.used) continue;
    ++audit.samples_used;
    for (size_t si = 0; si < scales.size(); ++si)
      if (b.maxima[si] >= 0) {
        seen[si] = true;
        audit.scale_values[si] =
            std::max(audit.scale_values[si], b.maxima[si]);
      }
  }
  for (size_t si = 0; si + 1 < audit.scale_values.size(); ++si) {
    if (!seen[si] || !seen[si + 1]) continue;
    if (audit.scale_values[si + 1] > audit.scale_values[si] + 1e-9) {
      audit.pass = false;
      std::ostringstream os;
      os << "metric grows as the scale shrinks: " << audit.scale_values[si]
         << " -> " << audit.scale_values[si + 1];
      audit.note = os.str();
    }
  }
  return audit;
}

}  // namespace stratchern

// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit on any
// failure.  Each criterion is self-contained and reports a short measurement
// summary so a red line carries its own diagnosis.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stratchern/corpus.hpp"
#include "stratchern/obstruction.hpp"
#include "stratchern/pipeline.hpp"

using namespace stratchern;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Gate {
  int failed = 0;

  // fn returns a detail string and throws or calls fail() on violation
  void criterion(const std::string& name,
                 const std::function<std::string(bool&)>& fn) {
    bool ok = true;
    std::string detail;
    try {
      detail = fn(ok);
    } catch (const StratError& e) {
      ok = false;
      detail = std::string("StratError ") + e.code() + ": " + e.what();
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s — %s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    if (!ok) ++failed;
  }
};

EmbeddedComplex example(const std::string& name) {
  for (const auto& nc : corpus::all())
    if (nc.name == name) return nc.complex;
  throw std::runtime_error("unknown example " + name);
}

// The nine examples whose region is a pseudomanifold, with the frame rank
// each supports.
std::vector<std::pair<std::string, int>> dualizable_runs() {
  return {{"octahedron", 1},  {"flat_torus", 1},    {"disk_hexagon", 1},
          {"point_in_disk", 1}, {"pinched_torus", 1}, {"nodal_disks", 1},
          {"cone_circle", 1}, {"cross_disk", 1},    {"flat_c2", 2}};
}

struct RunData {
  EmbeddedComplex k;
  DualDecomposition dd;
  RField rf;
  ObstructionCocycle coc;
  CocycleCheck chk;
  ClassReport rep;
};

RunData full_run(const EmbeddedComplex& k0, int r, const StratConfig& cfg) {
  RunData d;
  d.k = k0;
  d.dd = build_dual(d.k);
  if (!d.dd.ok) throw std::runtime_error("dualize failed: " + d.dd.error);
  d.rf = radial_frame(d.k, d.dd, cfg, r);
  d.coc = assemble_cocycle(d.k, d.dd, d.rf, cfg.seed);
  d.chk = verify_cocycle(d.k, d.dd, d.coc);
  d.rep = dual_homology_cycle(d.k, d.dd, d.coc);
  return d;
}

// --- circle-map helpers for the degree criterion ---------------------------

SphereMap circle_map(const std::vector<RatVec>& values) {
  SphereMap sm;
  sm.q = 2;
  int n = static_cast<int>(values.size());
  for (int i = 0; i < n; ++i) {
    sm.simplices.push_back({i, (i + 1) % n});
    sm.signs.push_back(1);
    sm.values[i] = values[i];
  }
  return sm;
}

long winding_oracle(const std::vector<RatVec>& values) {
  double acc = 0;
  int n = static_cast<int>(values.size());
  for (int i = 0; i < n; ++i) {
    const RatVec& a = values[i];
    const RatVec& b = values[(i + 1) % n];
    double da = std::atan2(to_double(b[1]), to_double(b[0])) -
                std::atan2(to_double(a[1]), to_double(a[0]));
    while (da > M_PI) da -= 2 * M_PI;
    while (da < -M_PI) da += 2 * M_PI;
    acc += da;
  }
  return std::lround(acc / (2 * M_PI));
}

// z^k sampled on an integer-direction polygon via Gaussian-integer powers:
// (a + ib)^k realizes the k-fold angle exactly.
std::vector<RatVec> monomial_values(const std::vector<std::pair<Int, Int>>& dirs,
                                    int k) {
  std::vector<RatVec> out;
  for (const auto& [a, b] : dirs) {
    Int re(1), im(0);
    for (int i = 0; i < k; ++i) {
      Int re2 = re * a - im * b;
      Int im2 = re * b + im * a;
      re = re2;
      im = im2;
    }
    out.push_back(RatVec{Rat(re), Rat(im)});
  }
  return out;
}

std::vector<std::pair<Int, Int>> octagon_dirs() {
  return {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
}

std::vector<std::pair<Int, Int>> hexadecagon_dirs() {
  return {{1, 0},  {2, 1},  {1, 1},  {1, 2},  {0, 1},  {-1, 2}, {-1, 1},
          {-2, 1}, {-1, 0}, {-2, -1}, {-1, -1}, {-1, -2}, {0, -1}, {1, -2},
          {1, -1}, {2, -1}};
}

// Oriented boundary of the 4-dimensional cross-polytope: a 3-sphere with 16
// tetrahedra, one per sign pattern, oriented by the pattern's parity.
SphereMap three_sphere_map(const std::map<int, RatVec>& values) {
  SphereMap sm;
  sm.q = 4;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<int> tet;
    int sign = 1;
    for (int axis = 0; axis < 4; ++axis) {
      bool neg = (mask >> axis) & 1;
      tet.push_back(2 * axis + (neg ? 1 : 0));  // vertex ids: +e_a, -e_a
      if (neg) sign = -sign;
    }
    sm.simplices.push_back(tet);
    sm.signs.push_back(sign);
  }
  sm.values = values;
  return sm;
}

}  // namespace

int main() {
  Clock::time_point suite_start = Clock::now();
  Gate gate;
  StratConfig cfg;  // library defaults throughout

  gate.criterion("poincare-hopf totals equal the euler characteristic",
                 [&](bool& ok) {
    std::ostringstream os;
    double worst = 0;
    for (const std::string name : {"octahedron", "flat_torus", "disk_hexagon",
                                   "pinched_torus", "nodal_disks"}) {
      Clock::time_point t0 = Clock::now();
      EmbeddedComplex k = example(name);
      RunData d = full_run(k, 1, cfg);
      double dt = seconds_since(t0);
      worst = std::max(worst, dt);
      long long chi = euler_characteristic(k);
      PoincareHopfReport ph = poincare_hopf_check(d.coc, k);
      if (!ph.match || ph.chi != chi || dt >= 10.0) ok = false;
      os << name << "=" << d.coc.total << "/" << chi << " ";
    }
    os << "(slowest " << worst << " s, bound 10 s)";
    return os.str();
  });

  gate.criterion("homotopy table matches the cited groups for r <= m <= 6",
                 [&](bool& ok) {
    int checks = 0;
    for (int m = 1; m <= 6; ++m)
      for (int r = 1; r <= m; ++r) {
        int edge = 2 * m - 2 * r + 2;
        for (int k = 1; k < edge; ++k, ++checks)
          if (homotopy_table(k, r, m) != HomotopyGroup::Zero) ok = false;
        if (homotopy_table(edge, r, m) != HomotopyGroup::Integers) ok = false;
        ++checks;
        for (int k : {edge + 1, edge + 3}) {
          try {
            homotopy_table(k, r, m);
            ok = false;
          } catch (const StratError& e) {
            if (e.code() != "outside-cited-table") ok = false;
          }
          ++checks;
        }
      }
    std::ostringstream os;
    os << checks << " table entries verified exhaustively";
    return os.str();
  });

  gate.criterion("dual cells: dimension formula, ball structure, transversality",
                 [&](bool& ok) {
    size_t cells = 0;
    long long pairs = 0;
    for (const auto& nc : corpus::all()) {
      if (nc.name == "whitney_umbrella") {
        DualDecomposition dd = build_dual(nc.complex);
        if (dd.ok || dd.error.find("pseudomanifold") == std::string::npos)
          ok = false;  // must be rejected with the structural reason
        continue;
      }
      DualDecomposition dd = build_dual(nc.complex);
      if (!dd.ok) {
        ok = false;
        continue;
      }
      for (size_t s = 0; s < dd.cells.size(); ++s, ++cells)
        if (dd.cells[s].dim !=
            dd.region_dim - nc.complex.simplices[s].dim())
          ok = false;
      for (const CellBallReport& r : all_ball_checks(nc.complex, dd))
        if (!r.pass) ok = false;
      TransversalityReport tr = check_transversality(nc.complex, dd);
      if (!tr.ok) ok = false;
      for (const TransversalityRecord& rec : tr.records) {
        ++pairs;
        if (!rec.pass) ok = false;
      }
    }
    std::ostringstream os;
    os << cells << " cells pass the ball surrogate, " << pairs
       << " (cell, stratum) pairs transversal, umbrella rejected as "
          "non-pseudomanifold";
    return os.str();
  });

  gate.criterion("assembled cocycles are closed; mutation is rejected",
                 [&](bool& ok) {
    int runs = 0;
    for (const auto& [name, r] : dualizable_runs()) {
      RunData d = full_run(example(name), r, cfg);
      if (!d.chk.closed) ok = false;
      ++runs;
    }
    // mutate where lower-dimensional dual sources exist (rank 2 run)
    RunData d = full_run(example("flat_c2"), 2, cfg);
    ObstructionCocycle bad = d.coc;
    bad.gamma.begin()->second += 1;
    CocycleCheck chk = verify_cocycle(d.k, d.dd, bad);
    if (chk.closed || chk.witness_cell < 0) ok = false;
    std::ostringstream os;
    os << runs << " runs closed exactly; mutated two-frame cocycle rejected "
       << "with witness cell " << chk.witness_cell;
    return os.str();
  });

  gate.criterion("stratum-restricted indices equal ambient indices",
                 [&](bool& ok) {
    long long compared = 0, base_cases = 0;
    auto scan = [&](const RunData& d) {
      for (const IndexRecord& rec : d.coc.records) {
        if (rec.method == "stratum-restricted") {
          ++base_cases;
          if (rec.index != 1) ok = false;
          if (!rec.restricted || *rec.restricted != 1) ok = false;
        } else if (rec.restricted) {
          ++compared;
          if (*rec.restricted != rec.index) ok = false;
        }
      }
    };
    for (const auto& [name, r] : dualizable_runs())
      scan(full_run(example(name), r, cfg));
    scan(full_run(barycentric_subdivide(example("cross_disk")), 1, cfg));
    if (compared < 4 || base_cases < 1) ok = false;  // the refined cross curve
    std::ostringstream os;
    os << compared << " ambient/restricted agreements, " << base_cases
       << " base-case indices all +1";
    return os.str();
  });

  gate.criterion("degree agrees with the winding oracle and monomial models",
                 [&](bool& ok) {
    int matched = 0;
    for (uint64_t trial = 0; matched < 1000 && trial < 1600; ++trial) {
      Substream rng(91, "acceptance-winding", trial);
      int n = 4 + static_cast<int>(rng.below(9));
      std::vector<RatVec> values;
      for (int i = 0; i < n; ++i) values.push_back(rng.direction(2, 16));
      try {
        int deg = pl_degree(circle_map(values), 7, trial);
        if (deg != winding_oracle(values)) ok = false;
        ++matched;
      } catch (const StratError&) {
        // a consecutive pair crossed zero exactly: outside the oracle's domain
      }
    }
    if (matched < 1000) ok = false;
    for (int kpow = 1; kpow <= 3; ++kpow) {
      int on8 = pl_degree(circle_map(monomial_values(octagon_dirs(), kpow)));
      int on16 =
          pl_degree(circle_map(monomial_values(hexadecagon_dirs(), kpow)));
      if (on8 != kpow || on16 != kpow) ok = false;
    }
    int antipodal_pairs = 0;
    for (uint64_t trial = 0; antipodal_pairs < 100 && trial < 180; ++trial) {
      Substream rng(92, "acceptance-antipode", trial);
      std::vector<RatVec> values;
      for (int i = 0; i < 8; ++i) values.push_back(rng.direction(2, 16));
      try {
        int plus = pl_degree(circle_map(values), 7, trial);
        std::vector<RatVec> neg;
        for (const auto& v : values) neg.push_back(rv_scale(Rat(-1), v));
        if (pl_degree(circle_map(neg), 7, trial) != plus) ok = false;
        ++antipodal_pairs;
      } catch (const StratError&) {
      }
    }
    if (antipodal_pairs < 100) ok = false;
    int s3_pairs = 0;
    for (uint64_t trial = 0; s3_pairs < 5 && trial < 40; ++trial) {
      Substream rng(93, "acceptance-antipode-s3", trial);
      std::map<int, RatVec> values;
      for (int v = 0; v < 8; ++v) values[v] = rng.direction(4, 8);
      try {
        int plus = pl_degree(three_sphere_map(values), 7, trial);
        std::map<int, RatVec> neg;
        for (const auto& [v, val] : values) neg[v] = rv_scale(Rat(-1), val);
        if (pl_degree(three_sphere_map(neg), 7, trial) != plus) ok = false;
        ++s3_pairs;
      } catch (const StratError&) {
      }
    }
    if (s3_pairs < 5) ok = false;
    std::ostringstream os;
    os << matched << " random circle maps exact, z^1..z^3 stabilize on 8- and "
       << "16-gons, " << antipodal_pairs << " + " << s3_pairs
       << " antipodal pairs invariant (S^1, S^3)";
    return os.str();
  });

  gate.criterion("duality cycles close and carry weight chi at rank one",
                 [&](bool& ok) {
    int runs = 0;
    for (const auto& [name, r] : dualizable_runs()) {
      EmbeddedComplex k = example(name);
      RunData d = full_run(k, r, cfg);
      if (!d.rep.cycle_closed) ok = false;
      if (r == 1) {
        long long weight = 0;
        for (const auto& [s, c] : d.rep.cycle) weight += c;
        if (weight != euler_characteristic(k)) ok = false;
        if (d.rep.homology_betti != 1) ok = false;
      }
      ++runs;
    }
    std::ostringstream os;
    os << runs << " cycles boundary-free; eight H_0 weights equal chi";
    return os.str();
  });

  gate.criterion("class data invariant under refinement, seed, and chain "
                 "constant",
                 [&](bool& ok) {
    std::ostringstream os;
    for (const std::string name :
         {"octahedron", "pinched_torus", "cone_circle"}) {
      Clock::time_point t0 = Clock::now();
      InvarianceReport rep = subdivision_invariance_check(example(name), cfg, 1);
      double dt = seconds_since(t0);
      if (!rep.pass || dt >= 120.0) ok = false;
      os << name << (rep.pass ? " ok " : " FAILED ") << "(" << dt << " s) ";
    }
    os << "bound 120 s per example";
    return os.str();
  });

  gate.criterion("stratification audits: growth, implication, projectors",
                 [&](bool& ok) {
    std::ostringstream os;
    StratAudit base = audit_lipschitz(example("cone_circle"), cfg);
    StratAudit fine =
        audit_lipschitz(barycentric_subdivide(example("cone_circle")), cfg);
    double growth = base.c_est > 0 ? fine.c_est / base.c_est : -1;
    if (!(base.c_est > 0) || !(growth < 2.0)) ok = false;
    os << "cone growth " << growth << " < 2; ";
    long long joint = 0;
    for (const auto& nc : corpus::all()) {
      StratAudit lip = audit_lipschitz(nc.complex, cfg);
      StratAudit kv = audit_kuo_verdier(nc.complex, cfg, &lip);
      if (!kv.pass || kv.implication_failures != 0) ok = false;
      joint += kv.implication_checked;
    }
    if (joint <= 0) ok = false;
    os << joint << " joint samples imply kuo-verdier; ";
    auto all = corpus::all();
    int projector_checks = 0;
    for (uint64_t i = 0; projector_checks < 10000; ++i) {
      Substream rng(95, "acceptance-projectors", i);
      const EmbeddedComplex& k = all[rng.below(all.size())].complex;
      int sid = static_cast<int>(rng.below(k.simplices.size()));
      TangentProjector t = projector_for_simplex(k, sid);
      if (rm_mul(t.P, t.P) != t.P) ok = false;
      if (rm_transpose(t.P) != t.P) ok = false;
      Rat tr(0);
      for (int d = 0; d < k.ambient_dim; ++d) tr += t.P[d][d];
      if (tr != Rat(t.dim)) ok = false;
      ++projector_checks;
    }
    os << projector_checks << " projector triples exact";
    return os.str();
  });

  gate.criterion("outward sums: angle under one half, exact norm caps",
                 [&](bool& ok) {
    int sampled = 0, capped = 0, vacuous = 0;
    double worst = 0;
    for (const auto& nc : corpus::all()) {
      OutwardBundle b = build_outward(nc.complex, cfg);
      if (b.components.empty()) {
        ++vacuous;  // single stratum level: nothing to point outward from
        continue;
      }
      if (!(b.samples_checked > 0)) ok = false;
      worst = std::max(worst, b.worst.angle);
      if (!(b.worst.angle < 0.5)) ok = false;
      sampled += b.samples_checked;
      int kexp = effective_exponent(cfg);
      for (const OutwardComponent& comp : b.components) {
        if (!comp.data.norm_caps_exact) ok = false;
        for (const auto& [v, w] : comp.data.field.values) {
          auto it = comp.data.zone.find(v);
          if (it == comp.data.zone.end()) {
            if (!rv_is_zero(w)) ok = false;
            continue;
          }
          Rat n2 = rv_norm2(w);
          if (n2 > it->second.dj2) ok = false;
          if (!it->second.lower_empty &&
              n2 > detail::rat_pow(it->second.dlow2, kexp))
            ok = false;
          ++capped;
        }
      }
    }
    std::ostringstream os;
    os << sampled << " tube samples, worst angle " << worst << " < 0.5, "
       << capped << " carrier caps exact, " << vacuous
       << " single-level examples vacuous";
    return os.str();
  });

  double total = seconds_since(suite_start);
  std::printf("%s: %d criterion(s) failed, %.1f s total (target < 600 s)\n",
              gate.failed == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              gate.failed, total);
  if (total >= 600.0) {
    std::printf("[FAIL] runtime budget exceeded\n");
    return 1;
  }
  return gate.failed == 0 ? 0 : 1;
}

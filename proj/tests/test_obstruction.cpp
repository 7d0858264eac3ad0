// Obstruction cocycles: the homotopy table, PL degrees, local indices,
// closedness, duality classes, and invariance of the result.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stratchern/corpus.hpp"
#include "stratchern/obstruction.hpp"

using namespace stratchern;

namespace {

// Eight unit-lattice directions around the circle, 45 degrees apart.
const std::vector<RatVec>& octagon_dirs() {
  static std::vector<RatVec> d{{Rat(1), Rat(0)},  {Rat(1), Rat(1)},
                               {Rat(0), Rat(1)},  {Rat(-1), Rat(1)},
                               {Rat(-1), Rat(0)}, {Rat(-1), Rat(-1)},
                               {Rat(0), Rat(-1)}, {Rat(1), Rat(-1)}};
  return d;
}

// Counterclockwise octagon boundary as a sphere map with the given values.
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

// Independent winding-number oracle: accumulate angle deltas wrapped to
// (-pi, pi).  Valid whenever no consecutive pair is antipodal, which is
// exactly the configuration the hull precheck of pl_degree rejects.
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

}  // namespace

TEST_CASE("homotopy table of complex frame bundles") {
  // r = m = 1: frames on a line bundle; first interesting cell dim is 2.
  CHECK(homotopy_table(1, 1, 1) == HomotopyGroup::Zero);
  CHECK(homotopy_table(2, 1, 1) == HomotopyGroup::Integers);
  // below the critical dimension everything vanishes
  for (int k = 1; k < 6; ++k) CHECK(homotopy_table(k, 1, 3) == HomotopyGroup::Zero);
  CHECK(homotopy_table(6, 1, 3) == HomotopyGroup::Integers);
  CHECK(homotopy_table(2, 2, 2) == HomotopyGroup::Integers);
  CHECK(homotopy_table(4, 1, 2) == HomotopyGroup::Integers);
  CHECK_THROWS_AS(homotopy_table(3, 1, 1), StratError);
  CHECK_THROWS_AS(homotopy_table(5, 1, 2), StratError);
  try {
    homotopy_table(7, 1, 3);
    FAIL("expected outside-cited-table");
  } catch (const StratError& e) {
    CHECK(e.code() == "outside-cited-table");
  }
  try {
    homotopy_table(2, 3, 2);  // r > m
    FAIL("expected bad-config");
  } catch (const StratError& e) {
    CHECK(e.code() == "bad-config");
  }
  CHECK_THROWS_AS(homotopy_table(0, 1, 1), StratError);
  CHECK_THROWS_AS(homotopy_table(2, 0, 1), StratError);
}

TEST_CASE("PL degree on model circle maps") {
  const auto& d = octagon_dirs();
  std::vector<RatVec> ident(d.begin(), d.end());
  CHECK(pl_degree(circle_map(ident)) == 1);

  std::vector<RatVec> antipode;
  for (const auto& v : d) antipode.push_back(rv_scale(Rat(-1), v));
  CHECK(pl_degree(circle_map(antipode)) == 1);  // rotation by half a turn

  std::vector<RatVec> reflect;
  for (const auto& v : d) reflect.push_back(RatVec{v[0], -v[1]});
  CHECK(pl_degree(circle_map(reflect)) == -1);

  std::vector<RatVec> constant(8, RatVec{Rat(1), Rat(0)});
  CHECK(pl_degree(circle_map(constant)) == 0);

  std::vector<RatVec> doubled, tripled;
  for (int i = 0; i < 8; ++i) doubled.push_back(d[(2 * i) % 8]);
  for (int i = 0; i < 8; ++i) tripled.push_back(d[(3 * i) % 8]);
  CHECK(pl_degree(circle_map(doubled)) == 2);
  CHECK(pl_degree(circle_map(tripled)) == 3);

  // oracle agreement on the models
  CHECK(winding_oracle(ident) == 1);
  CHECK(winding_oracle(reflect) == -1);
  CHECK(winding_oracle(doubled) == 2);
  CHECK(winding_oracle(tripled) == 3);
}

TEST_CASE("PL degree matches the winding oracle on random circle maps") {
  int done = 0;
  for (uint64_t trial = 0; done < 200 && trial < 400; ++trial) {
    Substream rng(21, "winding-batch", trial);
    int n = 4 + static_cast<int>(rng.below(8));
    std::vector<RatVec> values;
    for (int i = 0; i < n; ++i) values.push_back(rng.direction(2, 8));
    try {
      int deg = pl_degree(circle_map(values), 1, trial);
      CHECK(deg == winding_oracle(values));
      ++done;
    } catch (const StratError&) {
      // an exactly-antipodal consecutive pair: the map misses no value class
    }
  }
  CHECK(done == 200);
}

TEST_CASE("PL degree rejects singular boundary data") {
  auto values = std::vector<RatVec>(octagon_dirs().begin(), octagon_dirs().end());
  values[3] = {Rat(0), Rat(0)};
  try {
    pl_degree(circle_map(values));
    FAIL("expected singular-on-boundary");
  } catch (const StratError& e) {
    CHECK(e.code() == "singular-on-boundary");
  }
  // a segment through the origin (antipodal endpoints) is singular too
  std::vector<RatVec> cross{{Rat(1), Rat(0)}, {Rat(-1), Rat(0)},
                            {Rat(0), Rat(1)}};
  try {
    pl_degree(circle_map(cross));
    FAIL("expected singular-on-boundary");
  } catch (const StratError& e) {
    CHECK(e.code() == "singular-on-boundary");
  }
}

TEST_CASE("degree on the zero-sphere") {
  SphereMap sm;
  sm.q = 1;
  sm.simplices = {{0}, {1}};
  sm.signs = {1, -1};
  sm.values[0] = {Rat(2)};
  sm.values[1] = {Rat(-3)};
  CHECK(pl_degree(sm) == 1);
  sm.values[1] = {Rat(5)};
  CHECK(pl_degree(sm) == 0);
  sm.values[0] = {Rat(-2)};
  sm.values[1] = {Rat(7)};
  CHECK(pl_degree(sm) == -1);
}

TEST_CASE("degree is invariant under target antipody in even dimensions") {
  for (uint64_t trial = 0; trial < 25; ++trial) {
    Substream rng(31, "antipode-batch", trial);
    std::vector<RatVec> values;
    for (int i = 0; i < 8; ++i) values.push_back(rng.direction(2, 8));
    try {
      int plus = pl_degree(circle_map(values), 1, trial);
      std::vector<RatVec> neg;
      for (const auto& v : values) neg.push_back(rv_scale(Rat(-1), v));
      int minus = pl_degree(circle_map(neg), 1, trial);
      CHECK(plus == minus);
    } catch (const StratError&) {
    }
  }
}

TEST_CASE("orientation seed does not move local indices") {
  auto k = corpus::octahedron();
  auto dd = build_dual(k);
  REQUIRE(dd.ok);
  StratConfig cfg;
  auto rf = radial_frame(k, dd, cfg, 1);
  auto a = assemble_cocycle(k, dd, rf, 1);
  auto b = assemble_cocycle(k, dd, rf, 2);
  auto c = assemble_cocycle(k, dd, rf, 977);
  CHECK(a.gamma == b.gamma);
  CHECK(a.gamma == c.gamma);
  CHECK(a.total == 2);
}

TEST_CASE("poincare-hopf totals across the surface examples") {
  std::map<std::string, long long> expected{
      {"octahedron", 2},  {"disk_hexagon", 1}, {"point_in_disk", 1},
      {"nodal_disks", 1}, {"cross_disk", 1}};
  StratConfig cfg;
  for (const auto& nc : corpus::all()) {
    auto it = expected.find(nc.name);
    if (it == expected.end()) continue;
    auto dd = build_dual(nc.complex);
    REQUIRE(dd.ok);
    auto rf = radial_frame(nc.complex, dd, cfg, 1);
    auto coc = assemble_cocycle(nc.complex, dd, rf, cfg.seed);
    auto chk = verify_cocycle(nc.complex, dd, coc);
    INFO(nc.name);
    CHECK(chk.closed);
    CHECK(coc.total == it->second);
    auto ph = poincare_hopf_check(coc, nc.complex);
    CHECK(ph.match);
    CHECK(ph.chi == it->second);
    // the zero-dimensional sources mean gamma lives on interior vertices
    CHECK(coc.zero_source_dim == 0);
    CHECK(coc.degree == dd.region_dim);
  }
}

TEST_CASE("base-case zeros carry index one by the restriction rule") {
  auto k = corpus::point_in_disk();
  auto dd = build_dual(k);
  REQUIRE(dd.ok);
  StratConfig cfg;
  auto rf = radial_frame(k, dd, cfg, 1);
  auto coc = assemble_cocycle(k, dd, rf, cfg.seed);
  bool seen_base = false;
  for (const auto& rec : coc.records) {
    if (rec.method != "stratum-restricted") continue;
    seen_base = true;
    CHECK(rec.index == 1);
    REQUIRE(rec.restricted.has_value());
    CHECK(*rec.restricted == 1);
    // it really is the marked zero-dimensional stratum
    const StratumInfo* st = stratum_info(k, rec.stratum);
    REQUIRE(st != nullptr);
    CHECK(st->real_dim == 0);
  }
  CHECK(seen_base);
}

TEST_CASE("restricted indices agree with ambient ones on a refined cross") {
  auto k = barycentric_subdivide(corpus::cross_disk());
  auto dd = build_dual(k);
  REQUIRE(dd.ok);
  StratConfig cfg;
  auto rf = radial_frame(k, dd, cfg, 1);
  auto coc = assemble_cocycle(k, dd, rf, cfg.seed);
  CHECK(coc.total == 1);
  int compared = 0;
  for (const auto& rec : coc.records)
    if (rec.restricted.has_value() && rec.method != "stratum-restricted") {
      CHECK(*rec.restricted == rec.index);
      ++compared;
    }
  CHECK(compared == 16);  // every interior cell away from the base case
}

TEST_CASE("two-frame cocycle closes and its mutation is caught") {
  auto k = corpus::flat_c2();
  auto dd = build_dual(k);
  REQUIRE(dd.ok);
  StratConfig cfg;
  auto rf = radial_frame(k, dd, cfg, 2);
  auto coc = assemble_cocycle(k, dd, rf, cfg.seed);
  CHECK(coc.degree == 2);
  CHECK(coc.zero_source_dim == 2);
  CHECK(coc.total == 0);
  auto chk = verify_cocycle(k, dd, coc);
  CHECK(chk.closed);
  CHECK(chk.witness_cell == -1);

  auto tampered = coc;
  REQUIRE(!tampered.gamma.empty());
  tampered.gamma.begin()->second += 1;
  tampered.total += 1;
  auto bad = verify_cocycle(k, dd, tampered);
  CHECK(!bad.closed);
  CHECK(bad.witness_cell >= 0);
  // the duality cycle of the tampered data is no longer a cycle
  try {
    dual_homology_cycle(k, dd, tampered);
    FAIL("expected index-placement");
  } catch (const StratError& e) {
    CHECK(e.code() == "index-placement");
  }
}

TEST_CASE("duality classes on both sides of the ledger") {
  struct Expect {
    std::string name;
    long long total;
  };
  std::vector<Expect> cases{{"octahedron", 2}, {"disk_hexagon", 1},
                            {"pinched_torus", 1}, {"cone_circle", 1}};
  StratConfig cfg;
  for (const auto& e : cases) {
    EmbeddedComplex k;
    for (const auto& nc : corpus::all())
      if (nc.name == e.name) k = nc.complex;
    auto dd = build_dual(k);
    REQUIRE(dd.ok);
    auto rf = radial_frame(k, dd, cfg, 1);
    auto coc = assemble_cocycle(k, dd, rf, cfg.seed);
    auto rep = dual_homology_cycle(k, dd, coc);
    INFO(e.name);
    CHECK(rep.cycle_closed);
    CHECK(rep.total == e.total);
    // r = 1: the class lives in H_0, one free generator, weight = total
    CHECK(rep.homology_betti == 1);
    CHECK(rep.homology_torsion.empty());
    REQUIRE(rep.class_coords.size() == 1);
    CHECK(rep.class_orders[0] == 0);
    CHECK((rep.class_coords[0] == e.total || rep.class_coords[0] == -e.total));
    // relative cohomology of the dual pair mirrors it exactly
    CHECK(rep.cohomology_betti == 1);
    CHECK(rep.cohomology_torsion.empty());
    REQUIRE(rep.cocycle_class_coords.size() == 1);
    CHECK(rep.cocycle_class_coords[0] == rep.class_coords[0]);
  }
}

TEST_CASE("two-frame class vanishes in a trivial middle group") {
  auto k = corpus::flat_c2();
  auto dd = build_dual(k);
  REQUIRE(dd.ok);
  StratConfig cfg;
  auto rf = radial_frame(k, dd, cfg, 2);
  auto coc = assemble_cocycle(k, dd, rf, cfg.seed);
  auto rep = dual_homology_cycle(k, dd, coc);
  CHECK(rep.cycle_closed);
  CHECK(rep.homology_betti == 0);
  CHECK(rep.cohomology_betti == 0);
  CHECK(rep.class_coords.empty());
  CHECK(rep.cocycle_class_coords.empty());
  CHECK(rep.total == 0);
}

TEST_CASE("the class survives refinement, reseeding, and reconfiguration") {
  StratConfig cfg;
  auto rep = subdivision_invariance_check(corpus::octahedron(), cfg, 1);
  REQUIRE(rep.runs.size() == 4);
  for (const auto& run : rep.runs) {
    INFO(run.label << ": " << run.error);
    CHECK(run.ok);
    CHECK(run.total == 2);
  }
  CHECK(rep.pass);
}

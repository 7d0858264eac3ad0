// Piecewise-affine fields, outward normal sums, and radial frames.
#include <catch2/catch_amalgamated.hpp>

#include "stratchern/corpus.hpp"
#include "stratchern/dualize.hpp"
#include "stratchern/fields.hpp"

using namespace stratchern;

TEST_CASE("piecewise-affine evaluation interpolates vertex values") {
  PAField f;
  f.ambient_dim = 2;
  f.values[0] = {Rat(1), Rat(0)};
  f.values[1] = {Rat(0), Rat(1)};
  f.values[2] = {Rat(-1), Rat(-1)};
  RatVec mid = pa_eval(f, {0, 1, 2}, {Rat(1, 3), Rat(1, 3), Rat(1, 3)});
  CHECK(mid == RatVec{Rat(0), Rat(0)});
  RatVec on_vertex = pa_eval(f, {0, 1, 2}, {Rat(1), Rat(0), Rat(0)});
  CHECK(on_vertex == f.values[0]);
  // missing vertices evaluate as zero
  RatVec ghost = pa_eval(f, {0, 9}, {Rat(1, 2), Rat(1, 2)});
  CHECK(ghost == RatVec{Rat(1, 2), Rat(0)});
}

TEST_CASE("parallel extension transports a constant tangentially") {
  // Cross-disk: the level-0 skeleton is the origin alone, and with nothing
  // below it the tube covers every vertex with no ramp.  Each vertex projects
  // the pulled-back constant onto its own stratum's tangent plane: identity
  // on the flat sheet, the axis direction on each axis, kept at the origin.
  auto k = corpus::cross_disk();
  StratConfig cfg;
  PAField base;
  base.ambient_dim = 2;
  base.values[0] = {Rat(3), Rat(-2)};  // origin vertex
  auto ext = parallel_extension(k, cfg, base, 0);
  REQUIRE(ext.values.size() == k.vertices.size());
  for (const auto& [v, val] : ext.values) {
    INFO("vertex " << v);
    const RatVec& p = k.vertex(v);
    if (v == 0) {
      CHECK(val == RatVec{Rat(3), Rat(-2)});  // skeleton keeps the base value
    } else if (p[1] == 0) {
      CHECK(val == RatVec{Rat(3), Rat(0)});  // x-axis stratum
    } else if (p[0] == 0) {
      CHECK(val == RatVec{Rat(0), Rat(-2)});  // y-axis stratum
    } else {
      CHECK(val == RatVec{Rat(3), Rat(-2)});  // full-dimensional sheet
    }
  }
}

TEST_CASE("tube membership nests its zones") {
  auto k = corpus::cross_disk();
  StratConfig cfg;
  Substream rng(3, "tube-prop");
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    RatVec x;
    for (int i = 0; i < k.ambient_dim; ++i) x.push_back(rng.rat(8));
    auto tm = tube_membership(k, cfg, 1, x);
    if (tm.inner) CHECK(tm.inside);
    if (tm.inside) CHECK(tm.outer);
    CHECK(tm.dj2 >= 0);
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("outward bundles certify the angle bound with exact norm caps") {
  StratConfig cfg;
  for (const auto& name : {"cross_disk", "pinched_torus", "nodal_disks",
                           "cone_circle", "point_in_disk"}) {
    EmbeddedComplex k;
    for (const auto& nc : corpus::all())
      if (nc.name == name) k = nc.complex;
    auto bundle = build_outward(k, cfg);
    INFO(name);
    REQUIRE(!bundle.components.empty());
    CHECK(bundle.samples_checked > 0);
    CHECK(bundle.worst.angle < 0.5);
    CHECK(bundle.c_ratio_used >= cfg.c_ratio);
    // components are listed by ascending stratum dimension with growing
    // coefficients toward lower strata (already ordered by construction)
    for (size_t i = 1; i < bundle.components.size(); ++i) {
      CHECK(bundle.components[i].stratum_dim >
            bundle.components[i - 1].stratum_dim);
      CHECK(bundle.components[i].coefficient <
            bundle.components[i - 1].coefficient);
    }
    int kexp = effective_exponent(cfg);
    for (const auto& comp : bundle.components) {
      CHECK(comp.data.norm_caps_exact);
      // External recheck of the caps: at every carrier vertex the stored
      // vector is bounded by the tube distances, exactly.
      for (const auto& [v, w] : comp.data.field.values) {
        auto it = comp.data.zone.find(v);
        if (it == comp.data.zone.end()) {
          CHECK(rv_is_zero(w));
          continue;
        }
        const TubeMembership& tm = it->second;
        Rat n2 = rv_norm2(w);
        CHECK(n2 <= tm.dj2);
        if (!tm.lower_empty) CHECK(n2 <= detail::rat_pow(tm.dlow2, kexp));
      }
    }
  }
}

TEST_CASE("radial frames satisfy the zero-placement theorem") {
  std::map<std::string, size_t> expected_zeros{{"octahedron", 6},
                                               {"flat_torus", 16},
                                               {"disk_hexagon", 1},
                                               {"pinched_torus", 13}};
  StratConfig cfg;
  for (const auto& nc : corpus::all()) {
    auto it = expected_zeros.find(nc.name);
    if (it == expected_zeros.end()) continue;
    auto dd = build_dual(nc.complex);
    REQUIRE(dd.ok);
    auto rf = radial_frame(nc.complex, dd, cfg, 1);
    INFO(nc.name);
    CHECK(rf.r == 1);
    CHECK(rf.theorem.pass());
    CHECK(rf.singular.size() == it->second);
    CHECK(rf.seed_attempts == 1);
    REQUIRE(rf.fields.size() == 1);
    // Singular points sit at barycenters of interior cells, in the lowest
    // stratum present, and the field vanishes exactly there.
    for (const auto& sp : rf.singular) {
      CHECK(!dd.boundary_simplex[sp.source_simplex]);
      CHECK(rv_is_zero(rf.fields.back().at(sp.fine_vertex)));
    }
    // Non-singular barycenters carry nonzero vectors.
    size_t nonzero = 0;
    std::set<int> singular_sources;
    for (const auto& sp : rf.singular) singular_sources.insert(sp.source_simplex);
    for (size_t s = 0; s < nc.complex.simplices.size(); ++s)
      if (!singular_sources.count(static_cast<int>(s)) &&
          !rv_is_zero(rf.value_at(0, static_cast<int>(s))))
        ++nonzero;
    CHECK(nonzero + rf.singular.size() == nc.complex.simplices.size());
  }
}

TEST_CASE("two-frame on the complex-structure example") {
  auto k = corpus::flat_c2();
  auto dd = build_dual(k);
  REQUIRE(dd.ok);
  StratConfig cfg;
  auto rf = radial_frame(k, dd, cfg, 2);
  CHECK(rf.r == 2);
  CHECK(rf.theorem.pass());
  CHECK(rf.fields.size() == 2);
  CHECK(rf.singular.size() == 14);
  CHECK(rf.seed_attempts == 1);
  CHECK(rf.obstruction_dim == 2);
  CHECK(rf.leading_frame.independent);
}

TEST_CASE("rank and refinement guardrails") {
  StratConfig cfg;
  {
    auto k = corpus::flat_c2();
    auto dd = build_dual(k);
    REQUIRE(dd.ok);
    try {
      radial_frame(k, dd, cfg, 1);  // no interior vertex at this coarseness
      FAIL("expected needs-refinement");
    } catch (const StratError& e) {
      CHECK(e.code() == "needs-refinement");
    }
  }
  {
    auto k = corpus::nodal_disks();
    auto dd = build_dual(k);
    REQUIRE(dd.ok);
    try {
      radial_frame(k, dd, cfg, 2);  // no complex structure on this example
      FAIL("expected unsupported-rank");
    } catch (const StratError& e) {
      CHECK(e.code() == "unsupported-rank");
    }
    try {
      radial_frame(k, dd, cfg, 0);
      FAIL("expected unsupported-rank");
    } catch (const StratError& e) {
      CHECK(e.code() == "unsupported-rank");
    }
  }
}

TEST_CASE("radial frames are reproducible bit for bit") {
  auto k = corpus::pinched_torus();
  auto dd = build_dual(k);
  REQUIRE(dd.ok);
  StratConfig cfg;
  auto a = radial_frame(k, dd, cfg, 1);
  auto b = radial_frame(k, dd, cfg, 1);
  REQUIRE(a.fields.size() == b.fields.size());
  for (size_t c = 0; c < a.fields.size(); ++c)
    CHECK(a.fields[c].values == b.fields[c].values);
  CHECK(a.singular.size() == b.singular.size());
  CHECK(a.seed_attempts == b.seed_attempts);
}

TEST_CASE("independence check accepts frames and rejects collapses") {
  auto k = corpus::flat_c2();
  REQUIRE(k.complex_structure);
  PAField a, b, ib;
  a.ambient_dim = b.ambient_dim = ib.ambient_dim = k.ambient_dim;
  a.complex_structure = b.complex_structure = ib.complex_structure = true;
  // coordinates interleave as (x1, y1, x2, y2)
  a.values[0] = {Rat(1), Rat(0), Rat(0), Rat(0)};   // (1, 0) in C^2
  b.values[0] = {Rat(0), Rat(0), Rat(1), Rat(0)};   // (0, 1) in C^2
  ib.values[0] = {Rat(0), Rat(1), Rat(0), Rat(0)};  // (i, 0) = i * a
  auto good = independence_check(k, {&a, &b});
  CHECK(good.independent);
  CHECK(good.checked == 1);
  auto bad = independence_check(k, {&a, &ib});  // complex-linearly dependent
  CHECK(!bad.independent);
  CHECK(bad.witness_vertex == 0);
}

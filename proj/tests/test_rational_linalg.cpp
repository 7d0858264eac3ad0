// Exact scalar, vector/matrix, LP, RNG, and integer normal-form kernels.
#include <catch2/catch_amalgamated.hpp>

#include "stratchern/homology.hpp"
#include "stratchern/linalg.hpp"
#include "stratchern/ratlp.hpp"
#include "stratchern/rng.hpp"

using namespace stratchern;

TEST_CASE("rational parsing and emission round-trip") {
  CHECK(parse_rat("5/4") == Rat(5, 4));
  CHECK(parse_rat("1.25") == Rat(5, 4));
  CHECK(parse_rat("-0.5") == Rat(-1, 2));
  CHECK(parse_rat("-3/6") == Rat(-1, 2));
  CHECK(parse_rat("7") == Rat(7));
  CHECK(parse_rat(".5") == Rat(1, 2));
  CHECK(rat_to_string(Rat(5, 4)) == "5/4");
  CHECK(rat_to_string(Rat(-7)) == "-7");
  CHECK(rat_to_string(parse_rat("0.125")) == "1/8");
  CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1.2.3"), std::invalid_argument);
}

TEST_CASE("rational square-root lower bounds") {
  for (int i = 1; i <= 40; ++i) {
    Rat q(i, 7);
    Rat lo = rat_sqrt_lower(q);
    CHECK(lo >= 0);
    CHECK(lo * lo <= q);
    // within 2^-40 of the true root relative to the bracket width
    Rat hi = q < 1 ? Rat(1) : q;
    CHECK((lo + hi / (Int(1) << 40)) * (lo + hi / (Int(1) << 40)) > q);
  }
  CHECK(rat_sqrt_lower(Rat(0)) == 0);
  CHECK(rat_sqrt_lower(Rat(-3)) == 0);
  CHECK(rat_sqrt_lower(Rat(4)) <= 2);
}

TEST_CASE("vector arithmetic") {
  RatVec a{Rat(1), Rat(2)}, b{Rat(3), Rat(-1)};
  CHECK(rv_dot(a, b) == Rat(1));
  CHECK(rv_add(a, b) == RatVec{Rat(4), Rat(1)});
  CHECK(rv_sub(a, b) == RatVec{Rat(-2), Rat(3)});
  CHECK(rv_scale(Rat(2), a) == RatVec{Rat(2), Rat(4)});
  CHECK(rv_norm2(b) == Rat(10));
  CHECK(rv_is_zero(rv_zero(3)));
  CHECK(!rv_is_zero(a));
}

TEST_CASE("determinant, rank, solve") {
  RatMat m{{Rat(2), Rat(1)}, {Rat(1), Rat(3)}};
  CHECK(rm_det(m) == Rat(5));
  CHECK(rm_rank(m) == 2);
  RatMat sw{{Rat(1), Rat(2)}, {Rat(3), Rat(1)}};
  RatMat swt{{Rat(2), Rat(1)}, {Rat(1), Rat(3)}};
  CHECK(rm_det(sw) == -Rat(5));  // column swap flips the sign
  (void)swt;
  auto sol = rm_solve(m, RatVec{Rat(5), Rat(10)});
  REQUIRE(sol.has_value());
  CHECK((*sol)[0] == Rat(1));
  CHECK((*sol)[1] == Rat(3));
  RatMat sing{{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
  CHECK(!rm_solve(sing, RatVec{Rat(1), Rat(0)}).has_value());
  CHECK(rm_rank(sing) == 1);
}

TEST_CASE("seeded random systems solve consistently") {
  for (int trial = 0; trial < 100; ++trial) {
    Substream rng(99, "linalg-prop", static_cast<uint64_t>(trial));
    size_t n = 2 + rng.below(3);
    RatMat m = rm_zero(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) m[i][j] = rng.rat(8);
    Rat det = rm_det(m);
    CHECK((det != 0) == (rm_rank(m) == n));
    if (det == 0) continue;
    RatVec rhs(n);
    for (auto& c : rhs) c = rng.rat(8);
    auto sol = rm_solve(m, rhs);
    REQUIRE(sol.has_value());
    for (size_t i = 0; i < n; ++i) {
      Rat acc(0);
      for (size_t j = 0; j < n; ++j) acc += m[i][j] * (*sol)[j];
      CHECK(acc == rhs[i]);
    }
  }
}

TEST_CASE("consistent solve on overdetermined systems") {
  // 3 equations, 2 unknowns, consistent: columns (1,0,1) and (0,1,1).
  RatMat a{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(1)}};
  auto sol = rm_solve_consistent(a, RatVec{Rat(2), Rat(3), Rat(5)});
  REQUIRE(sol.has_value());
  CHECK((*sol)[0] == Rat(2));
  CHECK((*sol)[1] == Rat(3));
  CHECK(!rm_solve_consistent(a, RatVec{Rat(2), Rat(3), Rat(6)}).has_value());
}

TEST_CASE("exact zero-in-hull decisions") {
  using V = std::vector<RatVec>;
  CHECK(zero_in_convex_hull(
      V{{Rat(1), Rat(0)}, {Rat(-1), Rat(1)}, {Rat(-1), Rat(-1)}}));
  CHECK(!zero_in_convex_hull(
      V{{Rat(1), Rat(1)}, {Rat(2), Rat(1)}, {Rat(1), Rat(2)}}));
  // origin on a face still counts (closed hull)
  CHECK(zero_in_convex_hull(V{{Rat(1), Rat(0)}, {Rat(-1), Rat(0)}}));
  CHECK(!zero_in_convex_hull(V{{Rat(1), Rat(0)}, {Rat(1), Rat(1)}}));
  // translated copies of a hull containing zero stop containing it
  for (int trial = 0; trial < 50; ++trial) {
    Substream rng(7, "hull-prop", static_cast<uint64_t>(trial));
    V pts;
    for (int i = 0; i < 4; ++i)
      pts.push_back(RatVec{rng.rat(8) - Rat(1, 2), rng.rat(8) - Rat(1, 2)});
    bool with_zero = zero_in_convex_hull(pts);
    V shifted = pts;
    for (auto& p : shifted) p[0] += Rat(10);
    CHECK(!zero_in_convex_hull(shifted));
    (void)with_zero;
  }
}

TEST_CASE("substreams are deterministic and label-separated") {
  Substream a(42, "alpha", 1), b(42, "alpha", 1), c(42, "beta", 1);
  auto va = a.direction(3), vb = b.direction(3), vc = c.direction(3);
  CHECK(va == vb);
  CHECK(va != vc);
  Substream d(43, "alpha", 1);
  CHECK(d.direction(3) != va);
}

TEST_CASE("smith normal form invariant factors") {
  IntMat m{{Int(2), Int(4)}, {Int(6), Int(8)}};  // factors 2, 4
  auto snf = smith_normal_form(m);
  REQUIRE(snf.diagonal.size() == 2);
  CHECK(snf.diagonal[0] == 2);
  CHECK(snf.diagonal[1] == 4);
  CHECK(snf.rank == 2);
}

TEST_CASE("smith transforms reproduce the input") {
  for (int trial = 0; trial < 60; ++trial) {
    Substream rng(5, "snf-prop", static_cast<uint64_t>(trial));
    size_t rows = 1 + rng.below(4), cols = 1 + rng.below(4);
    IntMat a(rows, std::vector<Int>(cols));
    for (auto& row : a)
      for (auto& x : row)
        x = Int(static_cast<long long>(rng.below(11)) - 5);
    auto st = smith_with_transforms(a, rows, cols);
    // d = u * a * v
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) {
        Int acc(0);
        for (size_t p = 0; p < rows; ++p)
          for (size_t q = 0; q < cols; ++q)
            acc += st.u[i][p] * a[p][q] * st.v[q][j];
        CHECK(acc == st.d[i][j]);
      }
    // diagonal, nonnegative, divisibility chain
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j)
        if (i != j) CHECK(st.d[i][j] == 0);
    for (size_t i = 0; i + 1 < st.diagonal.size(); ++i) {
      CHECK(st.diagonal[i] > 0);
      CHECK(st.diagonal[i + 1] % st.diagonal[i] == 0);
    }
  }
}

TEST_CASE("quotient space recovers circle homology with coordinates") {
  // Triangle circle: 3 vertices, 3 edges; H_1 = Z generated by the full loop.
  IntMat d1{{Int(-1), Int(0), Int(1)},
            {Int(1), Int(-1), Int(0)},
            {Int(0), Int(1), Int(-1)}};
  IntMat empty(3, std::vector<Int>());
  QuotientSpace h1(3, d1, 3, empty, 0);
  CHECK(h1.betti() == 1);
  CHECK(h1.torsion().empty());
  auto one = h1.coords({Int(1), Int(1), Int(1)});
  REQUIRE(one.coords.size() == 1);
  CHECK(one.orders[0] == 0);
  auto five = h1.coords({Int(5), Int(5), Int(5)});
  CHECK(five.coords[0] == 5 * one.coords[0]);
}

TEST_CASE("quotient space reports torsion coordinates") {
  // Z^1 modulo the image of multiplication by 2: Z/2.
  IntMat zero_out(0, std::vector<Int>());
  IntMat twice{{Int(2)}};
  QuotientSpace q(1, zero_out, 0, twice, 1);
  CHECK(q.betti() == 0);
  REQUIRE(q.torsion().size() == 1);
  CHECK(q.torsion()[0] == 2);
  auto odd = q.coords({Int(3)});
  REQUIRE(odd.coords.size() == 1);
  CHECK(odd.orders[0] == 2);
  CHECK(odd.coords[0] == 1);
  auto even = q.coords({Int(4)});
  CHECK(even.coords[0] == 0);
}

// Built-in example complexes used by the test-suites, the shipped data files
// and the documentation: closed surfaces, singular surfaces (pinched torus,
// nodal model, cones), a real stratified disk for chain/audit work, a flat
// piece of C^2, and a PL Whitney umbrella.
#pragma once

#include <set>

#include "stratchern/mesh.hpp"

namespace stratchern {
namespace corpus {

namespace detail {

// Adds every missing face of the given top simplices; face stratum defaults
// to the lowest-dimensional incident stratum unless already assigned.
inline void close_under_faces(EmbeddedComplex& k,
                              const std::map<std::vector<int>, int>& forced) {
  std::map<std::vector<int>, int> want;  // verts -> stratum
  for (const auto& s : k.simplices) {
    size_t nv = s.verts.size();
    for (size_t mask = 1; mask < (1u << nv); ++mask) {
      std::vector<int> sub;
      for (size_t b = 0; b < nv; ++b)
        if (mask & (1u << b)) sub.push_back(s.verts[b]);
      auto it = forced.find(sub);
      int stratum = it != forced.end() ? it->second : s.stratum;
      auto [slot, fresh] = want.emplace(sub, stratum);
      if (!fresh && it == forced.end()) {
        // keep any forced/previous assignment; otherwise prefer the smaller
        // stratum id (lower strata carry smaller ids throughout the corpus)
        slot->second = std::min(slot->second, stratum);
      }
    }
  }
  std::set<std::vector<int>> have;
  for (const auto& s : k.simplices) have.insert(s.verts);
  for (const auto& [verts, stratum] : want)
    if (!have.count(verts)) k.add_simplex(verts, stratum);
  // re-apply forced labels to pre-existing simplices
  for (auto& s : k.simplices) {
    auto it = forced.find(s.verts);
    if (it != forced.end()) s.stratum = it->second;
  }
  k.invalidate_caches();
}

inline RatVec v2(int x, int y) { return {Rat(x), Rat(y)}; }
inline RatVec v3(Rat x, Rat y, Rat z) { return {x, y, z}; }

}  // namespace detail

// Octahedron boundary: the minimal triangulated S^2, one smooth stratum.
inline EmbeddedComplex octahedron() {
  EmbeddedComplex k;
  k.ambient_dim = 3;
  int px = k.add_vertex({Rat(1), Rat(0), Rat(0)});
  int nx = k.add_vertex({Rat(-1), Rat(0), Rat(0)});
  int py = k.add_vertex({Rat(0), Rat(1), Rat(0)});
  int ny = k.add_vertex({Rat(0), Rat(-1), Rat(0)});
  int pz = k.add_vertex({Rat(0), Rat(0), Rat(1)});
  int nz = k.add_vertex({Rat(0), Rat(0), Rat(-1)});
  for (int x : {px, nx})
    for (int y : {py, ny})
      for (int z : {pz, nz}) k.add_simplex({x, y, z}, 0);
  detail::close_under_faces(k, {});
  k.strata = {{0, 2, 1, {}}};
  return k;
}

// Flat torus: product of two squares, PL-embedded in R^4; 32 triangles.
inline EmbeddedComplex flat_torus() {
  EmbeddedComplex k;
  k.ambient_dim = 4;
  const int grid[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  int id[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      id[i][j] = k.add_vertex({Rat(grid[i][0]), Rat(grid[i][1]),
                               Rat(grid[j][0]), Rat(grid[j][1])});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      int i2 = (i + 1) % 4, j2 = (j + 1) % 4;
      k.add_simplex({id[i][j], id[i2][j], id[i2][j2]}, 0);
      k.add_simplex({id[i][j], id[i2][j2], id[i][j2]}, 0);
    }
  detail::close_under_faces(k, {});
  k.strata = {{0, 2, 1, {}}};
  return k;
}

// Hexagonal disk, flat in R^2: a smooth region with boundary.
inline EmbeddedComplex disk_hexagon() {
  EmbeddedComplex k;
  k.ambient_dim = 2;
  int c = k.add_vertex(detail::v2(0, 0));
  const int hex[6][2] = {{2, 0}, {1, 2}, {-1, 2}, {-2, 0}, {-1, -2}, {1, -2}};
  std::vector<int> ring;
  for (auto& p : hex) ring.push_back(k.add_vertex(detail::v2(p[0], p[1])));
  for (int i = 0; i < 6; ++i)
    k.add_simplex({c, ring[i], ring[(i + 1) % 6]}, 0);
  detail::close_under_faces(k, {});
  k.strata = {{0, 2, 1, {}}};
  return k;
}

// Same geometry, stratified as a point inside a smooth region: X = {center}.
inline EmbeddedComplex point_in_disk() {
  EmbeddedComplex k = disk_hexagon();
  k.strata = {{0, 0, 0, {1}}, {1, 2, 1, {}}};
  std::map<std::vector<int>, int> forced;
  forced[{0}] = 0;  // the center vertex is the point stratum
  for (auto& s : k.simplices) s.stratum = 1;
  detail::close_under_faces(k, forced);
  return k;
}

// Pinched torus: a torus of revolution with one profile circle collapsed to a
// point.  Directrix square of radius 4 in the xy-plane, square profiles of
// radius 1 at three stations, pinch point at the fourth.
inline EmbeddedComplex pinched_torus() {
  EmbeddedComplex k;
  k.ambient_dim = 3;
  using detail::v3;
  int pinch = k.add_vertex(v3(Rat(4), Rat(0), Rat(0)));
  // stations 1..3 at directrix corners (0,4), (-4,0), (0,-4)
  const int dir[3][2] = {{0, 4}, {-4, 0}, {0, -4}};
  int ring[3][4];
  for (int s = 0; s < 3; ++s) {
    Rat cx(dir[s][0]), cy(dir[s][1]);
    Rat ux = cx / 4, uy = cy / 4;  // unit radial direction
    ring[s][0] = k.add_vertex(v3(cx + ux, cy + uy, Rat(0)));   // outer
    ring[s][1] = k.add_vertex(v3(cx, cy, Rat(1)));             // top
    ring[s][2] = k.add_vertex(v3(cx - ux, cy - uy, Rat(0)));   // inner
    ring[s][3] = k.add_vertex(v3(cx, cy, Rat(-1)));            // bottom
  }
  auto quad = [&](int a, int b, int c, int d) {
    k.add_simplex({a, b, c}, 1);
    k.add_simplex({a, c, d}, 1);
  };
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 4; ++i)
      quad(ring[s][i], ring[s][(i + 1) % 4], ring[s + 1][(i + 1) % 4],
           ring[s + 1][i]);
  for (int i = 0; i < 4; ++i) {
    k.add_simplex({pinch, ring[0][i], ring[0][(i + 1) % 4]}, 1);  // cone to s0
    k.add_simplex({pinch, ring[2][i], ring[2][(i + 1) % 4]}, 1);  // cone to s2
  }
  std::map<std::vector<int>, int> forced;
  forced[{pinch}] = 0;
  detail::close_under_faces(k, forced);
  k.strata = {{0, 0, 0, {1}}, {1, 2, 1, {}}};
  return k;
}

// Nodal model: two square disks in orthogonal coordinate planes of R^4 ~ C^2,
// glued at their common center (the node).
inline EmbeddedComplex nodal_disks() {
  EmbeddedComplex k;
  k.ambient_dim = 4;
  k.complex_structure = true;
  int node = k.add_vertex({Rat(0), Rat(0), Rat(0), Rat(0)});
  const int sq[4][2] = {{1, 1}, {1, -1}, {-1, -1}, {-1, 1}};
  std::vector<int> a, b;
  for (auto& p : sq) a.push_back(k.add_vertex({Rat(p[0]), Rat(p[1]), Rat(0), Rat(0)}));
  for (auto& p : sq) b.push_back(k.add_vertex({Rat(0), Rat(0), Rat(p[0]), Rat(p[1])}));
  for (int i = 0; i < 4; ++i) {
    k.add_simplex({node, a[i], a[(i + 1) % 4]}, 1);
    k.add_simplex({node, b[i], b[(i + 1) % 4]}, 1);
  }
  std::map<std::vector<int>, int> forced;
  forced[{node}] = 0;
  detail::close_under_faces(k, forced);
  k.strata = {{0, 0, 0, {1}}, {1, 2, 1, {}}};
  return k;
}

// PL cone over a circle (the x^2+y^2=z^2 model): apex at the origin, octagonal
// base of rational unit-circle points scaled to radius 4 at height 4.
inline EmbeddedComplex cone_circle() {
  EmbeddedComplex k;
  k.ambient_dim = 3;
  using detail::v3;
  int apex = k.add_vertex(v3(Rat(0), Rat(0), Rat(0)));
  const std::pair<Rat, Rat> circ[8] = {
      {Rat(1), Rat(0)},   {Rat(3, 5), Rat(4, 5)},   {Rat(0), Rat(1)},
      {Rat(-3, 5), Rat(4, 5)}, {Rat(-1), Rat(0)},   {Rat(-3, 5), Rat(-4, 5)},
      {Rat(0), Rat(-1)},  {Rat(3, 5), Rat(-4, 5)}};
  std::vector<int> ring;
  for (auto& [cx, cy] : circ) ring.push_back(k.add_vertex(v3(4 * cx, 4 * cy, Rat(4))));
  for (int i = 0; i < 8; ++i)
    k.add_simplex({apex, ring[i], ring[(i + 1) % 8]}, 1);
  std::map<std::vector<int>, int> forced;
  forced[{apex}] = 0;
  detail::close_under_faces(k, forced);
  k.strata = {{0, 0, 0, {1}}, {1, 2, 1, {}}};
  return k;
}

// Disk with two crossing diameters: a real nodal-curve model inside a
// triangulated ball.  Strata: origin (0) < axes (1) < sheet (2).
inline EmbeddedComplex cross_disk() {
  EmbeddedComplex k;
  k.ambient_dim = 2;
  using detail::v2;
  int c = k.add_vertex(v2(0, 0));
  int e = k.add_vertex(v2(2, 0)), n = k.add_vertex(v2(0, 2));
  int w = k.add_vertex(v2(-2, 0)), s = k.add_vertex(v2(0, -2));
  int ne = k.add_vertex(v2(2, 2)), nw = k.add_vertex(v2(-2, 2));
  int sw = k.add_vertex(v2(-2, -2)), se = k.add_vertex(v2(2, -2));
  int tri[8][3] = {{c, e, ne}, {c, ne, n}, {c, n, nw}, {c, nw, w},
                   {c, w, sw}, {c, sw, s}, {c, s, se}, {c, se, e}};
  for (auto& t : tri) k.add_simplex({t[0], t[1], t[2]}, 2);
  std::map<std::vector<int>, int> forced;
  forced[{c}] = 0;
  for (int axis_end : {e, n, w, s}) {
    std::vector<int> edge = {std::min(c, axis_end), std::max(c, axis_end)};
    forced[edge] = 1;
    forced[{axis_end}] = 1;
  }
  detail::close_under_faces(k, forced);
  k.strata = {{0, 0, 0, {1, 2}}, {1, 1, {}, {2}}, {2, 2, 1, {}}};
  return k;
}

// Freudenthal triangulation of the unit 4-cube: a smooth flat region of C^2
// (coordinates paired (x1,x2),(x3,x4)).  Simplices are chains in the
// componentwise order on cube corners.
inline EmbeddedComplex flat_c2() {
  EmbeddedComplex k;
  k.ambient_dim = 4;
  k.complex_structure = true;
  std::vector<std::vector<int>> corners;
  for (int m = 0; m < 16; ++m) {
    std::vector<int> c = {(m >> 0) & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1};
    corners.push_back(c);
    k.add_vertex({Rat(c[0]), Rat(c[1]), Rat(c[2]), Rat(c[3])});
  }
  auto leq = [&](int a, int b) {
    for (int i = 0; i < 4; ++i)
      if (corners[a][i] > corners[b][i]) return false;
    return true;
  };
  // maximal chains 0000 -> 1111 adding one coordinate at a time
  std::vector<std::vector<int>> chains;
  std::vector<int> chain = {0};
  auto grow = [&](auto&& self) -> void {
    int cur = chain.back();
    if (cur == 15) {
      chains.push_back(chain);
      return;
    }
    for (int b = 0; b < 4; ++b)
      if (!((cur >> b) & 1)) {
        chain.push_back(cur | (1 << b));
        self(self);
        chain.pop_back();
      }
  };
  grow(grow);
  (void)leq;
  for (auto& ch : chains) k.add_simplex(ch, 0);
  detail::close_under_faces(k, {});
  k.strata = {{0, 4, 2, {}}};
  return k;
}

// PL Whitney umbrella: image of (u,v) -> (u, u v, v^2) on a 3x3 parameter
// grid, with the natural gluing along u = 0.  Strata: origin (0) < handle (1)
// < sheets (2).  Not a pseudomanifold (the handle edge has four cofaces);
// used for stratification audits only.
inline EmbeddedComplex whitney_umbrella() {
  EmbeddedComplex k;
  k.ambient_dim = 3;
  std::map<std::vector<std::string>, int> seen;
  auto img_vertex = [&](int u, int v) {
    RatVec p = {Rat(u), Rat(u * v), Rat(v * v)};
    std::vector<std::string> key = {rat_to_string(p[0]), rat_to_string(p[1]),
                                    rat_to_string(p[2])};
    auto it = seen.find(key);
    if (it != seen.end()) return it->second;
    int id = k.add_vertex(p);
    seen[key] = id;
    return id;
  };
  int id[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) id[i][j] = img_vertex(i - 1, j - 1);
  std::set<std::vector<int>> tris;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      std::vector<std::vector<int>> two = {
          {id[i][j], id[i + 1][j], id[i + 1][j + 1]},
          {id[i][j], id[i + 1][j + 1], id[i][j + 1]}};
      for (auto t : two) {
        std::sort(t.begin(), t.end());
        if (t[0] != t[1] && t[1] != t[2]) tris.insert(t);
      }
    }
  for (const auto& t : tris) k.add_simplex(t, 2);
  int origin = id[1][1];           // (0,0,0)
  int glued = id[1][0];            // (0,0,1), the glued top of the handle
  std::map<std::vector<int>, int> forced;
  forced[{origin}] = 0;
  forced[{glued}] = 1;
  forced[{std::min(origin, glued), std::max(origin, glued)}] = 1;
  detail::close_under_faces(k, forced);
  k.strata = {{0, 0, {}, {1, 2}}, {1, 1, {}, {2}}, {2, 2, {}, {}}};
  return k;
}

struct NamedComplex {
  std::string name;
  EmbeddedComplex complex;
};

inline std::vector<NamedComplex> all() {
  return {{"octahedron", octahedron()},
          {"flat_torus", flat_torus()},
          {"disk_hexagon", disk_hexagon()},
          {"point_in_disk", point_in_disk()},
          {"pinched_torus", pinched_torus()},
          {"nodal_disks", nodal_disks()},
          {"cone_circle", cone_circle()},
          {"cross_disk", cross_disk()},
          {"flat_c2", flat_c2()},
          {"whitney_umbrella", whitney_umbrella()}};
}

}  // namespace corpus
}  // namespace stratchern

// Deterministic seeded randomness with named substreams.  Every stochastic
// choice in the library (sample points, generic directions, retry sequences)
// draws from a substream keyed by (seed, label, indices...), so artifacts are
// reproducible across platforms and thread counts.
#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "stratchern/linalg.hpp"
#include "stratchern/rational.hpp"

namespace stratchern {

namespace detail {
// FNV-1a, then splitmix64 finalization: stable across platforms.
inline uint64_t hash_bytes(uint64_t h, const void* data, size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) h = (h ^ p[i]) * 0x100000001b3ULL;
  return h;
}
inline uint64_t finalize(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class Substream {
 public:
  Substream(uint64_t seed, const std::string& label, uint64_t a = 0,
            uint64_t b = 0) {
    uint64_t h = 0xcbf29ce484222325ULL;
    h = detail::hash_bytes(h, &seed, sizeof seed);
    h = detail::hash_bytes(h, label.data(), label.size());
    h = detail::hash_bytes(h, &a, sizeof a);
    h = detail::hash_bytes(h, &b, sizeof b);
    eng_.seed(detail::finalize(h));
  }

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, n).
  uint64_t below(uint64_t n) { return n == 0 ? 0 : eng_() % n; }

  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  double uniform01() {
    return (eng_() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
  }

  // Small exact rational in [-1, 1] with denominator `den`.
  Rat rat(int den = 64) {
    int num = range(-den, den);
    return Rat(num, den);
  }

  // Exact rational in (0, 1) with denominator `den`.
  Rat rat01(int den = 64) {
    int num = range(1, den - 1);
    return Rat(num, den);
  }

  // Random interior barycentric coordinates for a k-simplex: exact, positive,
  // summing to one.
  RatVec barycentric(size_t k_plus_1, int den = 97) {
    RatVec w(k_plus_1);
    Rat total(0);
    for (auto& x : w) {
      x = Rat(range(1, den), den);
      total += x;
    }
    for (auto& x : w) x /= total;
    return w;
  }

  // Nonzero rational direction vector in R^dim.
  RatVec direction(size_t dim, int den = 64) {
    while (true) {
      RatVec v(dim);
      bool nz = false;
      for (auto& x : v) {
        x = rat(den);
        if (x != 0) nz = true;
      }
      if (nz) return v;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace stratchern

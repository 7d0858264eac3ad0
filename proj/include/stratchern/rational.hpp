// Exact rational scalar type and parsing helpers.
//
// All combinatorial and geometric predicates in this library are decided over
// Q; floating point appears only in audit estimators.  Coordinates arrive as
// decimal strings ("1.25") or fraction strings ("5/4") and are kept exact.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

// Structural invariant check that stays active in optimized builds; these
// guard the internal consistency theorems the library's results depend on.
#define STRATCHERN_CHECK(cond, msg)                  \
  do {                                               \
    if (!(cond)) throw std::logic_error(msg);        \
  } while (0)

namespace stratchern {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

inline int rat_sign(const Rat& q) { return q < 0 ? -1 : (q > 0 ? 1 : 0); }

namespace detail {

// Signed decimal digits only; the big-int constructor itself throws
// std::runtime_error on stray characters, which would break parse_rat's
// documented std::invalid_argument contract.
inline Int parse_int(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  bool neg = s[0] == '-';
  size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size() ||
      s.find_first_not_of("0123456789", start) != std::string::npos)
    throw std::invalid_argument("malformed integer literal: " + s);
  Int v(s.substr(start));
  return neg ? Int(-v) : v;
}

}  // namespace detail

// Parses "n", "n/d", or a decimal string with optional sign and exponent-free
// fixed point part.  Throws std::invalid_argument on malformed input.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int num = detail::parse_int(s.substr(0, slash));
    Int den = detail::parse_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rat(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(detail::parse_int(s));
  std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
  if (tail.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("malformed decimal: " + s);
  bool neg = !head.empty() && head[0] == '-';
  if (head == "-" || head == "+") head += "0";
  if (head.empty()) head = "0";
  Int ipart = detail::parse_int(head);
  Int scale = 1;
  for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
  Int frac = tail.empty() ? Int(0) : Int(tail);
  Int num = ipart * scale + (neg ? -frac : frac);
  return Rat(num, scale);
}

// Canonical emission: integers as "n", everything else as "n/d".
inline std::string rat_to_string(const Rat& q) {
  Int num = boost::multiprecision::numerator(q);
  Int den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// Largest rational a = p/2^k (k <= bits) with a >= 0 and a*a <= q.
// Used to scale vectors under an exact norm bound without leaving Q.
inline Rat rat_sqrt_lower(const Rat& q, int bits = 48) {
  if (q <= 0) return Rat(0);
  Rat lo(0), hi = q < 1 ? Rat(1) : q;  // sqrt(q) <= max(1, q)
  for (int i = 0; i < bits; ++i) {
    Rat mid = (lo + hi) / 2;
    if (mid * mid <= q)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace stratchern

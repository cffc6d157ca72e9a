#pragma once

// Exact integer / rational layer: arbitrary-precision Int and Rat plus the
// small parsing, formatting and power helpers everything else builds on.
// No floating point enters here.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "fareytower/error.hpp"

namespace fareytower {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return numerator(r); }
inline Int den(const Rat& r) { return denominator(r); }

inline int sgn(const Int& x) { return x.sign(); }
inline int sgn(const Rat& x) { return numerator(x).sign(); }

inline Int abs_int(const Int& x) { return abs(x); }
inline Rat abs_rat(const Rat& x) { return sgn(x) < 0 ? Rat(-x) : x; }

// base^e for e >= 0.
inline Int ipow(const Int& base, std::uint64_t e) {
  Int acc(1), b(base);
  while (e != 0) {
    if (e & 1) acc *= b;
    e >>= 1;
    if (e != 0) b *= b;
  }
  return acc;
}

// r^e for any sign of e; r must be nonzero when e < 0.
inline Rat pow_rat(const Rat& r, std::int64_t e) {
  if (e >= 0) {
    Rat acc(ipow(num(r), static_cast<std::uint64_t>(e)),
            ipow(den(r), static_cast<std::uint64_t>(e)));
    return acc;
  }
  if (sgn(r) == 0) throw input_error("pow_rat: zero base with negative exponent");
  return Rat(ipow(den(r), static_cast<std::uint64_t>(-e)),
             ipow(num(r), static_cast<std::uint64_t>(-e)));
}

inline Int parse_int(std::string_view s) {
  if (s.empty()) throw input_error("parse_int: empty string");
  bool negative = s[0] == '-';
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw input_error("parse_int: sign with no digits");
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9')
      throw input_error("parse_int: bad character in '" + std::string(s) + "'");
  Int v{std::string(s.substr(i))};
  return negative ? Int(-v) : v;
}

// Accepts "p/q" or a plain integer string; result is reduced.
inline Rat parse_rat(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(s));
  Int n = parse_int(s.substr(0, slash));
  Int d = parse_int(s.substr(slash + 1));
  if (d == 0) throw input_error("parse_rat: zero denominator in '" + std::string(s) + "'");
  return Rat(n, d);
}

inline std::string int_str(const Int& x) { return x.str(); }

// "n" when the denominator is 1, otherwise "n/d".
inline std::string rat_str(const Rat& r) {
  if (den(r) == 1) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

// Round-to-nearest double; used only for display and for sound fast-path
// comparisons that fall back to exact arithmetic near ties.
inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace fareytower

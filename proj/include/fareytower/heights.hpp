#pragma once

// Weil heights on projective space over the rationals, their decomposition
// into local terms, truncated local heights, and the clamped gcd-valuation
// gcd_v^+ that measures how deeply a tuple vanishes at a place. Everything
// returns exact LogRat values.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fareytower/error.hpp"
#include "fareytower/factor.hpp"
#include "fareytower/lograt.hpp"
#include "fareytower/places.hpp"
#include "fareytower/rat.hpp"

namespace fareytower {

// A point of P^1 or P^2 in canonical integer coordinates: coprime overall,
// first nonzero coordinate positive. Canonical coordinates make every local
// minimum of coordinate valuations zero, so local heights reduce to
// valuations of forms evaluated at the point.
class ProjPoint {
 public:
  explicit ProjPoint(const std::vector<Rat>& xs) {
    if (xs.size() != 2 && xs.size() != 3)
      throw input_error("ProjPoint: expected 2 or 3 coordinates");
    bool nonzero = false;
    for (const Rat& x : xs) nonzero = nonzero || sgn(x) != 0;
    if (!nonzero) throw input_error("ProjPoint: all coordinates are zero");

    Int l = 1;
    for (const Rat& x : xs) l = boost::multiprecision::lcm(l, den(x));
    std::vector<Int> c;
    c.reserve(xs.size());
    for (const Rat& x : xs) c.push_back(num(x) * (l / den(x)));
    Int g = 0;
    for (const Int& v : c) g = boost::multiprecision::gcd(g, v);
    for (Int& v : c) v /= g;
    for (const Int& v : c) {
      if (v != 0) {
        if (v < 0)
          for (Int& w : c) w = -w;
        break;
      }
    }
    coords_ = std::move(c);
  }

  static ProjPoint line_point(const Rat& a) { return ProjPoint({a, Rat(1)}); }
  static ProjPoint plane_point(const Rat& a, const Rat& b) {
    return ProjPoint({a, b, Rat(1)});
  }

  const std::vector<Int>& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size() - 1; }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < coords_.size(); ++i)
      s += (i ? ":" : "") + coords_[i].str();
    return s + "]";
  }

 private:
  std::vector<Int> coords_;
};

// Global height: log of the largest coordinate magnitude in canonical form.
inline LogRat height(const ProjPoint& P) {
  Int m = 0;
  for (const Int& c : P.coords()) m = std::max(m, Int(abs(c)));
  return LogRat(m);
}

inline LogRat height(const Rat& a) { return height(ProjPoint::line_point(a)); }

// A line in P^2 (or a point of P^1 when only two coefficients are nonzero
// in a 2-coordinate context), with coprime integer coefficients.
class LineDivisor {
 public:
  explicit LineDivisor(std::array<Int, 3> coeffs) : coeffs_(std::move(coeffs)) {
    Int g = 0;
    for (const Int& c : coeffs_) g = boost::multiprecision::gcd(g, c);
    if (g == 0) throw input_error("LineDivisor: zero form");
    for (Int& c : coeffs_) c /= g;
  }

  static LineDivisor coordinate_x() { return LineDivisor({Int(1), Int(0), Int(0)}); }
  static LineDivisor coordinate_y() { return LineDivisor({Int(0), Int(1), Int(0)}); }
  static LineDivisor coordinate_z() { return LineDivisor({Int(0), Int(0), Int(1)}); }

  const std::array<Int, 3>& coeffs() const { return coeffs_; }

  Int evaluate(const ProjPoint& P) const {
    if (P.dim() != 2) throw input_error("LineDivisor: point is not in P^2");
    const auto& x = P.coords();
    return coeffs_[0] * x[0] + coeffs_[1] * x[1] + coeffs_[2] * x[2];
  }

 private:
  std::array<Int, 3> coeffs_;
};

// Local height of P against the line F = 0 at place v:
//   lambda_v = v(F(x)) - min_j v(x_j)
// on canonical coordinates, where the minimum term vanishes at finite
// places and equals -log(max |x_j|) at the archimedean one. Nonnegative at
// every finite place, and at the archimedean place for coordinate lines.
inline LogRat local_height_line(const LineDivisor& F, const ProjPoint& P, const Place& v) {
  Int fx = F.evaluate(P);
  if (fx == 0) throw input_error("local_height_line: point lies on the divisor");
  if (v.is_infinite()) {
    Int m = 0;
    for (const Int& c : P.coords()) m = std::max(m, Int(abs(c)));
    return LogRat(Rat(m, abs(fx)));
  }
  const Int& p = v.prime();
  Int e = detail::ord_int(abs(fx), p);
  Int mn = e + 1;
  for (const Int& c : P.coords())
    if (c != 0) mn = std::min(mn, detail::ord_int(abs(c), p));
  return log_pow(p, e - mn);
}

// Truncated local height against one of the three marked points 0, 1, inf
// of P^1 at a finite place: min(lambda_p, log p), i.e. log p exactly when p
// shows up at all. target encodes the point: 0, 1, or infinity.
enum class MarkedPoint { zero, one, infinity };

inline LogRat truncated_local_height(const Rat& a, MarkedPoint target, const Int& p) {
  if (!is_prime(p)) throw input_error("truncated_local_height: modulus is not prime");
  Int witness;  // p divides this integer iff the point is p-adically close to target
  switch (target) {
    case MarkedPoint::zero:
      if (sgn(a) == 0) throw input_error("truncated_local_height: point equals target 0");
      witness = abs(num(a));
      break;
    case MarkedPoint::one:
      if (a == 1) throw input_error("truncated_local_height: point equals target 1");
      witness = abs(num(a - 1));
      break;
    case MarkedPoint::infinity:
      witness = den(a);
      break;
  }
  return witness % p == 0 ? LogRat(Rat(p)) : LogRat();
}

// log rad(num(a)): the sum of truncated local heights of [a:1] against 0
// over all finite places. radical of +-1 is log 1 = 0.
inline LogRat radical_log(const Rat& a, const FactorEffort& effort = {}) {
  if (sgn(a) == 0) throw input_error("radical_log: zero input");
  Int n = abs(num(a));
  if (n == 1) return LogRat();
  Rat r = 1;
  for (const auto& [p, e] : factor(Rat(n), effort).exponents) r *= Rat(p);
  return LogRat(r);
}

// log |a|'_S: the part of |num(a)| supported outside S. Computed by
// dividing out S-primes, so no factorization is needed.
inline LogRat prime_to_S_log(const Rat& a, const PlaceSet& S) {
  if (sgn(a) == 0) throw input_error("prime_to_S_log: zero input");
  Int n = abs(num(a));
  for (const Int& p : S.finite_primes())
    while (n % p == 0) n /= p;
  return LogRat(n);
}

// a is an S-integer iff no finite place outside S sees a pole of a, i.e.
// den(a) is supported on S.
inline bool is_S_integer(const Rat& a, const PlaceSet& S) {
  Int d = den(a);
  for (const Int& p : S.finite_primes())
    while (d % p == 0) d /= p;
  return d == 1;
}

// a is an S-unit iff both a and 1/a are S-integers.
inline bool is_S_unit(const Rat& a, const PlaceSet& S) {
  if (sgn(a) == 0) return false;
  return is_S_integer(a, S) && is_S_integer(Rat(1) / a, S);
}

// Extended rational: a rational or the point at infinity. Zero entries and
// infinite entries both have valuation +infinity at every place.
struct ExtRat {
  bool infinite = false;
  Rat value;

  static ExtRat of(const Rat& r) { return {false, r}; }
  static ExtRat inf() { return {true, Rat()}; }

  // Valuation is +infinity at every place for 0 and for infinity alike.
  bool valuation_infinite() const { return infinite || sgn(value) == 0; }
};

// gcd_v^+(xs) = max(0, min_j v(x_j)): the clamped joint vanishing order of
// a tuple at a place. Entries with infinite valuation drop out of the min;
// a tuple with no finite-valuation entry has no well-defined value.
inline LogRat gcd_plus(const std::vector<ExtRat>& xs, const Place& v) {
  if (xs.empty()) throw input_error("gcd_plus: empty tuple");
  bool any = false;
  if (v.is_infinite()) {
    // min_j(-log|x_j|) = -log(max_j |x_j|), clamped at zero.
    Rat m = 0;
    for (const ExtRat& x : xs) {
      if (x.valuation_infinite()) continue;
      any = true;
      Rat a = abs_rat(x.value);
      if (a > m) m = a;
    }
    if (!any) throw input_error("gcd_plus: every entry has infinite valuation");
    return m < 1 ? LogRat(Rat(1) / m) : LogRat();
  }
  const Int& p = v.prime();
  std::optional<Int> mn;
  for (const ExtRat& x : xs) {
    if (x.valuation_infinite()) continue;
    any = true;
    Int e = detail::ord_int(abs(num(x.value)), p) - detail::ord_int(den(x.value), p);
    if (!mn || e < *mn) mn = e;
  }
  if (!any) throw input_error("gcd_plus: every entry has infinite valuation");
  return *mn > 0 ? log_pow(p, *mn) : LogRat();
}

}  // namespace fareytower

#pragma once

// Coprime sum triples a + b = c and their quality log c / log rad(abc).
// The quality filter (> 1) is the exact integer test rad < c; the ranking
// comparator is decided by certified high-precision intervals, falling back
// to exact perfect-power analysis and mediant search when two qualities sit
// closer than the certified gap. Nothing is ever ordered by an unchecked
// float.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "fareytower/error.hpp"
#include "fareytower/factor.hpp"
#include "fareytower/lograt.hpp"
#include "fareytower/places.hpp"
#include "fareytower/rat.hpp"

namespace fareytower {

struct AbcTriple {
  Int a, b, c;  // a + b = c, 0 < a <= b, pairwise coprime
  Int rad;      // rad(a b c)

  std::string str() const {
    return "(" + a.str() + ", " + b.str() + ", " + c.str() + ")";
  }
};

namespace detail {

// Largest e >= 1 with n = m^e; returns (m, e). n >= 2.
inline std::pair<Int, Int> primitive_power(const Int& n) {
  if (n < 2) throw input_error("primitive_power: need n >= 2");
  unsigned maxe = static_cast<unsigned>(msb(n)) + 1;
  for (unsigned e = maxe; e >= 2; --e) {
    // Binary search for an exact e-th root.
    Int lo = 2, hi = (Int(1) << (msb(n) / e + 1)) + 1;
    while (lo <= hi) {
      Int mid = (lo + hi) / 2;
      Int pw = ipow(mid, e);
      if (pw == n) return {mid, Int(e)};
      if (pw < n) lo = mid + 1;
      else hi = mid - 1;
    }
  }
  return {n, Int(1)};
}

// log x / log y as an exact fraction, when one exists. x, y >= 2. The ratio
// is rational iff the primitive bases of x and y coincide.
inline std::optional<Rat> log_ratio_exact(const Int& x, const Int& y) {
  auto [bx, ex] = primitive_power(x);
  auto [by, ey] = primitive_power(y);
  if (bx != by) return std::nullopt;
  return Rat(ex, ey);
}

}  // namespace detail

// Exact sign of (log c / log rad) - p/q for a triple with rad >= 2:
// equivalent to comparing c^q against rad^p.
inline int quality_vs_rational(const AbcTriple& t, const Rat& threshold,
                               const LogCombineConfig& cfg = {}) {
  if (t.rad < 2) throw input_error("quality_vs_rational: radical below 2");
  if (sgn(threshold) <= 0) return 1;  // qualities are positive
  return log_combine({{Rat(den(threshold)), LogRat(Rat(t.c))},
                      {Rat(-num(threshold)), LogRat(Rat(t.rad))}},
                     cfg)
      .sign;
}

// Certified interval for log c / log rad from the 100-digit evaluation.
struct QualityApprox {
  double value;
  double lo, hi;  // certified enclosure
};

inline QualityApprox quality_approx(const AbcTriple& t) {
  detail::HighFloat lc = log(detail::HighFloat(t.c));
  detail::HighFloat lr = log(detail::HighFloat(t.rad));
  detail::HighFloat q = lc / lr;
  double v = q.convert_to<double>();
  // The 100-digit evaluation is good to ~1e-90 relative; the double
  // conversion dominates. A generous certified pad:
  double pad = std::abs(v) * 1e-13 + 1e-60;
  return {v, v - pad, v + pad};
}

// Total order on qualities, greater-first; ties in quality order by (c, a).
// Exactness ladder: certified double intervals, then exact rationality of
// each quality, then a mediant search adjudicating against rational probes.
// A genuinely undecidable pair (irrational qualities equal beyond the
// exponent cap) raises inconclusive_error rather than guessing.
inline int compare_quality(const AbcTriple& s, const AbcTriple& t,
                           const LogCombineConfig& cfg = {}) {
  QualityApprox qs = quality_approx(s), qt = quality_approx(t);
  if (qs.lo > qt.hi) return 1;
  if (qs.hi < qt.lo) return -1;

  std::optional<Rat> rs = detail::log_ratio_exact(s.c, s.rad);
  std::optional<Rat> rt = detail::log_ratio_exact(t.c, t.rad);
  if (rs && rt) return *rs < *rt ? -1 : (*rs == *rt ? 0 : 1);
  if (rs) return -quality_vs_rational(t, *rs, cfg);
  if (rt) return quality_vs_rational(s, *rt, cfg);

  // Both irrational and numerically indistinguishable: walk mediants
  // between rational probes until one separates them.
  // log c / log rad <= log2(c) + 1, so this exceeds both qualities.
  Rat lo(0), hi(Int(msb(s.c) + msb(t.c) + 2));
  for (int step = 0; step < 64; ++step) {
    Rat mid = (lo + hi) / 2;
    int cs = quality_vs_rational(s, mid, cfg);
    int ct = quality_vs_rational(t, mid, cfg);
    if (cs > 0 && ct < 0) return 1;
    if (cs < 0 && ct > 0) return -1;
    if (cs == 0) return -ct;
    if (ct == 0) return cs;
    if (cs > 0) lo = mid;
    else hi = mid;
  }
  throw inconclusive_error("compare_quality: qualities are equal beyond the probe depth",
                           qs.value - qt.value, 1e-60);
}

// Triples with quality strictly above 1 (exactly: rad < c) for c up to
// c_max, ranked by quality descending, ties by (c, a) ascending.
inline std::vector<AbcTriple> abc_scan(const Int& c_max, std::size_t top_k = SIZE_MAX) {
  if (c_max < 2) throw input_error("abc_scan: need c_max >= 2");
  if (c_max > Int(50'000'000)) throw input_error("abc_scan: c_max exceeds the sieve cap");
  std::size_t n = c_max.convert_to<std::size_t>();

  // rad(k) for all k <= c_max by a smallest-prime-factor style sieve.
  std::vector<std::uint64_t> rad(n + 1, 1);
  std::vector<bool> seen(n + 1, false);
  for (std::size_t p = 2; p <= n; ++p) {
    if (seen[p]) continue;
    for (std::size_t k = p; k <= n; k += p) {
      seen[k] = true;
      rad[k] *= p;
    }
  }
  rad[1] = 1;

  std::vector<AbcTriple> hits;
  for (std::size_t c = 3; c <= n; ++c) {
    for (std::size_t a = 1; a * 2 <= c; ++a) {
      std::size_t b = c - a;
      if (std::gcd(a, c) != 1) continue;
      // quality > 1 iff rad(abc) < c, an exact integer comparison.
      unsigned __int128 r =
          static_cast<unsigned __int128>(rad[a]) * rad[b] * rad[c];
      if (r >= c) continue;
      AbcTriple t;
      t.a = Int(static_cast<std::uint64_t>(a));
      t.b = Int(static_cast<std::uint64_t>(b));
      t.c = Int(static_cast<std::uint64_t>(c));
      t.rad = Int(static_cast<std::uint64_t>(r));
      hits.push_back(std::move(t));
    }
  }

  std::sort(hits.begin(), hits.end(), [](const AbcTriple& x, const AbcTriple& y) {
    int c = compare_quality(x, y);
    if (c != 0) return c > 0;
    if (x.c != y.c) return x.c < y.c;
    return x.a < y.a;
  });
  if (hits.size() > top_k) hits.resize(top_k);
  return hits;
}

// Margin of the truncated-counting inequality at x for a tolerance eps:
//   sum over finite p outside S of the truncated local heights of x against
//   0, 1, and infinity, minus (1 - eps) h(x).
// A large negative margin would witness failure; the scan reports extremes.
inline ScaledLog abc_truncated_margin(const Rat& x, const PlaceSet& S, const Rat& eps,
                                      const FactorEffort& effort = {}) {
  if (sgn(x) == 0 || x == 1)
    throw input_error("abc_truncated_margin: x must avoid 0 and 1");
  if (sgn(eps) < 0 || eps > 1) throw input_error("abc_truncated_margin: eps must lie in [0, 1]");

  // Contributing primes divide num(x), num(x-1), or den(x); each adds log p
  // per marked point it witnesses.
  Rat acc = 1;
  auto add_primes = [&](const Int& w) {
    if (abs(w) == 1) return;
    for (const auto& [p, e] : factor(Rat(abs(w)), effort).exponents)
      if (!S.contains_prime(p)) acc *= Rat(p);
  };
  add_primes(num(x));
  add_primes(num(x - 1));
  add_primes(den(x));
  LogRat lhs(acc);

  Int hx = std::max(Int(abs(num(x))), den(x));
  // (1 - eps) h(x) = log(hx^(q - p)) / q for eps = p/q.
  Int q = den(eps), p = num(eps);
  ScaledLog rhs(LogRat(ipow(hx, (q - p).convert_to<std::uint64_t>())), q);
  return ScaledLog(lhs) - rhs;
}

}  // namespace fareytower

#pragma once

// Companion-point construction: given a and a blowup count n, build the
// integer b whose prime exponents make the tower contribution at every
// prime p of a - 1 sit exactly floor(n_p/2) log p above the local height
// of the line Y = 0. The per-prime identity and the height bound on b are
// checked exactly and recorded, never assumed.

#include <cstdint>
#include <optional>
#include <vector>

#include "fareytower/error.hpp"
#include "fareytower/factor.hpp"
#include "fareytower/heights.hpp"
#include "fareytower/lograt.hpp"
#include "fareytower/places.hpp"
#include "fareytower/rat.hpp"
#include "fareytower/tower.hpp"

namespace fareytower {

struct T2PrimeRecord {
  Int p;
  std::uint64_t n_p = 0;     // multiplicity of p in a - 1
  std::uint64_t m_p = 0;     // exponent of p in b
  LogRat tower_sum;          // sum of the tower's local contributions at p
  LogRat line_height;        // local height of Y = 0 at [a : b : 1]
  LogRat excess;             // tower_sum - line_height
  LogRat expected_excess;    // floor(n_p / 2) log p
  bool identity_ok = false;  // excess == expected_excess
  std::optional<Rat> slope;  // n_p / m_p when m_p > 0
};

struct T2Construction {
  Rat a;
  int n = 0;
  PlaceSet S;
  bool rational_variant = false;
  Tower tower;     // final exceptional slope 2/(2n - 3)
  Rat difference;  // a - 1
  // Cofactor of a - 1 after the recorded prime powers are divided out. For
  // integer a this is an S-unit; in the rational variant it keeps the
  // denominator of a.
  Rat delta;
  Int b = 1;
  ProjPoint point = ProjPoint::plane_point(Rat(2), Rat(1));
  std::vector<T2PrimeRecord> primes;
  LogRat height_b;
  bool height_bound_ok = false;  // h(b) <= n h(a - 1)

  bool identities_ok() const {
    for (const auto& r : primes)
      if (!r.identity_ok) return false;
    return height_bound_ok;
  }
};

// Exponent of p in b for a prime with multiplicity n_p in a - 1.
inline std::uint64_t t2_exponent(std::uint64_t n_p, int n) {
  if (n < 3) throw input_error("t2_exponent: need n >= 3");
  std::uint64_t w = 2 * static_cast<std::uint64_t>(n) - 3;
  if (n_p <= 1) return 0;
  if (n_p % 2 == 0) return (n_p / 2) * w;
  return (n_p * w - 1) / 2;
}

// Build the companion point for a. With rational_variant the input may be a
// fraction A/B; the primes of A - B away from S then play the role the
// primes of a - 1 play for integers, with the same exponent rule.
inline T2Construction theorem2_construct(const Rat& a, int n, const PlaceSet& S,
                                         bool rational_variant = false,
                                         const FactorEffort& effort = {}) {
  if (n < 3) throw input_error("theorem2_construct: need n >= 3");
  if (sgn(a) == 0 || a == 1) throw input_error("theorem2_construct: a must avoid 0 and 1");
  if (!rational_variant && den(a) != 1)
    throw input_error("theorem2_construct: a must be an integer unless the rational variant is on");

  T2Construction out{a,
                     n,
                     S,
                     rational_variant,
                     theorem2_tower(n, Rat(1)),
                     a - 1,
                     a - 1,
                     Int(1),
                     ProjPoint::plane_point(Rat(2), Rat(1)),
                     {},
                     LogRat(),
                     false};

  // Primes of the reduced numerator of a - 1; for a = A/B reduced this is
  // A - B, whose primes divide neither A nor B.
  Int d = abs(num(out.difference));
  if (d != 1) {
    for (const auto& [p, e] : factor(Rat(d), effort).exponents) {
      if (S.contains_prime(p)) continue;
      T2PrimeRecord rec;
      rec.p = p;
      rec.n_p = e.convert_to<std::uint64_t>();
      rec.m_p = t2_exponent(rec.n_p, n);
      rec.expected_excess = log_pow(p, Int(rec.n_p / 2));
      if (rec.m_p > 0) rec.slope = Rat(Int(rec.n_p), Int(rec.m_p));
      out.b *= ipow(p, rec.m_p);
      out.delta /= pow_rat(Rat(p), static_cast<std::int64_t>(rec.n_p));
      out.primes.push_back(std::move(rec));
    }
  }

  out.point = ProjPoint::plane_point(a, Rat(out.b));
  for (auto& rec : out.primes) {
    Place v = Place::finite_unchecked(rec.p);
    for (int j = 1; j <= n; ++j) rec.tower_sum += out.tower.local_contrib(j, a, Rat(out.b), v);
    rec.line_height = local_height_line(LineDivisor::coordinate_y(), out.point, v);
    rec.excess = rec.tower_sum - rec.line_height;
    rec.identity_ok = rec.excess == rec.expected_excess;
  }

  out.height_b = LogRat(out.b);
  out.height_bound_ok = out.height_b <= height(out.difference).scaled_by(n);
  return out;
}

// Two ledger rows per construction: the one-power-off inequality (the summed
// per-prime excesses against eps * max height plus the away-from-S size of
// a) and the final counting inequality, both tabulated exactly with their
// margins. The gcd term over S that the derivation discards is reported
// alongside rather than folded in.
struct SaturationRow {
  Rat a;
  int n = 0;
  Int b = 1;
  LogRat excess_sum;        // sum over primes of floor(n_p/2) log p
  ScaledLog excess_bound;   // eps * max(h(a), h(b)) + away-from-S size of a
  ScaledLog excess_margin;  // excess_sum - excess_bound
  LogRat dropped_gcd;       // sum over v in S of gcd_v+(a - 1, b)
  LogRat final_lhs;         // S-part of a - 1 plus even-part mass of the primes
  ScaledLog final_bound;    // (1 + 2n) eps h(a) + 3 * away-from-S size of a
  ScaledLog final_margin;   // final_lhs - final_bound
};

inline SaturationRow saturation_row(const T2Construction& c, const Rat& eps) {
  if (sgn(eps) <= 0) throw input_error("saturation_row: eps must be positive");
  SaturationRow row;
  row.a = c.a;
  row.n = c.n;
  row.b = c.b;

  for (const auto& rec : c.primes) row.excess_sum += rec.expected_excess;

  LogRat away = prime_to_S_log(c.a, c.S);
  LogRat hmax = max(height(c.a), c.height_b);
  row.excess_bound =
      ScaledLog(hmax.scaled_by(num(eps)), den(eps)) + ScaledLog(away);
  row.excess_margin = ScaledLog(row.excess_sum) - row.excess_bound;

  row.dropped_gcd = gcd_plus({ExtRat::of(c.difference), ExtRat::of(Rat(c.b))},
                             Place::infinite_place());
  for (const Int& p : c.S.finite_primes())
    row.dropped_gcd += gcd_plus({ExtRat::of(c.difference), ExtRat::of(Rat(c.b))},
                                Place::finite_unchecked(p));

  row.final_lhs = Place::infinite_place().valuation_plus(c.difference);
  for (const Int& p : c.S.finite_primes())
    row.final_lhs += Place::finite_unchecked(p).valuation_plus(c.difference);
  for (const auto& rec : c.primes) {
    row.final_lhs += log_pow(rec.p, Int(rec.n_p));
    if (rec.n_p % 2 == 1) row.final_lhs -= log_pow(rec.p, Int(1));
  }

  Int coeff = Int(1 + 2 * c.n) * num(eps);
  row.final_bound = ScaledLog(height(c.a).scaled_by(coeff), den(eps)) +
                    ScaledLog(away.scaled_by(Int(3)));
  row.final_margin = ScaledLog(row.final_lhs) - row.final_bound;
  return row;
}

inline std::vector<SaturationRow> saturation_report(const std::vector<T2Construction>& cs,
                                                    const Rat& eps) {
  std::vector<SaturationRow> rows;
  rows.reserve(cs.size());
  for (const auto& c : cs) rows.push_back(saturation_row(c, eps));
  return rows;
}

}  // namespace fareytower

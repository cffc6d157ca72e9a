#pragma once

// Box scans of the main inequality: every point is evaluated exactly, the
// extremal set and the fitted constant are selected by exact comparison
// (doubles only screen candidates, with a margin far above their certified
// error), and chunked work merges in index order so results are identical
// for every worker count. A machine-word evaluation path handles integer
// boxes; it feeds candidates back through the exact evaluator, so recorded
// values never depend on which path ran.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fareytower/error.hpp"
#include "fareytower/factor.hpp"
#include "fareytower/heights.hpp"
#include "fareytower/lograt.hpp"
#include "fareytower/parallel.hpp"
#include "fareytower/places.hpp"
#include "fareytower/rat.hpp"
#include "fareytower/stern_brocot.hpp"
#include "fareytower/tower.hpp"

namespace fareytower {

struct Range {
  Int lo, hi;  // inclusive
};

struct ScanConfig {
  Range a_num{Int(2), Int(50)};
  Range a_den{Int(1), Int(1)};
  Range b_num{Int(1), Int(50)};
  Range b_den{Int(1), Int(1)};
  PlaceSet S;
  Rat eps = Rat(1, 10);
  std::string tower_shape = "chain:4";
  std::vector<Rat> centers = {Rat(1)};
  int jobs = 1;
  bool record_points = true;
  std::size_t top_k = 10;
  bool force_generic = false;  // disable the machine-word path (used by tests)
  FactorEffort effort;
};

// "chain:N", "t2:N", or "custom:f1,f2,..." where each f is the fraction the
// next blowup sits over; the list starts after the initial blowup, and each
// fraction must be the mediant of a currently available crossing.
inline Tower parse_tower_shape(const std::string& shape, const Rat& center = Rat(1)) {
  std::size_t colon = shape.find(':');
  std::string kind = shape.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : shape.substr(colon + 1);
  auto blowups = [&]() {
    Int n = parse_int(rest);
    if (n < 1 || n > 64) throw input_error("parse_tower_shape: blowup count out of range");
    return n.convert_to<int>();
  };
  if (kind == "chain") return chain_tower(blowups(), center);
  if (kind == "t2") return theorem2_tower(blowups(), center);
  if (kind == "custom") {
    Tower t(center);
    std::size_t parsed = 0;
    std::size_t start = 0;
    while (start < rest.size()) {
      std::size_t comma = rest.find(',', start);
      std::string tok = rest.substr(start, comma == std::string::npos ? comma : comma - start);
      start = comma == std::string::npos ? rest.size() : comma + 1;
      if (tok.empty()) continue;
      Rat f = parse_rat(tok);
      if (sgn(f) < 0 || f > 1) throw input_error("parse_tower_shape: fraction outside [0, 1]");
      Farey target(Int(num(f)), Int(den(f)));
      bool found = false;
      for (const FareyInterval& I : t.crossings()) {
        if (mediant(I) == target) {
          t.blow_up(I);
          found = true;
          break;
        }
      }
      if (!found)
        throw input_error("parse_tower_shape: " + target.str() +
                          " is not the mediant of any current crossing");
      ++parsed;
    }
    if (parsed == 0) throw input_error("parse_tower_shape: empty custom tower");
    return t;
  }
  throw input_error("parse_tower_shape: unknown shape '" + shape + "'");
}

inline TowerSet tower_set_for(const ScanConfig& cfg) {
  std::vector<Tower> ts;
  ts.reserve(cfg.centers.size());
  for (const Rat& c : cfg.centers) ts.push_back(parse_tower_shape(cfg.tower_shape, c));
  return TowerSet(std::move(ts));
}

struct PointEval {
  LogRat lhs;
  ScaledLog rhs;
  ScaledLog margin;  // lhs - rhs
};

inline PointEval evaluate_vojta_point(const TowerSet& ts, const Rat& a, const Rat& b,
                                      const PlaceSet& S, const Rat& eps,
                                      const FactorEffort& effort = {}) {
  PointEval e;
  e.lhs = lhs_vojta(ts, a, b, S, effort);
  e.rhs = rhs_vojta(a, b, S, eps);
  e.margin = ScaledLog(e.lhs) - e.rhs;
  return e;
}

struct VojtaPoint {
  Rat a, b;
  LogRat lhs;
  ScaledLog rhs;
  ScaledLog margin;
  double margin_float = 0;  // screening value; certified error far below the screen
  std::size_t chunk = 0;
  std::uint64_t seq = 0;
};

struct ViolationRecord {
  Rat a, b, center;
  Int p;
  LogRat lhs, bound;
};

struct VojtaScanResult {
  std::vector<VojtaPoint> points;    // all evaluated points, when recorded
  std::vector<VojtaPoint> extremal;  // top_k by margin, best first
  std::optional<VojtaPoint> fitted;  // margin maximum: the smallest valid constant
  std::vector<ViolationRecord> violations;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;
  std::size_t chunks = 0;
};

namespace detail {

// Doubles order candidates only when they differ by more than this; anything
// closer is decided exactly. Certified float error is below 1e-11 here, so
// a screen decision always agrees with the exact order.
inline constexpr double kMarginScreen = 1e-9;

// Strict "better" order: margin descending, then origin position ascending.
// Equivalent to the exact lexicographic order; see kMarginScreen.
inline bool better_vojta(const VojtaPoint& x, const VojtaPoint& y) {
  if (x.margin_float > y.margin_float + kMarginScreen) return true;
  if (x.margin_float + kMarginScreen < y.margin_float) return false;
  int c = x.margin.compare(y.margin);
  if (c != 0) return c > 0;
  if (x.chunk != y.chunk) return x.chunk < y.chunk;
  return x.seq < y.seq;
}

template <typename R, typename Better>
void topk_insert(std::vector<R>& kept, std::size_t k, R rec, Better better) {
  auto it = std::upper_bound(kept.begin(), kept.end(), rec,
                             [&](const R& v, const R& e) { return better(v, e); });
  kept.insert(it, std::move(rec));
  if (kept.size() > k) kept.pop_back();
}

inline void validate_ranges(const ScanConfig& cfg, bool with_b) {
  auto check = [](const Range& r, bool den, const char* name) {
    if (r.lo > r.hi) throw input_error(std::string("scan: empty ") + name + " range");
    if (den && r.lo < 1) throw input_error(std::string("scan: ") + name + " must be >= 1");
  };
  check(cfg.a_num, false, "a numerator");
  check(cfg.a_den, true, "a denominator");
  if (with_b) {
    check(cfg.b_num, false, "b numerator");
    check(cfg.b_den, true, "b denominator");
  }
  if (sgn(cfg.eps) <= 0) throw input_error("scan: eps must be positive");
  if (cfg.top_k < 1) throw input_error("scan: top_k must be >= 1");
  if (cfg.jobs < 1) throw input_error("scan: jobs must be >= 1");
}

inline std::uint64_t range_count(const Range& r) {
  return (r.hi - r.lo + 1).convert_to<std::uint64_t>();
}

// Machine-word evaluation data for one tower.
struct FastTower {
  std::int64_t center = 0;
  bool chain = true;
  int n = 1;
  // Creating intervals of the blowups past the first: lo.p, lo.q, hi.p, hi.q.
  std::vector<std::array<std::int64_t, 4>> deep;
};

struct FastSetup {
  bool usable = false;
  std::vector<FastTower> towers;
  std::vector<std::int64_t> s_primes;
  std::int64_t en = 0, ed = 1;  // eps as a fraction
  std::uint32_t spf_limit = 0;  // bound on any gcd the scan can meet
};

inline std::int64_t to_i64(const Int& v) { return v.convert_to<std::int64_t>(); }

inline FastSetup fast_setup(const ScanConfig& cfg, const TowerSet& ts) {
  FastSetup fs;
  if (cfg.force_generic) return fs;
  if (cfg.a_den.lo != 1 || cfg.a_den.hi != 1 || cfg.b_den.lo != 1 || cfg.b_den.hi != 1) return fs;
  // Magnitude caps keep every intermediate inside 64 bits: |a b| stays below
  // 2^52 and any gcd the sieve must factor below 2^22.
  const Int mag_cap = Int(1) << 25;
  const Int sieve_cap = Int(1) << 22;
  if (num(cfg.eps) > mag_cap || den(cfg.eps) > mag_cap) return fs;
  Int max_a = std::max(Int(abs(cfg.a_num.lo)), Int(abs(cfg.a_num.hi)));
  Int max_b = std::max(Int(abs(cfg.b_num.lo)), Int(abs(cfg.b_num.hi)));
  Int max_c = 0;
  for (const Tower& t : ts.towers()) {
    if (den(t.center()) != 1) return fs;
    max_c = std::max(max_c, Int(abs(num(t.center()))));
  }
  if (max_a > mag_cap || max_b > mag_cap || max_c > mag_cap) return fs;
  // The sieve only ever factors gcd values, which the smaller side bounds.
  Int g_cap = std::min(Int(max_a + max_c), max_b);
  if (g_cap > sieve_cap) return fs;

  fs.usable = true;
  fs.spf_limit = static_cast<std::uint32_t>(std::max<std::int64_t>(2, to_i64(g_cap)));
  fs.en = to_i64(num(cfg.eps));
  fs.ed = to_i64(den(cfg.eps));
  for (const Int& p : cfg.S.finite_primes()) {
    if (p > mag_cap) { fs.usable = false; return fs; }
    fs.s_primes.push_back(to_i64(p));
  }
  for (const Tower& t : ts.towers()) {
    FastTower ft;
    ft.center = to_i64(num(t.center()));
    ft.chain = t.is_chain();
    ft.n = t.n_blowups();
    for (int j = 2; j <= ft.n; ++j) {
      const FareyInterval& I = *t.node(j).creating;
      ft.deep.push_back({to_i64(I.lo.p), to_i64(I.lo.q), to_i64(I.hi.p), to_i64(I.hi.q)});
    }
    fs.towers.push_back(std::move(ft));
  }
  return fs;
}

inline int ord_i64(std::int64_t n, std::int64_t p) {
  int e = 0;
  while (n % p == 0) { n /= p; ++e; }
  return e;
}

}  // namespace detail

// Scan the box for the multi-tower inequality: exact per-point values, the
// extremal margins, the fitted constant, and any per-prime bound violations
// (the bound is proven, so that list should stay empty; a nonempty list is
// reported, not suppressed).
inline VojtaScanResult vojta_scan(const ScanConfig& cfg) {
  detail::validate_ranges(cfg, true);
  TowerSet ts = tower_set_for(cfg);
  detail::FastSetup fs = detail::fast_setup(cfg, ts);

  const std::uint64_t n_ad = detail::range_count(cfg.a_den);
  const std::uint64_t n_bn = detail::range_count(cfg.b_num);
  const std::uint64_t n_bd = detail::range_count(cfg.b_den);
  const std::size_t n_chunks = static_cast<std::size_t>(detail::range_count(cfg.a_num));

  struct Chunk {
    std::vector<VojtaPoint> points, extremal;
    std::vector<ViolationRecord> violations;
    std::uint64_t evaluated = 0, skipped = 0;
  };

  auto exact_record = [&](const Rat& a, const Rat& b, std::size_t chunk,
                          std::uint64_t seq) {
    PointEval e = evaluate_vojta_point(ts, a, b, cfg.S, cfg.eps, cfg.effort);
    VojtaPoint r{a, b, e.lhs, e.rhs, e.margin, e.margin.to_float().value, chunk, seq};
    return r;
  };

  auto run_chunk = [&](std::size_t ci) {
    Chunk out;
    Int an = cfg.a_num.lo + Int(static_cast<std::uint64_t>(ci));

    if (fs.usable) {
      std::int64_t a = detail::to_i64(an);
      std::uint64_t row = n_bn;
      bool bad_a = a == 0;
      for (const auto& ft : fs.towers) bad_a = bad_a || a == ft.center;
      if (bad_a) {
        out.skipped += row;
        return out;
      }
      thread_local SpfTable spf(2);
      thread_local std::vector<std::pair<std::uint32_t, std::uint32_t>> pf;
      if (spf.limit() < fs.spf_limit) spf = SpfTable(fs.spf_limit);

      std::uint64_t seq = 0;
      const std::int64_t b_lo = detail::to_i64(cfg.b_num.lo);
      const std::int64_t b_hi = detail::to_i64(cfg.b_num.hi);
      for (std::int64_t b = b_lo; b <= b_hi; ++b) {
        if (b == 0) {
          ++out.skipped;
          continue;
        }
        ++out.evaluated;
        std::uint64_t this_seq = seq++;
        double lhsf = 0;
        for (std::size_t ti = 0; ti < fs.towers.size(); ++ti) {
          const auto& ft = fs.towers[ti];
          std::int64_t d = a - ft.center;
          std::uint64_t g = std::gcd(static_cast<std::uint64_t>(std::abs(d)),
                                     static_cast<std::uint64_t>(std::abs(b)));
          if (g > 1) lhsf += std::log(static_cast<double>(g));
          if (ft.n < 2 || g == 1) continue;
          spf.factor(static_cast<std::uint32_t>(g), pf);
          for (const auto& [p, eg] : pf) {
            std::int64_t pp = p;
            std::int64_t t = detail::ord_i64(std::abs(d), pp);
            std::int64_t u = detail::ord_i64(std::abs(b), pp);
            std::int64_t deep = 0;
            for (const auto& I : ft.deep) {
              std::int64_t c = std::min(I[1] * t - I[0] * u, I[2] * u - I[3] * t);
              if (c > 0) deep += c;
            }
            // Per-prime bound, valid at every prime of the gcd.
            std::int64_t bound = u + (ft.chain ? 0 : t - 1);
            if (std::min(t, u) + deep > bound) {
              PerPrimeBound pb = per_prime_bound(ts.towers()[ti], Rat(a), Rat(b), Int(pp));
              if (!pb.ok)
                out.violations.push_back(
                    {Rat(a), Rat(b), Rat(ft.center), Int(pp), pb.lhs, pb.bound});
            }
            bool in_s = false;
            for (std::int64_t sp : fs.s_primes) in_s = in_s || sp == pp;
            if (!in_s && deep > 0) lhsf += static_cast<double>(deep) * std::log(static_cast<double>(pp));
          }
        }
        std::uint64_t M = static_cast<std::uint64_t>(std::max(std::abs(a), std::abs(b)));
        std::uint64_t T = static_cast<std::uint64_t>(std::abs(a)) *
                          static_cast<std::uint64_t>(std::abs(b));
        for (std::int64_t sp : fs.s_primes)
          while (T % static_cast<std::uint64_t>(sp) == 0) T /= static_cast<std::uint64_t>(sp);
        double rhsf = (static_cast<double>(fs.en) * std::log(static_cast<double>(M)) +
                       static_cast<double>(fs.ed) * std::log(static_cast<double>(T))) /
                      static_cast<double>(fs.ed);
        double mf = lhsf - rhsf;

        if (cfg.record_points) {
          VojtaPoint rec = exact_record(Rat(a), Rat(b), ci, this_seq);
          detail::topk_insert(out.extremal, cfg.top_k, rec, detail::better_vojta);
          out.points.push_back(std::move(rec));
        } else {
          if (out.extremal.size() >= cfg.top_k &&
              mf < out.extremal.back().margin_float - detail::kMarginScreen)
            continue;
          detail::topk_insert(out.extremal, cfg.top_k, exact_record(Rat(a), Rat(b), ci, this_seq),
                              detail::better_vojta);
        }
      }
      return out;
    }

    // Generic path: rational grid through the exact evaluator.
    using boost::multiprecision::gcd;
    std::uint64_t seq = 0;
    for (Int ad = cfg.a_den.lo; ad <= cfg.a_den.hi; ++ad) {
      if (gcd(Int(abs(an)), ad) != 1) continue;
      Rat a(an, ad);
      for (Int bn = cfg.b_num.lo; bn <= cfg.b_num.hi; ++bn) {
        for (Int bd = cfg.b_den.lo; bd <= cfg.b_den.hi; ++bd) {
          if (gcd(Int(abs(bn)), bd) != 1) continue;
          Rat b(bn, bd);
          if (!ts.is_valid_point(a, b)) {
            ++out.skipped;
            continue;
          }
          ++out.evaluated;
          std::uint64_t this_seq = seq++;
          VojtaPoint rec = exact_record(a, b, ci, this_seq);

          for (const Tower& t : ts.towers()) {
            Int g = gcd(Int(abs(num(a - t.center()))), Int(abs(num(b))));
            if (g == 1) continue;
            for (const auto& [p, e] : factor(Rat(g), cfg.effort).exponents) {
              PerPrimeBound pb = per_prime_bound(t, a, b, p);
              if (!pb.ok)
                out.violations.push_back({a, b, t.center(), p, pb.lhs, pb.bound});
            }
          }

          detail::topk_insert(out.extremal, cfg.top_k, rec, detail::better_vojta);
          if (cfg.record_points) out.points.push_back(std::move(rec));
        }
      }
    }
    return out;
  };

  std::vector<Chunk> parts = chunked_map<Chunk>(n_chunks, cfg.jobs, run_chunk);

  VojtaScanResult res;
  res.chunks = n_chunks;
  for (Chunk& c : parts) {
    res.evaluated += c.evaluated;
    res.skipped += c.skipped;
    for (auto& v : c.violations) res.violations.push_back(std::move(v));
    for (auto& p : c.points) res.points.push_back(std::move(p));
    for (auto& r : c.extremal)
      detail::topk_insert(res.extremal, cfg.top_k, std::move(r), detail::better_vojta);
  }
  if (!res.extremal.empty()) res.fitted = res.extremal.front();
  return res;
}

// One-variable scan of the approximation excess
//   sum over v in S of v+(a - 1)  -  eps h(a)  -  (away-from-S size of a),
// which the finiteness statement bounds above; the running maximum is the
// fitted constant. Exact at every point; no factorization is needed.
struct RidoutPoint {
  Rat a;
  ScaledLog excess;
  double excess_float = 0;
  std::size_t chunk = 0;
  std::uint64_t seq = 0;
};

struct RidoutScanResult {
  std::vector<RidoutPoint> points;
  std::vector<RidoutPoint> extremal;
  std::optional<RidoutPoint> fitted;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;
  std::size_t chunks = 0;
};

inline ScaledLog ridout_excess(const Rat& a, const PlaceSet& S, const Rat& eps) {
  if (sgn(a) == 0 || a == 1) throw input_error("ridout_excess: a must avoid 0 and 1");
  if (sgn(eps) <= 0) throw input_error("ridout_excess: eps must be positive");
  LogRat close = Place::infinite_place().valuation_plus(a - 1);
  for (const Int& p : S.finite_primes())
    close += Place::finite_unchecked(p).valuation_plus(a - 1);
  LogRat away = prime_to_S_log(a, S);
  ScaledLog eh(height(a).scaled_by(num(eps)), den(eps));
  return ScaledLog(close - away) - eh;
}

inline RidoutScanResult ridout_scan(const ScanConfig& cfg) {
  detail::validate_ranges(cfg, false);

  struct Chunk {
    std::vector<RidoutPoint> points, extremal;
    std::uint64_t evaluated = 0, skipped = 0;
  };
  const std::size_t n_chunks = static_cast<std::size_t>(detail::range_count(cfg.a_num));

  auto better = [](const RidoutPoint& x, const RidoutPoint& y) {
    if (x.excess_float > y.excess_float + detail::kMarginScreen) return true;
    if (x.excess_float + detail::kMarginScreen < y.excess_float) return false;
    int c = x.excess.compare(y.excess);
    if (c != 0) return c > 0;
    if (x.chunk != y.chunk) return x.chunk < y.chunk;
    return x.seq < y.seq;
  };

  auto run_chunk = [&](std::size_t ci) {
    Chunk out;
    Int an = cfg.a_num.lo + Int(static_cast<std::uint64_t>(ci));
    using boost::multiprecision::gcd;
    std::uint64_t seq = 0;
    for (Int ad = cfg.a_den.lo; ad <= cfg.a_den.hi; ++ad) {
      if (gcd(Int(abs(an)), ad) != 1) continue;
      Rat a(an, ad);
      if (sgn(a) == 0 || a == 1) {
        ++out.skipped;
        continue;
      }
      ++out.evaluated;
      RidoutPoint rec{a, ridout_excess(a, cfg.S, cfg.eps), 0, ci, seq++};
      rec.excess_float = rec.excess.to_float().value;
      detail::topk_insert(out.extremal, cfg.top_k, rec, better);
      if (cfg.record_points) out.points.push_back(std::move(rec));
    }
    return out;
  };

  std::vector<Chunk> parts = chunked_map<Chunk>(n_chunks, cfg.jobs, run_chunk);
  RidoutScanResult res;
  res.chunks = n_chunks;
  for (Chunk& c : parts) {
    res.evaluated += c.evaluated;
    res.skipped += c.skipped;
    for (auto& p : c.points) res.points.push_back(std::move(p));
    for (auto& r : c.extremal) detail::topk_insert(res.extremal, cfg.top_k, std::move(r), better);
  }
  if (!res.extremal.empty()) res.fitted = res.extremal.front();
  return res;
}

// The elementary clamped sum: alpha + sum_{i=1..ell} max(0, min(alpha, 1 - i alpha))
// never exceeds 1, with equality exactly when alpha > 0 and ell reaches the
// threshold index m determined by 1/(m+1) <= alpha < 1/m.
struct LemmaCheck {
  Rat alpha;
  Int ell;
  Rat sum;
  Int m;          // -1 when alpha = 0
  bool holds;     // sum <= 1
  bool equality;  // sum == 1
  bool equality_matches_class;
};

inline LemmaCheck lemma_elementary_check(const Rat& alpha, const Int& ell) {
  if (sgn(alpha) < 0 || alpha > 1)
    throw input_error("lemma_elementary_check: alpha must lie in [0, 1]");
  if (ell < 0) throw input_error("lemma_elementary_check: ell must be >= 0");

  LemmaCheck r;
  r.alpha = alpha;
  r.ell = ell;
  r.sum = alpha;
  // Terms vanish once 1 - i alpha <= 0, so the loop is bounded by both ell
  // and 1/alpha; alpha = 0 contributes nothing at all.
  if (sgn(alpha) > 0) {
    for (Int i = 1; i <= ell; ++i) {
      Rat tail = 1 - Rat(i) * alpha;
      if (sgn(tail) <= 0) break;
      r.sum += std::min(alpha, tail);
    }
  }
  r.m = sgn(alpha) == 0 ? Int(-1) : Int((den(alpha) - 1) / num(alpha));
  r.holds = r.sum <= 1;
  r.equality = r.sum == 1;
  bool predicted = sgn(alpha) > 0 && ell >= r.m;
  r.equality_matches_class = r.equality == predicted;
  return r;
}

}  // namespace fareytower

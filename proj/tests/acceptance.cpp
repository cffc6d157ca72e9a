// Acceptance gate: eleven criteria, one PASS/FAIL line each, nonzero exit on
// any failure. Every numeric check is exact; time budgets are part of the
// criteria and enforced here.
#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fareytower/abc.hpp"
#include "fareytower/construct.hpp"
#include "fareytower/factor.hpp"
#include "fareytower/heights.hpp"
#include "fareytower/places.hpp"
#include "fareytower/rat.hpp"
#include "fareytower/report.hpp"
#include "fareytower/scan.hpp"
#include "fareytower/stern_brocot.hpp"
#include "fareytower/tower.hpp"

namespace ft = fareytower;
using ft::Int;
using ft::Rat;

namespace {

struct Gate {
  int failures = 0;

  void run(int idx, const char* label, double budget_s,
           const std::function<bool(std::string&)>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < budget_s;
    bool pass = ok && in_time;
    if (!pass) ++failures;
    std::printf("%s %2d %s [%.2fs, budget %gs]%s%s\n", pass ? "PASS" : "FAIL", idx, label,
                secs, budget_s, detail.empty() ? "" : " ", detail.c_str());
    std::fflush(stdout);
  }
};

long ord_long(long n, long p) {
  long e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

void enumerate_towers(const ft::Tower& t, int max_blowups,
                      const std::function<void(const ft::Tower&)>& visit) {
  visit(t);
  if (t.n_blowups() >= max_blowups) return;
  for (const ft::FareyInterval& I : t.crossings()) {
    ft::Tower u = t;
    u.blow_up(I);
    enumerate_towers(u, max_blowups, visit);
  }
}

// Per-tower contribution table in units of log p: entry (t, u) is the sum of
// divisor contributions when ord_p(a - 1) = t and ord_p(b) = u. Exponents up
// to 9 cover integers below 2^10; values stay small enough for plain long.
constexpr long kMaxOrd = 9;

struct TowerTable {
  ft::Tower tower;
  std::array<long, (kMaxOrd + 1) * (kMaxOrd + 1)> lhs;

  long at(long t, long u) const {
    return lhs[static_cast<std::size_t>(t * (kMaxOrd + 1) + u)];
  }

  explicit TowerTable(ft::Tower tw) : tower(std::move(tw)) {
    std::vector<std::array<long, 4>> deep;
    for (int j = 2; j <= tower.n_blowups(); ++j) {
      const ft::FareyInterval& I = *tower.node(j).creating;
      deep.push_back({I.lo.p.convert_to<long>(), I.lo.q.convert_to<long>(),
                      I.hi.p.convert_to<long>(), I.hi.q.convert_to<long>()});
    }
    for (long t = 0; t <= kMaxOrd; ++t)
      for (long u = 0; u <= kMaxOrd; ++u) {
        long sum = std::min(t, u);
        for (const auto& d : deep)
          sum += std::max(0L, std::min(d[1] * t - d[0] * u, d[2] * u - d[3] * t));
        lhs[static_cast<std::size_t>(t * (kMaxOrd + 1) + u)] = sum;
      }
  }
};

// ------------------------------------------------------------ criterion 1 --

bool crit_sb(std::string& detail) {
  std::size_t total = 0;
  for (int n = 1; n <= 14; ++n) {
    std::vector<ft::Farey> fs = ft::level_fractions(n);
    if (fs.size() != (std::size_t{1} << (n - 1)) + 1) {
      detail = "wrong count at level " + std::to_string(n);
      return false;
    }
    total = fs.size();
    for (std::size_t i = 0; i + 1 < fs.size(); ++i)
      if (fs[i].q * fs[i + 1].p - fs[i].p * fs[i + 1].q != 1) {
        detail = "unimodularity broken at level " + std::to_string(n);
        return false;
      }
  }

  const char* level4[] = {"0/1", "1/4", "1/3", "2/5", "1/2", "3/5", "2/3", "3/4", "1/1"};
  std::vector<ft::Farey> l4 = ft::level_fractions(4);
  for (std::size_t i = 0; i < 9; ++i)
    if (l4[i].str() != level4[i]) {
      detail = "level-4 listing differs at slot " + std::to_string(i);
      return false;
    }

  int checked = 0;
  for (long q = 1; q <= 60; ++q)
    for (long p = 0; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      ++checked;
      if (ft::first_level(Rat(p, q)) > q) {
        detail = "first appearance of " + std::to_string(p) + "/" + std::to_string(q) +
                 " later than its denominator";
        return false;
      }
    }
  detail = "levels 1..14 (" + std::to_string(total) + " fractions at depth 14), level-4 " +
           "listing exact, first appearance for " + std::to_string(checked) + " fractions";
  return true;
}

// ------------------------------------------------------------ criterion 2 --

bool crit_phi(std::string& detail) {
  long alphas = 0, evals = 0;
  for (long q = 2; q <= 150; ++q)
    for (long p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      ++alphas;
      Rat alpha(p, q);
      const ft::FareyInterval last = ft::interval_chain(alpha).back();
      Rat lo = last.lo.value(), hi = last.hi.value();
      for (int j = 0; j < 50; ++j) {
        Rat x = lo + (hi - lo) * Rat(j, 49);
        if (ft::phi_direct(alpha, x) != ft::phi_closed(alpha, x)) {
          detail = "direct/closed mismatch at alpha " + ft::rat_str(alpha);
          return false;
        }
        ++evals;
      }
      if (ft::phi_direct(alpha, alpha) != Rat(q - 1, q)) {
        detail = "peak value wrong at alpha " + ft::rat_str(alpha);
        return false;
      }
      if (ft::phi_direct(alpha, lo) != Rat(Int(last.lo.q - 1), last.lo.q) ||
          ft::phi_direct(alpha, hi) != Rat(Int(last.hi.q - 1), last.hi.q)) {
        detail = "endpoint value wrong at alpha " + ft::rat_str(alpha);
        return false;
      }
    }
  detail = std::to_string(alphas) + " alphas with q <= 150, " + std::to_string(evals) +
           " paired samples, peak and endpoints exact";
  return true;
}

// ------------------------------------------------------------ criterion 3 --

bool crit_lemma(std::string& detail) {
  long checks = 0, equalities = 0;
  for (long q = 1; q <= 80; ++q)
    for (long p = 0; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      for (long ell = 0; ell <= 60; ++ell) {
        ft::LemmaCheck c = ft::lemma_elementary_check(Rat(p, q), Int(ell));
        ++checks;
        if (!c.holds) {
          detail = "inequality fails at alpha " + ft::rat_str(c.alpha) + ", ell " +
                   std::to_string(ell);
          return false;
        }
        bool predicted = ft::sgn(c.alpha) > 0 && c.m >= 0 && Int(ell) >= c.m;
        if (c.equality != predicted || !c.equality_matches_class) {
          detail = "equality classification wrong at alpha " + ft::rat_str(c.alpha) +
                   ", ell " + std::to_string(ell);
          return false;
        }
        if (c.equality) ++equalities;
      }
    }
  detail = std::to_string(checks) + " checks (q <= 80, ell <= 60), " +
           std::to_string(equalities) + " exact equalities, all in the predicted class";
  return true;
}

// ------------------------------------------------------------ criterion 4 --

bool crit_chain_bound(std::string& detail) {
  std::vector<TowerTable> chains;
  for (int n = 1; n <= 8; ++n) chains.emplace_back(ft::chain_tower(n));

  ft::SpfTable spf(301);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> fac;
  long combos = 0, spot = 0;
  for (long a = 2; a <= 300; ++a) {
    spf.factor(static_cast<std::uint32_t>(a - 1), fac);
    for (long b = 1; b <= 300; ++b) {
      for (const auto& [pu, tu] : fac) {
        long p = pu, t = tu, u = ord_long(b, p);
        for (const TowerTable& tt : chains) {
          ++combos;
          // The chain inequality has no (n_p - 1) slack: lhs <= ord_p(b).
          if (tt.at(t, u) > u) {
            detail = "violation at a=" + std::to_string(a) + " b=" + std::to_string(b) +
                     " p=" + std::to_string(p) + " n=" + std::to_string(tt.tower.n_blowups());
            return false;
          }
          if (combos % 99991 == 0) {
            ++spot;
            ft::PerPrimeBound r = ft::per_prime_bound(tt.tower, Rat(a), Rat(b), Int(p));
            if (!r.ok || !r.chain_form || !(r.lhs == ft::log_pow(Int(p), tt.at(t, u)))) {
              detail = "table disagrees with the exact evaluation at a=" + std::to_string(a) +
                       " b=" + std::to_string(b) + " p=" + std::to_string(p);
              return false;
            }
          }
        }
      }
    }
  }
  detail = std::to_string(combos) + " (a,b,p,n) combinations, zero violations, " +
           std::to_string(spot) + " exact spot checks; primes away from a-1 contribute 0";
  return true;
}

// ------------------------------------------------------------ criterion 5 --

bool crit_general_bound(std::string& detail) {
  std::vector<TowerTable> tables;
  enumerate_towers(ft::Tower{Rat(1)}, 7,
                   [&](const ft::Tower& t) { tables.emplace_back(t); });
  if (tables.size() != 874) {
    detail = "tower census is " + std::to_string(tables.size()) + ", expected 874";
    return false;
  }

  ft::SpfTable spf(201);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> fac;
  long combos = 0, spot = 0;
  for (long a = 2; a <= 200; ++a) {
    spf.factor(static_cast<std::uint32_t>(a - 1), fac);
    for (long b = 1; b <= 200; ++b) {
      for (const auto& [pu, tu] : fac) {
        long p = pu, t = tu, u = ord_long(b, p);
        long threshold = t - 1 + u;
        for (const TowerTable& tt : tables) {
          ++combos;
          if (tt.at(t, u) > threshold) {
            detail = "violation at a=" + std::to_string(a) + " b=" + std::to_string(b) +
                     " p=" + std::to_string(p);
            return false;
          }
          if (combos % 999983 == 0) {
            ++spot;
            ft::PerPrimeBound r = ft::per_prime_bound(tt.tower, Rat(a), Rat(b), Int(p));
            if (!r.ok || r.chain_form != tt.tower.is_chain() ||
                !(r.lhs == ft::log_pow(Int(p), tt.at(t, u)))) {
              detail = "table disagrees with the exact evaluation at a=" + std::to_string(a) +
                       " b=" + std::to_string(b) + " p=" + std::to_string(p);
              return false;
            }
          }
        }
      }
    }
  }
  detail = "874 towers <= 7 blowups, " + std::to_string(combos) +
           " (tower,a,b,p) combinations, zero violations, " + std::to_string(spot) +
           " exact spot checks";
  return true;
}

// ------------------------------------------------------------ criterion 6 --

bool crit_t2_identities(std::string& detail) {
  int constructions = 0;
  for (int n : {3, 4, 5})
    for (long p : {2L, 3L, 5L, 7L})
      for (std::uint64_t np = 2; np <= 9; ++np) {
        Int a = ft::ipow(Int(p), np) + 1;
        ft::T2Construction c = ft::theorem2_construct(Rat(a), n, ft::PlaceSet());
        ++constructions;
        if (c.primes.size() != 1 || c.primes[0].p != p || c.primes[0].n_p != np) {
          detail = "unexpected factorization for p=" + std::to_string(p) +
                   " n_p=" + std::to_string(np);
          return false;
        }
        if (!(c.primes[0].excess == ft::log_pow(Int(p), static_cast<long>(np / 2))) ||
            !c.primes[0].identity_ok) {
          detail = "excess identity fails at p=" + std::to_string(p) +
                   " n_p=" + std::to_string(np) + " n=" + std::to_string(n);
          return false;
        }
        // h(b) <= n h(a-1) + n log 2, compared as integers: b <= (2(a-1))^n.
        if (c.b > ft::ipow(Int(2) * (a - 1), static_cast<std::uint64_t>(n))) {
          detail = "height bound fails at p=" + std::to_string(p) +
                   " n_p=" + std::to_string(np) + " n=" + std::to_string(n);
          return false;
        }
        if (!c.height_bound_ok || !c.identities_ok()) {
          detail = "recorded flags fail at p=" + std::to_string(p) +
                   " n_p=" + std::to_string(np) + " n=" + std::to_string(n);
          return false;
        }
      }
  detail = std::to_string(constructions) +
           " constructions (n in {3,4,5}, p in {2,3,5,7}, n_p in 2..9), excess and height "
           "bounds exact";
  return true;
}

// ------------------------------------------------------------ criterion 7 --

bool crit_bookkeeping(std::string& detail) {
  long count = 0;
  bool all_ok = true;
  std::string bad;
  enumerate_towers(ft::Tower{Rat(1)}, 8, [&](const ft::Tower& t) {
    ++count;
    if (all_ok && !ft::check_divisor_bookkeeping(t).ok()) {
      all_ok = false;
      bad = "bookkeeping fails for a tower with " + std::to_string(t.n_blowups()) + " blowups";
    }
  });
  if (!all_ok) {
    detail = bad;
    return false;
  }
  if (count != 5914) {
    detail = "tower census is " + std::to_string(count) + ", expected 5914";
    return false;
  }
  ft::Tower two = ft::chain_tower(2);
  if (two.node(0).mult_pullback != 1 || two.node(1).mult_pullback != 1 ||
      two.node(2).mult_pullback != 2) {
    detail = "two-blowup pullback is not 1, 1, 2";
    return false;
  }
  detail = "5914 towers <= 8 blowups, expansion coefficients all 1, two-blowup pullback 1,1,2";
  return true;
}

// ------------------------------------------------------------ criterion 8 --

bool crit_heights(std::string& detail) {
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<long> nd(-1000000, 1000000), dd(1, 1000000);
  const ft::LineDivisor lines[] = {ft::LineDivisor::coordinate_x(),
                                   ft::LineDivisor::coordinate_y(),
                                   ft::LineDivisor::coordinate_z()};
  for (int i = 0; i < 1000; ++i) {
    long an = 0, bn = 0;
    while (an == 0) an = nd(rng);
    while (bn == 0) bn = nd(rng);
    ft::ProjPoint P = ft::ProjPoint::plane_point(Rat(an, dd(rng)), Rat(bn, dd(rng)));
    ft::LogRat h = ft::height(P);
    for (const ft::LineDivisor& F : lines) {
      ft::LogRat sum = ft::local_height_line(F, P, ft::Place::infinite_place());
      for (const auto& pe : ft::factor(Rat(F.evaluate(P))).exponents)
        sum = sum + ft::local_height_line(F, P, ft::Place::finite(pe.first));
      if (!(sum == h)) {
        detail = "decomposition mismatch at point " + P.str();
        return false;
      }
    }
  }
  detail = "1000 random points (coordinates up to 10^6), three lines each, sums exact";
  return true;
}

// ------------------------------------------------------------ criterion 9 --

struct OracleTriple {
  long a, b, c, rad;
};

bool crit_abc(std::string& detail) {
  const long c_max = 2000;
  // Independent radical table by naive per-integer trial division.
  std::vector<long> rad(static_cast<std::size_t>(c_max) + 1, 1);
  for (long k = 2; k <= c_max; ++k) {
    long m = k, r = 1;
    for (long d = 2; d * d <= m; ++d)
      if (m % d == 0) {
        r *= d;
        while (m % d == 0) m /= d;
      }
    if (m > 1) r *= m;
    rad[static_cast<std::size_t>(k)] = r;
  }

  std::vector<OracleTriple> oracle;
  for (long c = 2; c <= c_max; ++c)
    for (long a = 1; 2 * a <= c; ++a) {
      long b = c - a;
      if (std::gcd(a, b) != 1) continue;
      long r = rad[static_cast<std::size_t>(a)] * rad[static_cast<std::size_t>(b)] *
               rad[static_cast<std::size_t>(c)];
      if (r < c) oracle.push_back({a, b, c, r});
    }

  // Rank by quality using 100-digit logs; require a decisive gap everywhere
  // except identical (c, rad) pairs, which tie-break by (c, a).
  using HF = boost::multiprecision::cpp_bin_float_100;
  auto quality = [](const OracleTriple& t) {
    return HF(log(HF(t.c)) / log(HF(t.rad)));
  };
  std::vector<std::pair<HF, OracleTriple>> ranked;
  ranked.reserve(oracle.size());
  for (const OracleTriple& t : oracle) ranked.emplace_back(quality(t), t);
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    if (x.second.c != y.second.c) return x.second.c < y.second.c;
    return x.second.a < y.second.a;
  });
  for (std::size_t i = 0; i + 1 < ranked.size(); ++i) {
    const auto& [qx, tx] = ranked[i];
    const auto& [qy, ty] = ranked[i + 1];
    if (abs(qx - qy) < HF("1e-80") && (tx.c != ty.c || tx.rad != ty.rad)) {
      detail = "oracle cannot separate two qualities";
      return false;
    }
  }

  std::vector<ft::AbcTriple> scan = ft::abc_scan(Int(c_max));
  if (scan.size() != ranked.size()) {
    detail = "scan found " + std::to_string(scan.size()) + " triples, oracle " +
             std::to_string(ranked.size());
    return false;
  }
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const OracleTriple& o = ranked[i].second;
    if (scan[i].a != o.a || scan[i].b != o.b || scan[i].c != o.c || scan[i].rad != o.rad) {
      detail = "ranking differs at position " + std::to_string(i);
      return false;
    }
  }

  // The distinguished triple: quality log 81 / log 30, exactly above 129/100.
  auto it = std::find_if(scan.begin(), scan.end(), [](const ft::AbcTriple& t) {
    return t.a == 1 && t.b == 80 && t.c == 81;
  });
  if (it == scan.end() || it->rad != 30) {
    detail = "(1, 80, 81) with radical 30 is missing";
    return false;
  }
  double q = ft::quality_approx(*it).value;
  if (!(q > 1.292029 && q < 1.292031)) {
    detail = "(1, 80, 81) quality renders as " + std::to_string(q);
    return false;
  }
  if (ft::quality_vs_rational(*it, Rat(129, 100)) <= 0) {
    detail = "(1, 80, 81) quality does not exceed 129/100";
    return false;
  }
  detail = std::to_string(scan.size()) + " quality triples up to c = 2000 match the naive " +
           "oracle in content and order; (1,80,81) has radical 30 and quality > 129/100";
  return true;
}

// ----------------------------------------------------------- criterion 10 --

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool crit_determinism(std::string& detail) {
  std::filesystem::path tmp = "acceptance_tmp";
  std::filesystem::remove_all(tmp);
  std::filesystem::create_directories(tmp);

  ft::ScanConfig cfg;
  cfg.a_num = {Int(-99), Int(100)};
  cfg.b_num = {Int(-99), Int(100)};
  cfg.tower_shape = "chain:4";
  cfg.S = ft::PlaceSet({Int(2), Int(3)});
  cfg.eps = Rat(1, 10);
  cfg.record_points = true;
  cfg.top_k = 10;

  cfg.jobs = 1;
  ft::VojtaScanResult r1 = ft::vojta_scan(cfg);
  ft::write_vojta_report(r1, cfg, (tmp / "jobs1").string(), false);
  cfg.jobs = 8;
  ft::VojtaScanResult r8 = ft::vojta_scan(cfg);
  ft::write_vojta_report(r8, cfg, (tmp / "jobs8").string(), false);

  for (const char* suffix : {".jsonl", ".summary.json", ".extremal.csv"}) {
    std::string x = slurp(tmp / ("jobs1" + std::string(suffix)));
    std::string y = slurp(tmp / ("jobs8" + std::string(suffix)));
    if (x.empty() || x != y) {
      detail = std::string("report files differ: ") + suffix;
      return false;
    }
  }
  if (!r1.violations.empty()) {
    detail = "chain per-prime violations reported";
    return false;
  }
  detail = "200x200 box, " + std::to_string(r1.evaluated) +
           " points evaluated, all three report files byte-identical for jobs 1 and 8";
  return true;
}

// ----------------------------------------------------------- criterion 11 --

bool crit_fitted_monotone(std::string& detail) {
  ft::ScaledLog prev;
  bool have_prev = false;
  std::string fitted_list;
  for (int k = 6; k <= 11; ++k) {
    Int m = Int(1) << k;
    ft::ScanConfig cfg;
    cfg.a_num = {-m, m};
    cfg.b_num = {-m, m};
    cfg.tower_shape = "chain:4";
    cfg.S = ft::PlaceSet({Int(2), Int(3)});
    cfg.eps = Rat(1, 10);
    cfg.record_points = false;
    cfg.top_k = 10;
    cfg.jobs = 4;
    ft::VojtaScanResult res = ft::vojta_scan(cfg);
    if (!res.fitted) {
      detail = "no fitted constant at k = " + std::to_string(k);
      return false;
    }
    if (!res.violations.empty()) {
      detail = "chain per-prime violations at k = " + std::to_string(k);
      return false;
    }
    const ft::ScaledLog& cur = res.fitted->margin;
    if (have_prev && cur.compare(prev) < 0) {
      detail = "fitted constant decreased at k = " + std::to_string(k);
      return false;
    }
    fitted_list += (fitted_list.empty() ? "" : ", ") + std::to_string(cur.to_float().value);
    prev = cur;
    have_prev = true;
  }
  detail = "fitted C non-decreasing over k = 6..11: " + fitted_list;
  return true;
}

}  // namespace

int main() {
  Gate g;
  g.run(1, "Farey tree structure", 10, crit_sb);
  g.run(2, "tent profile closed form", 60, crit_phi);
  g.run(3, "clamped-sum inequality", 30, crit_lemma);
  g.run(4, "chain per-prime bound", 120, crit_chain_bound);
  g.run(5, "general per-prime bound", 300, crit_general_bound);
  g.run(6, "companion construction identities", 30, crit_t2_identities);
  g.run(7, "divisor bookkeeping", 60, crit_bookkeeping);
  g.run(8, "height decomposition", 30, crit_heights);
  g.run(9, "quality ranking oracle", 60, crit_abc);
  g.run(10, "scan determinism", 120, crit_determinism);
  g.run(11, "fitted constant monotonicity", 300, crit_fitted_monotone);
  if (g.failures == 0) {
    std::printf("acceptance: all 11 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g.failures);
  return 1;
}

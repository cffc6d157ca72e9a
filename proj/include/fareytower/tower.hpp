#pragma once

// Towers of point blowups over a surface, indexed by Stern-Brocot data.
// The base surface carries a marked line L (the y = 0 axis) and a marked
// center on it; the first blowup happens at that center, and every later
// blowup sits at a crossing of two already-present divisors. Crossings are
// unimodular intervals (a/b, c/d); blowing one up creates a divisor whose
// fraction is the mediant, and local intersection numbers against a point
// come from the interval's monomial pair:
//   contrib = max(0, min(b*t - a*u, c*u - d*t)),
// where t and u are the valuations of (x - center) and y at the point.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fareytower/error.hpp"
#include "fareytower/factor.hpp"
#include "fareytower/heights.hpp"
#include "fareytower/lograt.hpp"
#include "fareytower/places.hpp"
#include "fareytower/rat.hpp"
#include "fareytower/stern_brocot.hpp"

namespace fareytower {

// One divisor on the final surface. index 0 is the strict transform of the
// marked line L; index i >= 1 is the exceptional divisor E(i) of the i-th
// blowup. mult_pullback is E(i)'s coefficient in the pullback of the marked
// triangle (equals the fraction's denominator); discrepancy its coefficient
// in the relative canonical divisor (equals p + q - 1 for fraction p/q).
struct DivisorNode {
  int index;
  Farey fraction;
  std::optional<FareyInterval> creating;  // absent for L
  Int mult_pullback;
  Int discrepancy;
};

class Tower {
 public:
  explicit Tower(const Rat& center = Rat(1)) : center_(center) {
    if (sgn(center_) == 0) throw input_error("Tower: center must be nonzero");
    nodes_.push_back({0, Farey(), std::nullopt, Int(1), Int(0)});
    nodes_.push_back({1, Farey(Int(1), Int(1)), FareyInterval::root(), Int(1), Int(1)});
    by_fraction_[Farey()] = 0;
    by_fraction_[Farey(Int(1), Int(1))] = 1;
    crossings_.push_back(FareyInterval::unit());
  }

  const Rat& center() const { return center_; }
  int n_blowups() const { return static_cast<int>(nodes_.size()) - 1; }
  const std::vector<DivisorNode>& nodes() const { return nodes_; }
  const DivisorNode& node(int i) const {
    if (i < 0 || i >= static_cast<int>(nodes_.size()))
      throw input_error("Tower: no divisor with index " + std::to_string(i));
    return nodes_[static_cast<std::size_t>(i)];
  }

  // Crossings currently available for the next blowup, sorted by left
  // endpoint. Only the [0, 1] side of the tree is tracked; that is where
  // all the bookkeeping happens.
  const std::vector<FareyInterval>& crossings() const { return crossings_; }

  // True when every blowup после the first happened at the leftmost kind of
  // crossing (lo = 0/1), i.e. always on the strict transform of L.
  bool is_chain() const {
    for (std::size_t i = 2; i < nodes_.size(); ++i)
      if (nodes_[i].creating->lo != Farey()) return false;
    return true;
  }

  void blow_up(const FareyInterval& choice) {
    auto it = std::find(crossings_.begin(), crossings_.end(), choice);
    if (it == crossings_.end())
      throw input_error("Tower: " + choice.str() + " is not a current crossing");
    Farey m = mediant(choice);
    int idx = static_cast<int>(nodes_.size());
    DivisorNode node;
    node.index = idx;
    node.fraction = m;
    node.creating = choice;
    node.mult_pullback = side_mult(choice.lo) + side_mult(choice.hi);
    node.discrepancy = side_disc(choice.lo) + side_disc(choice.hi) + 1;
    by_fraction_[m] = idx;
    nodes_.push_back(std::move(node));
    // Replace the used crossing by its two halves, preserving the order.
    FareyInterval left(choice.lo, m), right(m, choice.hi);
    *it = left;
    crossings_.insert(it + 1, right);
  }

  const DivisorNode* find_by_fraction(const Farey& f) const {
    auto it = by_fraction_.find(f);
    return it == by_fraction_.end() ? nullptr : &nodes_[it->second];
  }

  // Fork sequence from the unit interval (0/1, 1/1) down to the creating
  // interval of E(i). Empty for E(2), whose interval is the unit interval.
  SBPath relevant_path(int i) const {
    if (i < 2 || i > n_blowups())
      throw input_error("relevant_path: index must name E(2)..E(n)");
    const FareyInterval& target = *nodes_[static_cast<std::size_t>(i)].creating;
    SBPath path;
    FareyInterval I = FareyInterval::unit();
    while (!(I == target)) {
      Farey m = mediant(I);
      if (target.hi <= m) {
        path.push_back(Fork::Left);
        I = FareyInterval(I.lo, m);
      } else {
        path.push_back(Fork::Right);
        I = FareyInterval(m, I.hi);
      }
    }
    return path;
  }

  // Depth of the deepest divisor among E(2)..E(n) whose creating interval
  // contains alpha in its closure; 0 when n < 2. E(2) always qualifies for
  // alpha in [0, 1], so the result is >= 1 as soon as E(2) exists.
  int max_subtower_level(const Rat& alpha) const {
    if (sgn(alpha) < 0 || alpha > 1)
      throw input_error("max_subtower_level: alpha must lie in [0, 1]");
    int best = 0;
    for (int i = 2; i <= n_blowups(); ++i) {
      const FareyInterval& I = *nodes_[static_cast<std::size_t>(i)].creating;
      if (!I.contains_closed(alpha)) continue;
      int depth = static_cast<int>(relevant_path(i).size()) + 1;
      best = std::max(best, depth);
    }
    return best;
  }

  // Local intersection contribution of divisor j at the point (a, b) of the
  // base surface, seen at place v. Uses the creating interval's monomial
  // pair; works uniformly at finite and archimedean places.
  LogRat local_contrib(int j, const Rat& a, const Rat& b, const Place& v) const {
    if (j < 1 || j > n_blowups())
      throw input_error("local_contrib: index must name E(1)..E(n)");
    if (sgn(b) == 0) throw input_error("local_contrib: point lies on the marked line");
    Rat diff = a - center_;
    if (sgn(diff) == 0) throw input_error("local_contrib: point lies over the center");
    LogRat t = v.valuation(diff), u = v.valuation(b);
    const FareyInterval& I = *nodes_[static_cast<std::size_t>(j)].creating;
    LogRat left = t.scaled_by(I.lo.q) - u.scaled_by(I.lo.p);
    LogRat right = u.scaled_by(I.hi.p) - t.scaled_by(I.hi.q);
    LogRat m = min(left, right);
    return m.sign() > 0 ? m : LogRat();
  }

 private:
  Int side_mult(const Farey& f) const {
    if (f.is_right_root()) return 0;
    return nodes_[by_fraction_.at(f)].mult_pullback;
  }
  Int side_disc(const Farey& f) const {
    if (f.is_right_root()) return 0;
    return nodes_[by_fraction_.at(f)].discrepancy;
  }

  Rat center_;
  std::vector<DivisorNode> nodes_;
  std::map<Farey, std::size_t> by_fraction_;
  std::vector<FareyInterval> crossings_;
};

// Chain tower: every blowup after the first at the leftmost crossing, so
// E(i) has creating interval (0/1, 1/(i-1)) and fraction 1/i.
inline Tower chain_tower(int n, const Rat& center = Rat(1)) {
  if (n < 1) throw input_error("chain_tower: need at least one blowup");
  Tower t(center);
  for (int i = 2; i <= n; ++i) t.blow_up(t.crossings().front());
  return t;
}

// Chain of length n-1 plus one final blowup at (1/(n-1), 1/(n-2)), the
// crossing of the last two chain divisors. The final fraction is 2/(2n-3).
inline Tower theorem2_tower(int n, const Rat& center = Rat(1)) {
  if (n < 3) throw input_error("theorem2_tower: need n >= 3");
  Tower t = chain_tower(n - 1, center);
  t.blow_up(FareyInterval(Farey(Int(1), Int(n - 1)), Farey(Int(1), Int(n - 2))));
  return t;
}

inline Tower custom_tower(const std::vector<FareyInterval>& choices,
                          const Rat& center = Rat(1)) {
  Tower t(center);
  for (const FareyInterval& I : choices) t.blow_up(I);
  return t;
}

// Independent divisor bookkeeping: coefficient vectors over the components
// (X, Y, Z, E_1, ..., E_n) are pushed through the blowups one at a time,
// with each blowup adding the coefficients of the two crossing components.
// Cross-checks the incrementally maintained multiplicities and
// discrepancies, and verifies that the intersection divisor
//   D_n = pullback(triangle) - pullback(E_2) - ... - pullback(E_n)
// is reduced (every coefficient exactly 1).
struct BookkeepingReport {
  std::vector<Int> pullback_triangle;  // coefficients of pi*(X + Y + Z)
  std::vector<Int> intersect_divisor;  // coefficients of D_n
  std::vector<Int> discrepancy_sums;   // coefficients of sum_k pi*(E_k)
  bool reduced_ok = false;
  bool mult_ok = false;
  bool disc_ok = false;
  bool ok() const { return reduced_ok && mult_ok && disc_ok; }
};

inline BookkeepingReport check_divisor_bookkeeping(const Tower& t) {
  const int n = t.n_blowups();
  const std::size_t ncomp = static_cast<std::size_t>(n) + 3;

  auto comp_index = [&](const Farey& f) -> int {
    if (f.is_right_root()) return -1;  // the untracked vertical line
    if (f == Farey()) return 1;        // Y component
    const DivisorNode* node = t.find_by_fraction(f);
    if (node == nullptr) throw invariant_error("bookkeeping: unknown side fraction " + f.str());
    return 2 + node->index;
  };

  // Push a coefficient vector through blowups from_stage..n.
  auto propagate = [&](std::vector<Int>& c, int from_stage) {
    for (int k = from_stage; k <= n; ++k) {
      const FareyInterval& I = *t.node(k).creating;
      Int add = 0;
      int il = comp_index(I.lo), ih = comp_index(I.hi);
      if (il >= 0) add += c[static_cast<std::size_t>(il)];
      if (ih >= 0) add += c[static_cast<std::size_t>(ih)];
      c[static_cast<std::size_t>(2 + k)] = add;
    }
  };

  BookkeepingReport r;
  r.pullback_triangle.assign(ncomp, Int(0));
  r.pullback_triangle[0] = r.pullback_triangle[1] = r.pullback_triangle[2] = 1;
  propagate(r.pullback_triangle, 1);

  std::vector<std::vector<Int>> pullback_e(static_cast<std::size_t>(n) + 1);
  for (int k = 1; k <= n; ++k) {
    auto& c = pullback_e[static_cast<std::size_t>(k)];
    c.assign(ncomp, Int(0));
    c[static_cast<std::size_t>(2 + k)] = 1;
    propagate(c, k + 1);
  }

  r.intersect_divisor = r.pullback_triangle;
  for (int k = 2; k <= n; ++k)
    for (std::size_t j = 0; j < ncomp; ++j)
      r.intersect_divisor[j] -= pullback_e[static_cast<std::size_t>(k)][j];

  r.discrepancy_sums.assign(ncomp, Int(0));
  for (int k = 1; k <= n; ++k)
    for (std::size_t j = 0; j < ncomp; ++j)
      r.discrepancy_sums[j] += pullback_e[static_cast<std::size_t>(k)][j];

  r.reduced_ok = true;
  for (const Int& c : r.intersect_divisor) r.reduced_ok = r.reduced_ok && c == 1;
  r.mult_ok = true;
  r.disc_ok = true;
  for (int i = 1; i <= n; ++i) {
    r.mult_ok = r.mult_ok &&
                r.pullback_triangle[static_cast<std::size_t>(2 + i)] == t.node(i).mult_pullback;
    r.disc_ok = r.disc_ok &&
                r.discrepancy_sums[static_cast<std::size_t>(2 + i)] == t.node(i).discrepancy;
  }
  return r;
}

// Per-place bound for one tower at one finite prime. For chain towers the
// asserted bound is the local height of the point against the marked line;
// for arbitrary shapes it weakens by (n_p - 1) log p, with n_p the
// valuation of a - center. Requires n_p >= 1.
struct PerPrimeBound {
  Int n_p;
  LogRat lhs;    // sum of all divisor contributions at p
  LogRat bound;
  bool chain_form;
  bool ok;
};

inline PerPrimeBound per_prime_bound(const Tower& t, const Rat& a, const Rat& b, const Int& p) {
  if (!is_prime(p)) throw input_error("per_prime_bound: " + p.str() + " is not prime");
  if (sgn(b) == 0) throw input_error("per_prime_bound: point lies on the marked line");
  Rat diff = a - t.center();
  if (sgn(diff) == 0) throw input_error("per_prime_bound: point lies over the center");

  PerPrimeBound r;
  r.n_p = detail::ord_int(abs(num(diff)), p) - detail::ord_int(den(diff), p);
  if (r.n_p < 1)
    throw input_error("per_prime_bound: prime does not divide a - center");

  Place v = Place::finite_unchecked(p);
  LogRat lhs;
  for (int j = 1; j <= t.n_blowups(); ++j) lhs += t.local_contrib(j, a, b, v);
  r.lhs = lhs;

  LogRat lam = local_height_line(LineDivisor::coordinate_y(),
                                 ProjPoint::plane_point(a, b), v);
  r.chain_form = t.is_chain();
  r.bound = r.chain_form ? lam : (lam + log_pow(p, r.n_p - 1));
  r.ok = r.lhs <= r.bound;
  return r;
}

// A family of towers with pairwise distinct nonzero centers; the shared
// ambient surface for multi-center sums.
class TowerSet {
 public:
  TowerSet() = default;
  explicit TowerSet(std::vector<Tower> towers) {
    for (Tower& t : towers) add(std::move(t));
  }

  void add(Tower t) {
    for (const Tower& u : towers_)
      if (u.center() == t.center())
        throw input_error("TowerSet: duplicate center " + rat_str(t.center()));
    towers_.push_back(std::move(t));
  }

  const std::vector<Tower>& towers() const { return towers_; }
  bool empty() const { return towers_.empty(); }

  // The multi-center statements need differences of centers to be S-units;
  // reported as a flag, never silently enforced.
  bool pairwise_differences_S_units(const PlaceSet& S) const {
    for (std::size_t i = 0; i < towers_.size(); ++i)
      for (std::size_t j = i + 1; j < towers_.size(); ++j)
        if (!is_S_unit(towers_[i].center() - towers_[j].center(), S)) return false;
    return true;
  }

  bool is_valid_point(const Rat& a, const Rat& b) const {
    if (sgn(b) == 0 || sgn(a) == 0) return false;
    for (const Tower& t : towers_)
      if (a == t.center()) return false;
    return true;
  }

 private:
  std::vector<Tower> towers_;
};

// Left side of the main inequality at a point: for every tower, the full
// place sum of the E(1) term (a clamped gcd, which collapses to the integer
// gcd of the numerators plus an archimedean correction) plus the
// outside-S sum over the deeper divisors. Exact.
inline LogRat lhs_vojta(const TowerSet& ts, const Rat& a, const Rat& b, const PlaceSet& S,
                        const FactorEffort& effort = {}) {
  if (!ts.is_valid_point(a, b))
    throw input_error("lhs_vojta: point is degenerate for this tower set");
  using boost::multiprecision::gcd;
  LogRat total;
  for (const Tower& t : ts.towers()) {
    Rat diff = a - t.center();
    // E(1) term over all places. Finite part: sum_p min(ord_p diff, ord_p b)
    // clamped at 0 is exactly log gcd(num(diff), num(b)).
    Int g = gcd(abs(num(diff)), abs(num(b)));
    total += LogRat(g);
    // Archimedean part of the E(1) term.
    Rat m = abs_rat(diff) > abs_rat(b) ? abs_rat(diff) : abs_rat(b);
    if (m < 1) total += LogRat(Rat(1) / m);
    // Deeper divisors, outside-S places only. Their contribution vanishes
    // unless p divides both numerators, so the candidate primes are the
    // divisors of g.
    if (t.n_blowups() < 2 || g == 1) continue;
    for (const auto& [p, e] : factor(Rat(g), effort).exponents) {
      if (S.contains_prime(p)) continue;
      Int tt = detail::ord_int(abs(num(diff)), p);
      Int uu = detail::ord_int(abs(num(b)), p);
      Int exponent = 0;
      for (int j = 2; j <= t.n_blowups(); ++j) {
        const FareyInterval& I = *t.node(j).creating;
        Int left = I.lo.q * tt - I.lo.p * uu;
        Int right = I.hi.p * uu - I.hi.q * tt;
        Int c = std::min(left, right);
        if (c > 0) exponent += c;
      }
      if (exponent > 0) total += log_pow(p, exponent);
    }
  }
  return total;
}

// Right side without the fitted constant: eps * max(h(a), h(b)) plus the
// outside-S local heights of [a:b:1] against the coordinate triangle. The
// rational eps makes this log(V)/den(eps) for an integer V.
inline ScaledLog rhs_vojta(const Rat& a, const Rat& b, const PlaceSet& S, const Rat& eps) {
  if (sgn(eps) <= 0) throw input_error("rhs_vojta: eps must be positive");
  if (sgn(a) == 0 || sgn(b) == 0)
    throw input_error("rhs_vojta: point lies on the coordinate triangle");
  Int ha = std::max(Int(abs(num(a))), den(a));
  Int hb = std::max(Int(abs(num(b))), den(b));
  Int M = std::max(ha, hb);

  ProjPoint P = ProjPoint::plane_point(a, b);
  Int prod = 1;
  for (const Int& c : P.coords()) prod *= abs(c);
  for (const Int& p : S.finite_primes())
    while (prod % p == 0) prod /= p;

  std::int64_t en = num(eps).convert_to<std::int64_t>();
  std::int64_t ed = den(eps).convert_to<std::int64_t>();
  Int value = ipow(M, static_cast<std::uint64_t>(en)) *
              ipow(prod, static_cast<std::uint64_t>(ed));
  return ScaledLog(LogRat(Rat(value)), Int(ed));
}

}  // namespace fareytower

#pragma once

// The left half of the Stern-Brocot tree: mediant subdivision of [0, 1],
// level enumeration, interval location, tree paths, and the piecewise-linear
// interval function phi_alpha built from the chain of intervals leading to a
// fraction. All arithmetic is exact.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fareytower/error.hpp"
#include "fareytower/rat.hpp"

namespace fareytower {

// A reduced fraction p/q in [0, 1], or the formal right root 1/0 that caps
// the top-level interval (0/1, 1/0). Ordering treats 1/0 as +infinity.
struct Farey {
  Int p, q;

  Farey() : p(0), q(1) {}
  Farey(Int pp, Int qq) : p(std::move(pp)), q(std::move(qq)) {
    if (q == 0) {
      if (p != 1) throw input_error("Farey: only 1/0 is allowed with denominator 0");
      return;
    }
    if (q < 0) throw input_error("Farey: negative denominator");
    Int g = boost::multiprecision::gcd(p, q);
    if (g > 1) { p /= g; q /= g; }
    if (p < 0 || p > q) throw input_error("Farey: fraction outside [0, 1]");
  }

  static Farey right_root() { return Farey(Int(1), Int(0)); }
  bool is_right_root() const { return q == 0; }

  Rat value() const {
    if (is_right_root()) throw input_error("Farey: 1/0 has no rational value");
    return Rat(p, q);
  }

  std::string str() const { return p.str() + "/" + q.str(); }

  friend bool operator==(const Farey& a, const Farey& b) { return a.p == b.p && a.q == b.q; }
  friend bool operator!=(const Farey& a, const Farey& b) { return !(a == b); }
  friend bool operator<(const Farey& a, const Farey& b) { return a.p * b.q < b.p * a.q; }
  friend bool operator<=(const Farey& a, const Farey& b) { return a.p * b.q <= b.p * a.q; }
};

// Comparisons between a Farey endpoint and a rational value; the right root
// compares above every rational.
inline bool farey_lt(const Farey& f, const Rat& x) {
  if (f.is_right_root()) return false;
  return Rat(f.p, f.q) < x;
}
inline bool farey_gt(const Farey& f, const Rat& x) {
  if (f.is_right_root()) return true;
  return Rat(f.p, f.q) > x;
}
inline bool farey_eq(const Farey& f, const Rat& x) {
  if (f.is_right_root()) return false;
  return Rat(f.p, f.q) == x;
}

// An interval between tree neighbors lo = a/b < hi = c/d with bc - ad = 1.
// Unimodularity is what keeps every mediant automatically reduced.
struct FareyInterval {
  Farey lo, hi;
  std::optional<int> level;  // tree level, when the interval came from a level

  FareyInterval(Farey l, Farey h, std::optional<int> lv = std::nullopt)
      : lo(std::move(l)), hi(std::move(h)), level(lv) {
    if (lo.q * hi.p - lo.p * hi.q != 1)
      throw input_error("FareyInterval: endpoints " + lo.str() + ", " + hi.str() +
                        " are not unimodular neighbors");
  }

  static FareyInterval root() { return FareyInterval(Farey(), Farey::right_root(), 1); }
  static FareyInterval unit() {
    return FareyInterval(Farey(), Farey(Int(1), Int(1)), 1);
  }

  bool contains_open(const Rat& x) const { return farey_lt(lo, x) && farey_gt(hi, x); }
  bool contains_closed(const Rat& x) const {
    return (farey_lt(lo, x) || farey_eq(lo, x)) && (farey_gt(hi, x) || farey_eq(hi, x));
  }

  std::string str() const { return "(" + lo.str() + ", " + hi.str() + ")"; }

  friend bool operator==(const FareyInterval& a, const FareyInterval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

// Mediant (a+c)/(b+d); reduced automatically because the endpoints are
// unimodular neighbors.
inline Farey mediant(const FareyInterval& I) {
  Farey m;
  m.p = I.lo.p + I.hi.p;
  m.q = I.lo.q + I.hi.q;
  return m;
}

// Levels of the tree restricted to [0, 1]. Level 1 is {0/1, 1/1}; each
// level inserts the mediant of every adjacent pair, so level n holds
// 2^(n-1) + 1 fractions.
inline std::vector<Farey> level_fractions(int n) {
  constexpr int kMaxLevel = 20;  // 2^19 + 1 entries; memory cap
  if (n < 1) throw input_error("level_fractions: level must be >= 1");
  if (n > kMaxLevel)
    throw input_error("level_fractions: level " + std::to_string(n) +
                      " exceeds the in-memory cap of " + std::to_string(kMaxLevel));
  std::vector<Farey> cur = {Farey(), Farey(Int(1), Int(1))};
  for (int k = 2; k <= n; ++k) {
    std::vector<Farey> next;
    next.reserve(cur.size() * 2 - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      next.push_back(cur[i]);
      Farey m;
      m.p = cur[i].p + cur[i + 1].p;
      m.q = cur[i].q + cur[i + 1].q;
      next.push_back(std::move(m));
    }
    next.push_back(cur.back());
    cur = std::move(next);
  }
  return cur;
}

// The level-n interval strictly containing x. Fails if x is itself a
// fraction of level <= n (it would sit on a boundary, not inside).
inline FareyInterval farey_interval(const Rat& x, int n) {
  if (n < 1) throw input_error("farey_interval: level must be >= 1");
  if (sgn(x) <= 0 || x >= 1)
    throw input_error("farey_interval: x must lie in (0, 1)");
  FareyInterval I = FareyInterval::unit();
  for (int k = 2; k <= n; ++k) {
    Farey m = mediant(I);
    Rat mv = m.value();
    if (x == mv)
      throw input_error("farey_interval: " + rat_str(x) + " appears at level " +
                        std::to_string(k) + " <= " + std::to_string(n));
    I = (x < mv) ? FareyInterval(I.lo, m, k) : FareyInterval(m, I.hi, k);
  }
  I.level = n;
  return I;
}

// First tree level at which x appears. 0/1 and 1/1 live at level 1; every
// other reduced p/q in (0, 1) is the mediant of its level chain and shows
// up by level q + 1 at the latest.
inline int first_level(const Rat& x) {
  if (sgn(x) < 0 || x > 1) throw input_error("first_level: x must lie in [0, 1]");
  if (sgn(x) == 0 || x == 1) return 1;
  FareyInterval I = FareyInterval::unit();
  for (int k = 2;; ++k) {
    Farey m = mediant(I);
    Rat mv = m.value();
    if (x == mv) return k;
    I = (x < mv) ? FareyInterval(I.lo, m) : FareyInterval(m, I.hi);
  }
}

enum class Fork : std::uint8_t { Left, Right };
using SBPath = std::vector<Fork>;

inline std::string path_str(const SBPath& path) {
  std::string s;
  for (Fork f : path) s += (f == Fork::Left ? 'L' : 'R');
  return s.empty() ? "-" : s;
}

// Fork sequence from the tree root 1/2 down to x; empty for x = 1/2.
inline SBPath path_to(const Rat& x) {
  if (sgn(x) <= 0 || x >= 1) throw input_error("path_to: x must lie in (0, 1)");
  SBPath path;
  FareyInterval I = FareyInterval::unit();
  for (;;) {
    Farey m = mediant(I);
    Rat mv = m.value();
    if (x == mv) return path;
    if (x < mv) {
      path.push_back(Fork::Left);
      I = FareyInterval(I.lo, m);
    } else {
      path.push_back(Fork::Right);
      I = FareyInterval(m, I.hi);
    }
  }
}

// The nested intervals I^(1) 2 I^(2) 2 ... 2 I^(n) strictly containing
// alpha, where alpha first appears at level n + 1 as the mediant of I^(n).
inline std::vector<FareyInterval> interval_chain(const Rat& alpha) {
  if (sgn(alpha) <= 0 || alpha >= 1)
    throw input_error("interval_chain: alpha must lie in (0, 1)");
  std::vector<FareyInterval> chain;
  FareyInterval I = FareyInterval::unit();
  for (int k = 1;; ++k) {
    I.level = k;
    chain.push_back(I);
    Farey m = mediant(I);
    Rat mv = m.value();
    if (alpha == mv) return chain;
    I = (alpha < mv) ? FareyInterval(I.lo, m) : FareyInterval(m, I.hi);
  }
}

// phi_alpha(x) = sum over the interval chain of min(b_i x - a_i, c_i - d_i x),
// evaluated term by term. Defined on the closed final interval I_alpha.
inline Rat phi_direct(const Rat& alpha, const Rat& x) {
  std::vector<FareyInterval> chain = interval_chain(alpha);
  const FareyInterval& last = chain.back();
  if (!last.contains_closed(x))
    throw input_error("phi_direct: x outside the interval of alpha");
  // Common denominator once; each term is then integer arithmetic.
  const Int &u = num(x), &w = den(x);
  Int total = 0;
  for (const FareyInterval& I : chain) {
    Int left = I.lo.q * u - I.lo.p * w;    // b_i x - a_i, scaled by w
    Int right = I.hi.p * w - I.hi.q * u;   // c_i - d_i x, scaled by w
    total += std::min(left, right);
  }
  return Rat(total, w);
}

// The same function from its closed form: two line segments meeting at
// (alpha, (q-1)/q), with endpoint values (b_n - 1)/b_n and (d_n - 1)/d_n.
// Kept independent of phi_direct so the two can check each other.
inline Rat phi_closed(const Rat& alpha, const Rat& x) {
  std::vector<FareyInterval> chain = interval_chain(alpha);
  const FareyInterval& last = chain.back();
  if (!last.contains_closed(x))
    throw input_error("phi_closed: x outside the interval of alpha");
  Rat lo(last.lo.p, last.lo.q), hi(last.hi.p, last.hi.q);
  Rat v_lo((last.lo.q - 1), last.lo.q);
  Rat v_hi((last.hi.q - 1), last.hi.q);
  Rat v_mid(den(alpha) - 1, den(alpha));
  if (x <= alpha) {
    if (alpha == lo) return v_lo;  // unreachable: alpha is interior
    return v_lo + (x - lo) * (v_mid - v_lo) / (alpha - lo);
  }
  return v_mid + (x - alpha) * (v_hi - v_mid) / (hi - alpha);
}

}  // namespace fareytower

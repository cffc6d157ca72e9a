#pragma once

// Integer factorization and p-adic valuations. Deterministic at desk scale:
// trial division, then Brent's cycle-finding with a fixed parameter schedule,
// with Miller-Rabin certifying every reported prime. All effort is bounded;
// exceeding the budget raises effort_error rather than looping forever.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "fareytower/error.hpp"
#include "fareytower/rat.hpp"

namespace fareytower {

struct FactorEffort {
  std::uint32_t trial_bound = 100000;       // trial-divide candidates below this
  std::uint64_t max_rho_steps = 1u << 27;   // total Brent iterations per factor() call
};

// Signed factorization of a nonzero rational: sign * prod p^e, exponents
// nonzero, primes strictly increasing. Denominator primes carry e < 0.
struct Factorization {
  int sign = 1;
  std::vector<std::pair<Int, Int>> exponents;

  Rat value() const {
    Rat acc(sign);
    for (const auto& [p, e] : exponents)
      acc *= pow_rat(Rat(p), e.convert_to<std::int64_t>());
    return acc;
  }
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t acc = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) acc = mulmod_u64(acc, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return acc;
}

// Deterministic for all 64-bit inputs with this base set.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                          29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                          29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) { std::uint64_t t = a % b; a = b; b = t; }
  return a;
}

// Brent's cycle-finding factor search on composite odd n with f(y) = y^2 + c.
// Returns a nontrivial factor, n itself (bad c, caller retries), or 0 when
// the shared step budget ran out.
inline std::uint64_t brent_round_u64(std::uint64_t n, std::uint64_t c, std::uint64_t& budget) {
  std::uint64_t y = 2, g = 1, q = 1, x = 0, ys = 0;
  std::uint64_t r = 1;
  const std::uint64_t m = 128;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) {
      y = mulmod_u64(y, y, n) + c;
      if (y >= n) y -= n;
    }
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      if (budget == 0) return 0;
      ys = y;
      std::uint64_t take = std::min({m, r - k, budget});
      for (std::uint64_t i = 0; i < take; ++i) {
        y = mulmod_u64(y, y, n) + c;
        if (y >= n) y -= n;
        std::uint64_t diff = y > x ? y - x : x - y;
        q = mulmod_u64(q, diff == 0 ? 1 : diff, n);
      }
      g = gcd_u64(q, n);
      k += take;
      budget -= take;
    }
    r <<= 1;
  }
  if (g == n) {
    // The batched gcd collapsed; replay one step at a time from ys.
    g = 1;
    while (g == 1) {
      ys = mulmod_u64(ys, ys, n) + c;
      if (ys >= n) ys -= n;
      std::uint64_t diff = ys > x ? ys - x : x - ys;
      g = gcd_u64(diff == 0 ? n : diff, n);
    }
  }
  return g;
}

inline Int brent_round_int(const Int& n, unsigned c, std::uint64_t& budget) {
  using boost::multiprecision::gcd;
  Int y = 2, g = 1, q = 1, x = 0, ys = 0;
  std::uint64_t r = 1;
  const std::uint64_t m = 128;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      if (budget == 0) return 0;
      ys = y;
      std::uint64_t take = std::min({m, r - k, budget});
      for (std::uint64_t i = 0; i < take; ++i) {
        y = (y * y + c) % n;
        Int diff = abs(y - x);
        q = (q * (diff == 0 ? Int(1) : diff)) % n;
      }
      g = gcd(q, n);
      k += take;
      budget -= take;
    }
    r <<= 1;
  }
  if (g == n) {
    g = 1;
    while (g == 1) {
      ys = (ys * ys + c) % n;
      Int diff = abs(ys - x);
      g = gcd(diff == 0 ? n : diff, n);
    }
  }
  return g;
}

inline void factor_u64_into(std::uint64_t n, std::map<Int, Int>& out, std::uint64_t& budget) {
  if (n == 1) return;
  if (is_prime_u64(n)) { out[Int(n)] += 1; return; }
  std::uint64_t d = 0;
  for (std::uint64_t c = 1; c < 64 && (d == 0 || d == n); ++c) {
    d = brent_round_u64(n, c, budget);
    if (d == 0 && budget == 0)
      throw effort_error("factorization effort exceeded at " + std::to_string(n));
  }
  if (d == 0 || d == n)
    throw effort_error("factorization failed to split " + std::to_string(n));
  factor_u64_into(d, out, budget);
  factor_u64_into(n / d, out, budget);
}

inline bool is_prime_int(const Int& n);

inline void factor_int_into(const Int& n, std::map<Int, Int>& out, std::uint64_t& budget) {
  if (n == 1) return;
  if (n <= Int(std::numeric_limits<std::uint64_t>::max())) {
    factor_u64_into(n.convert_to<std::uint64_t>(), out, budget);
    return;
  }
  if (is_prime_int(n)) { out[n] += 1; return; }
  Int d = 0;
  for (unsigned c = 1; c < 64 && (d == 0 || d == n); ++c) {
    d = brent_round_int(n, c, budget);
    if (d == 0 && budget == 0)
      throw effort_error("factorization effort exceeded at " + n.str());
  }
  if (d == 0 || d == n) throw effort_error("factorization failed to split " + n.str());
  factor_int_into(d, out, budget);
  factor_int_into(n / d, out, budget);
}

// Miller-Rabin with the first 13 prime bases: proven deterministic below
// 3.3 * 10^24, no known pseudoprime beyond.
inline bool is_prime_int(const Int& n) {
  using boost::multiprecision::powm;
  if (n <= Int(std::numeric_limits<std::uint64_t>::max()))
    return is_prime_u64(n.convert_to<std::uint64_t>());
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
    if (n % p == 0) return false;
  }
  Int d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
    Int x = powm(Int(a), d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = (x * x) % n;
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace detail

inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  return detail::is_prime_int(n);
}

// Factor a nonzero rational into sign and prime powers. Denominator primes
// get negative exponents; shared primes never occur (the input is reduced).
inline Factorization factor(const Rat& x, const FactorEffort& effort = {}) {
  if (sgn(x) == 0) throw input_error("factor: zero has no factorization");
  std::uint64_t budget = effort.max_rho_steps;
  std::map<Int, Int> merged;

  auto run = [&](Int n, int side) {
    for (std::uint32_t p = 2; p < effort.trial_bound && Int(p) * p <= n;
         p += (p == 2) ? 1 : 2) {
      while (n % p == 0) { merged[Int(p)] += side; n /= p; }
    }
    if (n > 1) {
      std::map<Int, Int> part;
      detail::factor_int_into(n, part, budget);
      for (auto& [p, e] : part) merged[p] += side * e;
    }
  };

  run(abs(num(x)), +1);
  run(den(x), -1);

  Factorization f;
  f.sign = sgn(x);
  for (auto& [p, e] : merged)
    if (e != 0) f.exponents.emplace_back(p, e);
  return f;
}

// ord_p of a nonzero rational (negative when p divides the denominator).
// p must be prime; that precondition is checked.
inline Int ordp(const Rat& x, const Int& p) {
  if (sgn(x) == 0) throw input_error("ordp: zero input");
  if (!is_prime(p)) throw input_error("ordp: " + p.str() + " is not prime");
  Int n = abs(num(x)), d = den(x), e = 0;
  while (n % p == 0) { n /= p; ++e; }
  if (e != 0) return e;
  while (d % p == 0) { d /= p; --e; }
  return e;
}

namespace detail {

// Unchecked ord_p on a positive integer; hot-loop companion of ordp.
inline Int ord_int(Int n, const Int& p) {
  Int e = 0;
  while (n % p == 0) { n /= p; ++e; }
  return e;
}

inline std::uint32_t ord_u64(std::uint64_t n, std::uint64_t p) {
  std::uint32_t e = 0;
  while (n % p == 0) { n /= p; ++e; }
  return e;
}

}  // namespace detail

// Smallest-prime-factor sieve for fast repeated factorization of small ints.
class SpfTable {
 public:
  explicit SpfTable(std::uint32_t limit) : spf_(static_cast<std::size_t>(limit) + 1, 0) {
    for (std::uint32_t i = 2; i <= limit; ++i) {
      if (spf_[i] == 0)
        for (std::uint64_t j = i; j <= limit; j += i)
          if (spf_[j] == 0) spf_[j] = i;
    }
  }

  std::uint32_t limit() const { return static_cast<std::uint32_t>(spf_.size() - 1); }

  // (prime, multiplicity) pairs of n, ascending. n >= 1.
  void factor(std::uint32_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>>& out) const {
    out.clear();
    while (n > 1) {
      std::uint32_t p = spf_[n], e = 0;
      while (n % p == 0) { n /= p; ++e; }
      out.emplace_back(p, e);
    }
  }

 private:
  std::vector<std::uint32_t> spf_;
};

}  // namespace fareytower

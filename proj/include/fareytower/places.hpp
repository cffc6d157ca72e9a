#pragma once

// Places of the rationals: the archimedean place plus one place per prime.
// Normalized additive valuations: v_p(x) = ord_p(x) * log p for finite p,
// v_inf(x) = -log|x|. With these weights the product formula reads
// sum_v v(x) = 0, which is what makes local height sums telescope to global
// heights.

#include <algorithm>
#include <string>
#include <vector>

#include "fareytower/error.hpp"
#include "fareytower/factor.hpp"
#include "fareytower/lograt.hpp"
#include "fareytower/rat.hpp"

namespace fareytower {

class Place {
 public:
  static Place infinite_place() { return Place(); }
  static Place finite(const Int& p) {
    if (!is_prime(p)) throw input_error("Place: " + p.str() + " is not prime");
    Place v;
    v.prime_ = p;
    return v;
  }
  // Unchecked constructor for hot loops that already know p is prime.
  static Place finite_unchecked(const Int& p) {
    Place v;
    v.prime_ = p;
    return v;
  }

  bool is_infinite() const { return prime_ == 0; }
  const Int& prime() const {
    if (is_infinite()) throw input_error("Place: archimedean place has no prime");
    return prime_;
  }

  // Normalized additive valuation of a nonzero rational.
  LogRat valuation(const Rat& x) const {
    if (sgn(x) == 0) throw input_error("Place: valuation of zero");
    if (is_infinite()) return LogRat(Rat(1) / abs_rat(x));
    return log_pow(prime_, detail::ord_int(abs(num(x)), prime_) -
                               detail::ord_int(den(x), prime_));
  }

  // max(0, v(x)).
  LogRat valuation_plus(const Rat& x) const {
    LogRat v = valuation(x);
    return v.sign() > 0 ? v : LogRat();
  }

  std::string str() const { return is_infinite() ? "inf" : prime_.str(); }

  friend bool operator==(const Place& a, const Place& b) { return a.prime_ == b.prime_; }
  friend bool operator!=(const Place& a, const Place& b) { return a.prime_ != b.prime_; }
  // Archimedean place first, then finite places by prime.
  friend bool operator<(const Place& a, const Place& b) {
    if (a.is_infinite() != b.is_infinite()) return a.is_infinite();
    return a.prime_ < b.prime_;
  }

 private:
  Place() : prime_(0) {}
  Int prime_;  // 0 encodes the archimedean place
};

// A finite set of places that always contains the archimedean one; the
// finite members are stored as sorted distinct primes.
class PlaceSet {
 public:
  PlaceSet() = default;
  explicit PlaceSet(std::vector<Int> primes) {
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (const Int& p : primes)
      if (!is_prime(p)) throw input_error("PlaceSet: " + p.str() + " is not prime");
    primes_ = std::move(primes);
  }

  // Comma-separated primes, e.g. "2,3,5"; empty means just the archimedean
  // place.
  static PlaceSet parse(const std::string& text) {
    std::vector<Int> ps;
    std::size_t start = 0;
    while (start <= text.size() && !text.empty()) {
      std::size_t comma = text.find(',', start);
      std::string tok = text.substr(start, comma == std::string::npos ? comma : comma - start);
      if (!tok.empty()) ps.push_back(parse_int(tok));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return PlaceSet(std::move(ps));
  }

  bool contains(const Place& v) const {
    if (v.is_infinite()) return true;
    return contains_prime(v.prime());
  }
  bool contains_prime(const Int& p) const {
    return std::binary_search(primes_.begin(), primes_.end(), p);
  }

  const std::vector<Int>& finite_primes() const { return primes_; }

  std::string str() const {
    std::string s = "inf";
    for (const Int& p : primes_) s += "," + p.str();
    return s;
  }

 private:
  std::vector<Int> primes_;
};

}  // namespace fareytower

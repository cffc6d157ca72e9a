#pragma once

// Exact logarithms. A LogRat is log(v) for a positive rational v, stored as
// v itself, so addition is multiplication and comparisons are rational
// comparisons: no rounding can ever flip a decision. ScaledLog extends this
// to log(v)/s for a positive integer scale s, which is what rational
// multiples like eps*h produce. Floating output exists only for display.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fareytower/error.hpp"
#include "fareytower/rat.hpp"

namespace fareytower {

class LogRat {
 public:
  LogRat() : value_(1) {}
  explicit LogRat(const Rat& v) : value_(v) {
    if (sgn(value_) <= 0) throw input_error("LogRat: argument must be positive");
  }
  explicit LogRat(const Int& v) : LogRat(Rat(v)) {}

  const Rat& value() const { return value_; }

  bool is_zero() const { return value_ == 1; }
  int sign() const { return value_ < 1 ? -1 : (value_ == 1 ? 0 : 1); }

  LogRat& operator+=(const LogRat& o) { value_ *= o.value_; return *this; }
  LogRat& operator-=(const LogRat& o) { value_ /= o.value_; return *this; }
  friend LogRat operator+(LogRat a, const LogRat& b) { return a += b; }
  friend LogRat operator-(LogRat a, const LogRat& b) { return a -= b; }
  LogRat operator-() const { return LogRat(Rat(1) / value_); }

  // k * log(v) = log(v^k), any sign of k.
  LogRat scaled_by(const Int& k) const {
    return LogRat(pow_rat(value_, k.convert_to<std::int64_t>()));
  }

  friend bool operator==(const LogRat& a, const LogRat& b) { return a.value_ == b.value_; }
  friend bool operator!=(const LogRat& a, const LogRat& b) { return a.value_ != b.value_; }
  friend bool operator<(const LogRat& a, const LogRat& b) { return a.value_ < b.value_; }
  friend bool operator<=(const LogRat& a, const LogRat& b) { return a.value_ <= b.value_; }
  friend bool operator>(const LogRat& a, const LogRat& b) { return a.value_ > b.value_; }
  friend bool operator>=(const LogRat& a, const LogRat& b) { return a.value_ >= b.value_; }

  // "log(n/d)"; the zero log renders as "0".
  std::string str() const {
    if (is_zero()) return "0";
    return "log(" + rat_str(value_) + ")";
  }

 private:
  Rat value_;  // > 0
};

inline LogRat log_of(const Rat& v) { return LogRat(v); }

// e * log(p) as an exact quantity; e may be negative.
inline LogRat log_pow(const Int& p, const Int& e) {
  return LogRat(pow_rat(Rat(p), e.convert_to<std::int64_t>()));
}

inline LogRat max(const LogRat& a, const LogRat& b) { return a < b ? b : a; }
inline LogRat min(const LogRat& a, const LogRat& b) { return a < b ? a : b; }

struct FloatApprox {
  double value;
  double error_bound;  // |value - true| <= error_bound, certified
};

namespace detail {
using HighFloat = boost::multiprecision::cpp_bin_float_100;

inline HighFloat log_high(const Rat& v) {
  return log(HighFloat(num(v))) - log(HighFloat(den(v)));
}
}  // namespace detail

// Round log(v) to double with a per-call certified error bound. The interim
// 100-digit evaluation leaves the double rounding step as the only error
// that matters; the bound measures it directly and pads the tail.
inline FloatApprox lograt_to_float(const LogRat& l, unsigned precision_bits = 53) {
  if (precision_bits < 53)
    throw input_error("lograt_to_float: precision below double is not supported");
  if (l.is_zero()) return {0.0, 0.0};
  detail::HighFloat hv = detail::log_high(l.value());
  double d = hv.convert_to<double>();
  detail::HighFloat err = abs(hv - detail::HighFloat(d));
  double bound = err.convert_to<double>() * (1 + 1e-9) + 1e-60;
  return {d, bound};
}

// log(v)/scale with scale >= 1. Sums of same-scale terms stay cheap; mixed
// scales cross-multiply exponents, which is exact but grows digits, so scan
// code keeps one common scale per configuration.
class ScaledLog {
 public:
  ScaledLog() : base_(), scale_(1) {}
  explicit ScaledLog(const LogRat& l) : base_(l), scale_(1) {}
  ScaledLog(const LogRat& l, const Int& scale) : base_(l), scale_(scale) {
    if (scale_ < 1) throw input_error("ScaledLog: scale must be >= 1");
  }

  const LogRat& base() const { return base_; }
  const Int& scale() const { return scale_; }
  int sign() const { return base_.sign(); }

  // Exact comparison: log(u)/s vs log(w)/t equals u^t vs w^s.
  int compare(const ScaledLog& o) const {
    if (scale_ == o.scale_) {
      if (base_.value() < o.base_.value()) return -1;
      return base_.value() == o.base_.value() ? 0 : 1;
    }
    Rat lhs = pow_rat(base_.value(), o.scale_.convert_to<std::int64_t>());
    Rat rhs = pow_rat(o.base_.value(), scale_.convert_to<std::int64_t>());
    if (lhs < rhs) return -1;
    return lhs == rhs ? 0 : 1;
  }

  friend bool operator<(const ScaledLog& a, const ScaledLog& b) { return a.compare(b) < 0; }
  friend bool operator<=(const ScaledLog& a, const ScaledLog& b) { return a.compare(b) <= 0; }
  friend bool operator>(const ScaledLog& a, const ScaledLog& b) { return a.compare(b) > 0; }
  friend bool operator>=(const ScaledLog& a, const ScaledLog& b) { return a.compare(b) >= 0; }
  friend bool operator==(const ScaledLog& a, const ScaledLog& b) { return a.compare(b) == 0; }

  ScaledLog operator+(const ScaledLog& o) const {
    if (scale_ == o.scale_) return ScaledLog(base_ + o.base_, scale_);
    return ScaledLog(base_.scaled_by(o.scale_) + o.base_.scaled_by(scale_), scale_ * o.scale_);
  }
  ScaledLog operator-(const ScaledLog& o) const {
    if (scale_ == o.scale_) return ScaledLog(base_ - o.base_, scale_);
    return ScaledLog(base_.scaled_by(o.scale_) - o.base_.scaled_by(scale_), scale_ * o.scale_);
  }
  ScaledLog operator-() const { return ScaledLog(-base_, scale_); }

  FloatApprox to_float() const {
    FloatApprox f = lograt_to_float(base_);
    double s = scale_.convert_to<double>();
    return {f.value / s, f.error_bound / s + 1e-60};
  }

  // "log(n/d)/s"; scale 1 omits the divisor.
  std::string str() const {
    if (base_.is_zero()) return "0";
    if (scale_ == 1) return base_.str();
    return base_.str() + "/" + scale_.str();
  }

 private:
  LogRat base_;
  Int scale_;  // >= 1
};

// One term of a rational combination sum c * log(v).
struct LogTerm {
  Rat coeff;
  LogRat log;
};

struct LogCombineConfig {
  // Cap on the certified bit size of the cleared-denominator power product.
  std::uint64_t max_product_bits = std::uint64_t(1) << 24;
};

struct LogCombineResult {
  int sign;                      // sign of sum c_i * log(v_i)
  std::optional<LogRat> exact;   // populated when every coeff is a nonnegative integer
};

// Decide the sign of sum_i c_i * log(v_i) exactly. Clearing the coefficient
// denominators turns the sum into a comparison of two integer products,
// which is computed without any rational reduction. If the certified size
// of those products would exceed the cap, an inconclusive_error carries a
// high-precision float estimate instead; no silent approximation.
inline LogCombineResult log_combine(const std::vector<LogTerm>& terms,
                                    const LogCombineConfig& cfg = {}) {
  Int lcm_den = 1;
  for (const auto& t : terms) lcm_den = boost::multiprecision::lcm(lcm_den, den(t.coeff));

  // Certified size estimate before any big multiplication happens.
  double bits = 0;
  bool all_nonneg_int = true;
  for (const auto& t : terms) {
    Int e = num(t.coeff) * (lcm_den / den(t.coeff));
    double mag = static_cast<double>(msb(abs(num(t.log.value()))) +
                                     msb(den(t.log.value())) + 2);
    bits += abs(e).convert_to<double>() * mag;
    if (den(t.coeff) != 1 || sgn(t.coeff) < 0) all_nonneg_int = false;
  }
  if (bits > static_cast<double>(cfg.max_product_bits)) {
    detail::HighFloat est = 0;
    for (const auto& t : terms)
      est += detail::HighFloat(num(t.coeff)) / detail::HighFloat(den(t.coeff)) *
             detail::log_high(t.log.value());
    double estd = est.convert_to<double>();
    throw inconclusive_error(
        "log_combine: exact product would exceed the exponent cap", estd,
        std::abs(estd) * 1e-12 + 1e-30);
  }

  // sum e_i * log(n_i / d_i) > 0  iff  prod lhs > prod rhs, with positive
  // exponents contributing numerators left / denominators right and negative
  // exponents the reverse. No gcd reduction along the way.
  Int lhs = 1, rhs = 1;
  for (const auto& t : terms) {
    Int e = num(t.coeff) * (lcm_den / den(t.coeff));
    if (e == 0) continue;
    std::uint64_t ee = abs(e).convert_to<std::uint64_t>();
    const Int n = abs(num(t.log.value()));
    const Int d = den(t.log.value());
    if (e > 0) {
      lhs *= ipow(n, ee);
      rhs *= ipow(d, ee);
    } else {
      lhs *= ipow(d, ee);
      rhs *= ipow(n, ee);
    }
  }

  LogCombineResult res;
  res.sign = lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
  if (all_nonneg_int) {
    Rat v = 1;
    for (const auto& t : terms)
      v *= pow_rat(t.log.value(), num(t.coeff).convert_to<std::int64_t>());
    res.exact = LogRat(v);
  }
  return res;
}

}  // namespace fareytower

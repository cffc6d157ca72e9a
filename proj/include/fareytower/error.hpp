#pragma once

// Error taxonomy. Every throwing path in the library uses one of these,
// so callers (and the CLI) can map failures to exit codes uniformly:
// input_error -> usage (2), everything else -> computation failure (1).

#include <stdexcept>
#include <string>

namespace fareytower {

// Caller handed us something outside a documented precondition.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant that must hold by construction failed. Always a bug
// or a genuinely violated mathematical claim; never swallowed.
struct invariant_error : std::runtime_error {
  explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

// A bounded-effort computation (factorization) exceeded its budget.
struct effort_error : std::runtime_error {
  explicit effort_error(const std::string& what) : std::runtime_error(what) {}
};

// An exact comparison was abandoned because the certified-exponent cap was
// exceeded. Carries the best floating estimate and a bound on its error so
// the caller can still report, but never decide an invariant, with it.
struct inconclusive_error : std::runtime_error {
  double estimate;
  double error_bound;
  inconclusive_error(const std::string& what, double est, double err)
      : std::runtime_error(what), estimate(est), error_bound(err) {}
};

}  // namespace fareytower

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "flatspot/big_real.hpp"
#include "flatspot/flat_map.hpp"
#include "flatspot/orbit.hpp"

namespace flatspot {

struct RotationNumber {
  enum class Kind { rational, irrational_approx };
  Kind kind = Kind::irrational_approx;
  Rational fraction;          // rational case
  std::int64_t witness = 0;   // absorption index in the rational case
  Rational lower, upper;      // enclosure from winding counts
  BigReal value;              // midpoint of the enclosure
  BigReal error;              // half-width of the enclosure
  std::int64_t iterations = 0;
  Precision precision = kDefaultPrecision;

  bool contains(const BigReal& x) const;
};

// Rational detection by absorption of the critical orbit in U; otherwise the
// winding-count enclosure is refined until its width is at most `tol`.
RotationNumber rotation_number(const FlatSpotMap& map, const BigReal& tol, std::int64_t max_iters,
                               const OrbitOptions& options = {});

// Partial quotients a(0); a(1), a(2), ... with convergents p(n)/q(n) indexed as
// usual (p(-1) = 1, q(-1) = 0, q(0) = 1).
//
// Levels: the closest return at level n is q(n - 1), so for the golden mean
// level_q(n) runs through the Fibonacci numbers 1, 1, 2, 3, 5, ... and
// level_q(10) = 55.
class ContinuedFraction {
 public:
  static ContinuedFraction golden(int depth);
  static ContinuedFraction from_quotients(std::vector<std::int64_t> a);
  static ContinuedFraction of_rational(Rational r);
  // Expansion shared by every number in [lo, hi]; throws InsufficientAccuracy
  // when fewer than `depth` quotients are common to both ends.
  static ContinuedFraction of_interval(Rational lo, Rational hi, int depth);
  static ContinuedFraction of_real(const BigReal& value, const BigReal& error, int depth);
  static ContinuedFraction of(const RotationNumber& rho, int depth);

  int depth() const { return static_cast<int>(a_.size()) - 1; }
  bool finite() const { return finite_; }
  std::int64_t a(int n) const;
  std::int64_t p(int n) const;
  std::int64_t q(int n) const;
  std::int64_t max_quotient() const;

  std::int64_t level_a(int n) const { return a(n - 1); }
  std::int64_t level_p(int n) const { return p(n - 1); }
  std::int64_t level_q(int n) const { return q(n - 1); }
  int max_level() const { return depth() + 1; }

 private:
  void build_convergents();

  std::vector<std::int64_t> a_;
  std::vector<std::int64_t> p_, q_;  // shifted by one: p_[0] = p(-1)
  bool finite_ = false;
};

struct ClosestReturn {
  int n = 0;
  std::int64_t q = 0;
  std::int64_t p = 0;
  BigReal y;          // distance from U to the point q_n
  long double error;  // orbit error bound at q_n
  int side = 0;       // +1 right of U, -1 left
};

// Levels n_from..n_to. Throws OrbitTooShort when q_{n_to} exceeds the orbit.
std::vector<ClosestReturn> closest_returns(const CriticalOrbit& orbit, const ContinuedFraction& cf,
                                           int n_from, int n_to);

struct ClosestReturnCheck {
  bool strictly_decreasing = true;
  bool alternating = true;
  int first_violation = 0;
};
ClosestReturnCheck check_closest_returns(const std::vector<ClosestReturn>& returns);

// A target rotation number: a rational p/q or an irrational given to working
// precision.
struct Target {
  std::optional<Rational> rational;
  BigReal value;

  static Target golden(Precision bits);
  static Target of(Rational r, Precision bits);
};

struct SearchOptions {
  BigReal tol_t = BigReal::power_of_two(-60, kDefaultPrecision);
  std::int64_t max_iters = 100000;
  OrbitOptions orbit;
  BigReal lo = BigReal(0.0, kDefaultPrecision);
  BigReal hi = BigReal(1.0, kDefaultPrecision);
  // Called with the current bracket, its precision and the step count.
  std::function<void(const BigReal&, const BigReal&, Precision, int)> progress;
};

struct SearchResult {
  BigReal t;
  BigReal lo, hi;
  int steps = 0;
  // True when the final probe could not be told apart from the target
  // within the iteration budget.
  bool budget_limited = false;
  std::int64_t deepest = 0;  // longest orbit used by a probe
  Precision precision = kDefaultPrecision;
};

// Bisection in t for a family monotone in t. Irrational targets are compared
// against winding enclosures; rational targets p/q use the position of F^q(U)
// relative to U + p.
SearchResult find_parameter(const FlatSpotMap& family, const Target& target,
                            const SearchOptions& options);

// Checks that rotation-number enclosures are ordered along a grid in t;
// throws NonMonotone otherwise. Returns the enclosures.
std::vector<RotationNumber> monotonicity_audit(const FlatSpotMap& family, const BigReal& t_lo,
                                               const BigReal& t_hi, int points, std::int64_t iters,
                                               const OrbitOptions& options = {});

struct LockingInterval {
  int n = 0;
  Rational fraction;
  BigReal t_left, t_right, width;
  BigReal tol;
};

// The parameter interval on which F^q(U) lands in U + p for the level-n
// convergent p/q of the continued fraction.
LockingInterval locking_interval(const FlatSpotMap& family, const ContinuedFraction& cf, int n,
                                 const BigReal& tol_t, const OrbitOptions& options = {});

// Lift of F^q(U) as a function of t (the critical value after q - 1 steps).
BigReal critical_lift(const FlatSpotMap& family, const BigReal& t, std::int64_t q);

}  // namespace flatspot

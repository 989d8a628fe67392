#include "flatspot/rotation.hpp"

#include <cmath>
#include <limits>

#include "flatspot/circle.hpp"
#include "flatspot/errors.hpp"

namespace flatspot {

namespace {

BigReal to_big(const Rational& r, Precision bits) {
  return BigReal::from_int(r.p, bits) / static_cast<long>(r.q);
}

long double width_of(const Rational& lo, const Rational& hi) {
  const __int128 num = static_cast<__int128>(hi.p) * lo.q - static_cast<__int128>(lo.p) * hi.q;
  return static_cast<long double>(num) /
         (static_cast<long double>(hi.q) * static_cast<long double>(lo.q));
}

FlatSpotMap escalate(const FlatSpotMap& map, const OrbitOptions& options) {
  const Precision bits = map.precision() * 2;
  if (bits > options.ceiling) {
    fail(ErrorKind::precision_exhausted,
         "rotation number needs more than " + std::to_string(options.ceiling) + " bits");
  }
  return map.at_precision(bits);
}

// Absorption index m' when the stepper sits inside U.
std::int64_t absorbed_turns(const OrbitStepper& s) {
  return s.turns() + (s.phase().is_zero() ? 0 : 1);
}

// Winding enclosure after up to `iters` steps, stopping early on absorption
// or once the width is below `tol`.
RotationNumber enclose(FlatSpotMap map, long double tol, std::int64_t iters,
                       const OrbitOptions& options, bool& reached) {
  if (map.precision() < options.precision) map = map.at_precision(options.precision);
  while (true) {
    OrbitStepper s(map);
    RotationNumber rho;
    rho.precision = map.precision();
    rho.lower = Rational{std::numeric_limits<std::int64_t>::min() / 4, 1};
    rho.upper = Rational{std::numeric_limits<std::int64_t>::max() / 4, 1};
    bool ambiguous = false;
    reached = false;
    for (std::int64_t k = 1; k <= iters; ++k) {
      if (k > 1) s.step();
      const Placement where = s.placement();
      if (where == Placement::ambiguous) {
        ambiguous = true;
        break;
      }
      rho.iterations = k;
      if (where == Placement::absorbed) {
        rho.kind = RotationNumber::Kind::rational;
        rho.fraction = reduced(Rational{absorbed_turns(s), k});
        rho.witness = k;
        rho.lower = rho.upper = rho.fraction;
        rho.value = to_big(rho.fraction, map.precision());
        rho.error = BigReal(map.precision());
        reached = true;
        return rho;
      }
      const std::int64_t m = s.turns();
      rho.lower = std::max(rho.lower, Rational{m, k});
      rho.upper = std::min(rho.upper, Rational{m + 1, k});
      if (width_of(rho.lower, rho.upper) <= tol) {
        reached = true;
        break;
      }
    }
    if (ambiguous) {
      map = escalate(map, options);
      continue;
    }
    rho.kind = RotationNumber::Kind::irrational_approx;
    BigReal lo = to_big(rho.lower, map.precision());
    BigReal hi = to_big(rho.upper, map.precision());
    rho.value = (lo + hi) / 2L;
    rho.error = (hi - lo) / 2L;
    return rho;
  }
}

}  // namespace

bool RotationNumber::contains(const BigReal& x) const {
  const Precision bits = x.precision();
  return to_big(lower, bits) <= x && x <= to_big(upper, bits);
}

RotationNumber rotation_number(const FlatSpotMap& map, const BigReal& tol, std::int64_t max_iters,
                               const OrbitOptions& options) {
  if (!(tol > 0.0)) fail(ErrorKind::config, "rotation tolerance must be positive");
  bool reached = false;
  RotationNumber rho = enclose(map, tol.to_long_double(), max_iters, options, reached);
  if (!reached) {
    fail(ErrorKind::budget_exceeded, "rotation enclosure wider than the tolerance after " +
                                         std::to_string(max_iters) + " iterations");
  }
  return rho;
}

// ---------------------------------------------------------------- continued fractions

ContinuedFraction ContinuedFraction::golden(int depth) {
  std::vector<std::int64_t> a(static_cast<std::size_t>(depth) + 1, 1);
  a[0] = 0;
  ContinuedFraction cf = from_quotients(std::move(a));
  cf.finite_ = false;
  return cf;
}

ContinuedFraction ContinuedFraction::from_quotients(std::vector<std::int64_t> a) {
  if (a.empty()) fail(ErrorKind::config, "continued fraction needs at least a(0)");
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] < 1) fail(ErrorKind::config, "partial quotients must be positive");
  }
  ContinuedFraction cf;
  cf.a_ = std::move(a);
  cf.build_convergents();
  return cf;
}

ContinuedFraction ContinuedFraction::of_rational(Rational r) {
  r = reduced(r);
  std::vector<std::int64_t> a;
  std::int64_t p = r.p, q = r.q;
  while (q != 0) {
    std::int64_t k = p / q;
    if (p % q != 0 && p < 0) --k;  // floor for negative numerators
    a.push_back(k);
    const std::int64_t rest = p - k * q;
    p = q;
    q = rest;
  }
  ContinuedFraction cf = from_quotients(std::move(a));
  cf.finite_ = true;
  return cf;
}

ContinuedFraction ContinuedFraction::of_interval(Rational lo, Rational hi, int depth) {
  std::vector<std::int64_t> a;
  __int128 p1 = lo.p, q1 = lo.q, p2 = hi.p, q2 = hi.q;
  auto floor_div = [](__int128 p, __int128 q) {
    __int128 k = p / q;
    if ((p % q != 0) && ((p < 0) != (q < 0))) --k;
    return k;
  };
  while (static_cast<int>(a.size()) <= depth) {
    if (q1 == 0 || q2 == 0) break;
    const __int128 k1 = floor_div(p1, q1);
    const __int128 k2 = floor_div(p2, q2);
    if (k1 != k2) break;
    a.push_back(static_cast<std::int64_t>(k1));
    const __int128 r1 = p1 - k1 * q1, r2 = p2 - k2 * q2;
    p1 = q1;
    q1 = r1;
    p2 = q2;
    q2 = r2;
  }
  if (static_cast<int>(a.size()) <= depth) {
    fail(ErrorKind::insufficient_accuracy,
         "continued fraction certified only up to index " + std::to_string(static_cast<int>(a.size()) - 1));
  }
  return from_quotients(std::move(a));
}

ContinuedFraction ContinuedFraction::of_real(const BigReal& value, const BigReal& error, int depth) {
  BigReal x1 = value - abs(error);
  BigReal x2 = value + abs(error);
  std::vector<std::int64_t> a;
  while (static_cast<int>(a.size()) <= depth) {
    BigReal k1 = floor(x1), k2 = floor(x2);
    if (k1 != k2) break;
    a.push_back(k1.to_int());
    BigReal f1 = x1 - k1, f2 = x2 - k2;
    if (f1.is_zero() || f2.is_zero()) break;
    x1 = 1L / f1;
    x2 = 1L / f2;
  }
  if (static_cast<int>(a.size()) <= depth) {
    fail(ErrorKind::insufficient_accuracy,
         "continued fraction certified only up to index " + std::to_string(static_cast<int>(a.size()) - 1));
  }
  return from_quotients(std::move(a));
}

ContinuedFraction ContinuedFraction::of(const RotationNumber& rho, int depth) {
  if (rho.kind == RotationNumber::Kind::rational) return of_rational(rho.fraction);
  return of_interval(rho.lower, rho.upper, depth);
}

void ContinuedFraction::build_convergents() {
  p_.assign({1});
  q_.assign({0});
  std::int64_t pp = 0, qp = 1;  // p(-2), q(-2)
  for (std::size_t i = 0; i < a_.size(); ++i) {
    const std::int64_t p = a_[i] * p_.back() + pp;
    const std::int64_t q = a_[i] * q_.back() + qp;
    pp = p_.back();
    qp = q_.back();
    p_.push_back(p);
    q_.push_back(q);
  }
}

std::int64_t ContinuedFraction::a(int n) const {
  if (n < 0 || n > depth()) {
    fail(ErrorKind::undefined_at_level, "partial quotient a(" + std::to_string(n) + ") not available");
  }
  return a_[static_cast<std::size_t>(n)];
}

std::int64_t ContinuedFraction::p(int n) const {
  if (n < -1 || n > depth()) {
    fail(ErrorKind::undefined_at_level, "convergent p(" + std::to_string(n) + ") not available");
  }
  return p_[static_cast<std::size_t>(n + 1)];
}

std::int64_t ContinuedFraction::q(int n) const {
  if (n < -1 || n > depth()) {
    fail(ErrorKind::undefined_at_level, "convergent q(" + std::to_string(n) + ") not available");
  }
  return q_[static_cast<std::size_t>(n + 1)];
}

std::int64_t ContinuedFraction::max_quotient() const {
  std::int64_t m = 0;
  for (std::size_t i = 1; i < a_.size(); ++i) m = std::max(m, a_[i]);
  return m;
}

// ---------------------------------------------------------------- closest returns

std::vector<ClosestReturn> closest_returns(const CriticalOrbit& orbit, const ContinuedFraction& cf,
                                           int n_from, int n_to) {
  std::vector<ClosestReturn> out;
  for (int n = n_from; n <= n_to; ++n) {
    ClosestReturn c;
    c.n = n;
    c.q = cf.level_q(n);
    c.p = cf.level_p(n);
    if (c.q < 1) fail(ErrorKind::undefined_at_level, "level " + std::to_string(n) + " has q = 0");
    orbit.require(c.q);
    c.y = orbit.distance_to_flat_spot(c.q);
    c.error = orbit.error(c.q);
    c.side = orbit.side(c.q);
    out.push_back(std::move(c));
  }
  return out;
}

ClosestReturnCheck check_closest_returns(const std::vector<ClosestReturn>& returns) {
  ClosestReturnCheck check;
  for (std::size_t i = 1; i < returns.size(); ++i) {
    if (returns[i].q == returns[i - 1].q) continue;  // repeated denominator at the lowest levels
    if (!(returns[i].y < returns[i - 1].y) && check.strictly_decreasing) {
      check.strictly_decreasing = false;
      if (check.first_violation == 0) check.first_violation = returns[i].n;
    }
    if (returns[i].side != -returns[i - 1].side && check.alternating) {
      check.alternating = false;
      if (check.first_violation == 0) check.first_violation = returns[i].n;
    }
  }
  return check;
}

// ---------------------------------------------------------------- parameter search

Target Target::golden(Precision bits) { return Target{std::nullopt, golden_mean(bits)}; }

Target Target::of(Rational r, Precision bits) {
  r = reduced(r);
  return Target{r, to_big(r, bits)};
}

BigReal critical_lift(const FlatSpotMap& family, const BigReal& t, std::int64_t q) {
  FlatSpotMap map = family.with_t(t);
  OrbitStepper s(map);
  for (std::int64_t k = 1; k < q; ++k) s.step();
  return s.lift();
}

namespace {

enum class Verdict { low, high, equal, undecided };

Verdict probe_irrational(FlatSpotMap map, const BigReal& target, std::int64_t iters,
                         const OrbitOptions& options, std::int64_t& used) {
  while (true) {
    OrbitStepper s(map);
    bool ambiguous = false;
    for (std::int64_t k = 1; k <= iters; ++k) {
      if (k > 1) s.step();
      used = std::max(used, k);
      const Placement where = s.placement();
      if (where == Placement::ambiguous) {
        ambiguous = true;
        break;
      }
      if (where == Placement::absorbed) {
        BigReal d = BigReal::from_int(absorbed_turns(s), map.precision()) - target * static_cast<long>(k);
        return d.sign() < 0 ? Verdict::low : Verdict::high;
      }
      const std::int64_t m = s.turns();
      BigReal kt = target * static_cast<long>(k);
      if ((BigReal::from_int(m + 1, map.precision()) - kt).sign() < 0) return Verdict::low;
      if ((BigReal::from_int(m, map.precision()) - kt).sign() > 0) return Verdict::high;
    }
    if (!ambiguous) return Verdict::undecided;
    map = escalate(map, options);
  }
}

Verdict probe_rational(FlatSpotMap map, const Rational& target, const OrbitOptions& options,
                       std::int64_t& used) {
  while (true) {
    OrbitStepper s(map);
    for (std::int64_t k = 1; k < target.q; ++k) s.step();
    used = std::max(used, target.q);
    BigReal x = s.lift() - target.p;
    const long double e = s.error();
    const long double to_l = abs(x - map.l()).to_long_double();
    const long double to_r = abs(x - map.r()).to_long_double();
    if (to_l > e && to_r > e) {
      if (x < map.l()) return Verdict::low;
      if (x > map.r()) return Verdict::high;
      return Verdict::equal;
    }
    map = escalate(map, options);
  }
}

}  // namespace

SearchResult find_parameter(const FlatSpotMap& family, const Target& target,
                            const SearchOptions& options) {
  if (!(options.tol_t > 0.0)) fail(ErrorKind::config, "tol_t must be positive");
  Precision bits = std::max(options.orbit.precision, family.precision());
  FlatSpotMap fam = family.at_precision(bits);
  SearchResult result;
  BigReal lo = options.lo.with_precision(bits);
  BigReal hi = options.hi.with_precision(bits);
  bool found = false;
  while (hi - lo > options.tol_t) {
    BigReal floor_width = BigReal::power_of_two(-static_cast<long>(bits) + 8, bits);
    if (hi - lo < floor_width) {
      bits *= 2;
      if (bits > options.orbit.ceiling) {
        fail(ErrorKind::precision_exhausted, "parameter bisection needs more than " +
                                                 std::to_string(options.orbit.ceiling) + " bits");
      }
      fam = family.at_precision(bits);
      lo = lo.with_precision(bits);
      hi = hi.with_precision(bits);
    }
    BigReal mid = (lo + hi) / 2L;
    FlatSpotMap probe_map = fam.with_t(mid);
    Verdict v;
    if (target.rational) {
      v = probe_rational(probe_map, *target.rational, options.orbit, result.deepest);
    } else {
      v = probe_irrational(probe_map, target.value, options.max_iters, options.orbit, result.deepest);
    }
    ++result.steps;
    if (options.progress && result.steps % 16 == 0) options.progress(lo, hi, bits, result.steps);
    if (v == Verdict::low) {
      lo = mid;
    } else if (v == Verdict::high) {
      hi = mid;
    } else {
      result.t = mid;
      result.budget_limited = v == Verdict::undecided;
      found = true;
      break;
    }
  }
  if (!found) result.t = (lo + hi) / 2L;
  result.lo = lo;
  result.hi = hi;
  result.precision = bits;
  return result;
}

std::vector<RotationNumber> monotonicity_audit(const FlatSpotMap& family, const BigReal& t_lo,
                                               const BigReal& t_hi, int points, std::int64_t iters,
                                               const OrbitOptions& options) {
  if (points < 2) fail(ErrorKind::config, "audit needs at least two grid points");
  std::vector<RotationNumber> out;
  for (int i = 0; i < points; ++i) {
    BigReal t = t_lo + (t_hi - t_lo) * static_cast<long>(i) / static_cast<long>(points - 1);
    bool reached = false;
    out.push_back(enclose(family.with_t(t), 0.0L, iters, options, reached));
    if (i > 0 && out[i].upper < out[i - 1].lower) {
      fail(ErrorKind::non_monotone, "rotation number decreases between t = " +
                                        (t_lo + (t_hi - t_lo) * static_cast<long>(i - 1) /
                                                    static_cast<long>(points - 1)).to_string(12) +
                                        " and t = " + t.to_string(12));
    }
  }
  return out;
}

LockingInterval locking_interval(const FlatSpotMap& family, const ContinuedFraction& cf, int n,
                                 const BigReal& tol_t, const OrbitOptions& options) {
  if (!(tol_t > 0.0)) fail(ErrorKind::config, "tol_t must be positive");
  LockingInterval li;
  li.n = n;
  li.fraction = Rational{cf.level_p(n), cf.level_q(n)};
  if (li.fraction.q < 1) fail(ErrorKind::undefined_at_level, "level " + std::to_string(n) + " has q = 0");
  const Precision bits = std::max(options.precision, family.precision());
  FlatSpotMap fam = family.at_precision(bits);
  li.tol = tol_t.with_precision(bits);

  // F^q(U) moves monotonically with t; its lift crosses l + p and then r + p.
  // Since |f(x) - x - t| <= 1 the plateau lies within p/q -+ 1.
  const BigReal centre = BigReal::from_int(li.fraction.p, bits) / li.fraction.q;
  auto root = [&](const BigReal& level) {
    BigReal lo = centre - 1L, hi = centre + 1L;
    while (hi - lo > li.tol) {
      BigReal mid = (lo + hi) / 2L;
      BigReal x = critical_lift(fam, mid, li.fraction.q) - li.fraction.p;
      if (x < level) lo = mid; else hi = mid;
    }
    return (lo + hi) / 2L;
  };
  li.t_left = root(fam.l());
  li.t_right = root(fam.r());
  li.width = li.t_right - li.t_left;
  return li;
}

}  // namespace flatspot

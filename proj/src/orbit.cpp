#include "flatspot/orbit.hpp"

#include <cmath>
#include <numeric>

#include "flatspot/circle.hpp"
#include "flatspot/errors.hpp"

namespace flatspot {

Rational reduced(Rational r) {
  if (r.q < 0) {
    r.p = -r.p;
    r.q = -r.q;
  }
  const std::int64_t g = std::gcd(r.p, r.q);
  if (g > 1) {
    r.p /= g;
    r.q /= g;
  }
  return r;
}

OrbitStepper::OrbitStepper(const FlatSpotMap& map) : map_(&map), x_(frac(map.t())) {
  if (!map.validated()) fail(ErrorKind::unvalidated_map, "orbit of an unvalidated map");
  winding_ = floor(map.t()).to_int();
  rounding_ = 16.0L * std::ldexp(1.0L, -static_cast<int>(map.precision()));
  error_ = map.parameter_error();
}

void OrbitStepper::step() {
  const long double df = map_->deriv_estimate(x_);
  BigReal y = map_->eval(x_);
  BigReal whole = floor(y);
  winding_ += whole.to_int();
  x_ = y - whole;
  error_ = df * error_ + rounding_ + map_->parameter_error() * (1.0L + df);
  sensitivity_ = df * sensitivity_ + 1.0L;
  ++index_;
}

BigReal OrbitStepper::phase() const { return frac(x_ - map_->r()); }

std::int64_t OrbitStepper::turns() const { return winding_ + floor(x_ - map_->r()).to_int(); }

Placement OrbitStepper::placement() const {
  BigReal phi = phase();
  const long double e = error_;
  const BigReal& b = map_->b();
  BigReal inner = 1L - b;  // phases in [1 - b, 1) are inside U
  // Distance of the phase to the boundary points 0 and 1 - b.
  const long double to_right = std::min(phi.to_long_double(), (1L - phi).to_long_double());
  const long double to_left = abs(phi - inner).to_long_double();
  if (phi.is_zero()) return e > 0 ? Placement::ambiguous : Placement::absorbed;
  if (e > 0 && (to_right <= e || (!b.is_zero() && to_left <= e))) return Placement::ambiguous;
  if (!b.is_zero() && phi >= inner) return Placement::absorbed;
  return Placement::outside;
}

BigReal CriticalOrbit::lift(std::int64_t i) const {
  const auto k = static_cast<std::size_t>(i);
  return points.at(k) + windings.at(k);
}

void CriticalOrbit::require(std::int64_t n) const {
  if (n > size()) {
    fail(ErrorKind::orbit_too_short, "orbit has " + std::to_string(size()) +
                                         " points but index " + std::to_string(n) + " is needed");
  }
  if (n < 0) fail(ErrorKind::orbit_too_short, "negative orbit index");
}

BigReal CriticalOrbit::distance_to_flat_spot(std::int64_t i) const {
  require(i);
  if (i == 0) return BigReal(precision);
  return map.flat_spot().distance(points[static_cast<std::size_t>(i)]);
}

BigReal CriticalOrbit::gap(std::int64_t i, std::int64_t j) const {
  if (i == 0) return distance_to_flat_spot(j);
  if (j == 0) return distance_to_flat_spot(i);
  require(std::max(i, j));
  return arc_distance(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
}

BigReal CriticalOrbit::lift_near_flat_spot(std::int64_t i, std::int64_t* shift) const {
  require(i);
  BigReal centre = (map.l() + map.r()) / 2L;
  BigReal x = lift(i);
  std::int64_t m = floor(x - centre + 0.5).to_int();
  if (shift != nullptr) *shift = m;
  return x - m;
}

int CriticalOrbit::side(std::int64_t i) const {
  BigReal x = lift_near_flat_spot(i);
  if (x > map.r()) return 1;
  if (x < map.l()) return -1;
  return 0;
}

CriticalOrbit critical_orbit(const FlatSpotMap& input, std::int64_t n, const OrbitOptions& options) {
  if (n < 1) fail(ErrorKind::config, "orbit length must be at least 1");
  Precision bits = std::max(options.precision, input.precision());
  int restarts = 0;
  while (true) {
    if (bits > options.ceiling) {
      fail(ErrorKind::precision_exhausted,
           "critical orbit needs more than " + std::to_string(options.ceiling) + " bits");
    }
    CriticalOrbit orbit{input.at_precision(bits), {}, {}, {}, {}, std::nullopt, std::nullopt, bits,
                        restarts};
    orbit.points.reserve(static_cast<std::size_t>(n) + 1);
    orbit.windings.reserve(static_cast<std::size_t>(n) + 1);
    orbit.errors.reserve(static_cast<std::size_t>(n) + 1);
    orbit.points.push_back(frac(orbit.map.r()));
    orbit.windings.push_back(floor(orbit.map.r()).to_int());
    orbit.errors.push_back(0.0L);
    orbit.sensitivities.push_back(0.0L);

    OrbitStepper stepper(orbit.map);
    long double closest = INFINITY;
    long double worst_error = 0.0L;
    bool restart = false;
    for (std::int64_t k = 1; k <= n; ++k) {
      if (k > 1) stepper.step();
      const Placement where = stepper.placement();
      if (where == Placement::ambiguous) {
        restart = true;
        break;
      }
      orbit.points.push_back(stepper.point());
      orbit.windings.push_back(stepper.winding());
      orbit.errors.push_back(stepper.error());
      orbit.sensitivities.push_back(stepper.sensitivity());
      worst_error = std::max(worst_error, stepper.error());
      if (where == Placement::absorbed) {
        orbit.absorbed_at = k;
        BigReal phi = stepper.phase();
        const std::int64_t m = stepper.turns() + (phi.is_zero() ? 0 : 1);
        orbit.rotation = reduced(Rational{m, k});
        break;
      }
      if (!orbit.map.b().is_zero()) {
        closest = std::min(closest, orbit.distance_to_flat_spot(k).to_long_double());
      }
      if (k % options.block == 0 || k == n) {
        if (worst_error > options.tolerance_factor * closest) {
          restart = true;
          break;
        }
      }
    }
    if (!restart) return orbit;
    bits *= 2;
    ++restarts;
  }
}

BigReal BackwardOrbit::length(std::int64_t i) const {
  const auto k = static_cast<std::size_t>(i);
  return right.at(k) - left.at(k);
}

BackwardOrbit backward_orbit(const FlatSpotMap& map, std::int64_t n) {
  if (!map.validated()) fail(ErrorKind::unvalidated_map, "backward orbit of an unvalidated map");
  BackwardOrbit out;
  const long double rounding = 16.0L * std::ldexp(1.0L, -static_cast<int>(map.precision()));
  BigReal shift = floor(map.l());
  out.left.push_back(map.l() - shift);
  out.right.push_back(map.r() - shift);
  out.errors.push_back(map.parameter_error());
  for (std::int64_t i = 1; i <= n; ++i) {
    BigReal lo = map.preimage(out.left.back());
    BigReal hi = map.preimage(out.right.back());
    if (hi < lo) {
      fail(ErrorKind::ordering_violation, "preimage of U at step " + std::to_string(i) +
                                              " contains the critical value");
    }
    const long double slope = std::min(map.deriv_estimate(lo), map.deriv_estimate(hi));
    const long double e = slope > 0 ? out.errors.back() / slope + rounding : INFINITY;
    BigReal whole = floor(lo);
    out.left.push_back(lo - whole);
    out.right.push_back(hi - whole);
    out.errors.push_back(e + map.parameter_error());
  }
  return out;
}

}  // namespace flatspot

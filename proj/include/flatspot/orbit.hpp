#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flatspot/big_real.hpp"
#include "flatspot/flat_map.hpp"

namespace flatspot {

struct Rational {
  std::int64_t p = 0;
  std::int64_t q = 1;

  friend bool operator==(const Rational& a, const Rational& b) { return a.p * b.q == b.p * a.q; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.p) * b.q;
    const __int128 rhs = static_cast<__int128>(b.p) * a.q;
    return lhs <=> rhs;
  }
};

Rational reduced(Rational r);

struct OrbitOptions {
  Precision precision = kDefaultPrecision;
  Precision ceiling = 4096;
  std::int64_t block = 10000;
  // Restart at doubled precision once the error bound exceeds this fraction
  // of the smallest distance from the orbit to U seen so far.
  double tolerance_factor = 1e-3;
};

// Where a point of the critical orbit sits relative to the flat spot.
enum class Placement { outside, absorbed, ambiguous };

// Iterates the critical value 1 = f(U), keeping each point as a circle
// coordinate in [0, 1) plus an integer winding, together with a first-order
// bound on the accumulated rounding error.
class OrbitStepper {
 public:
  explicit OrbitStepper(const FlatSpotMap& map);

  void step();

  std::int64_t index() const { return index_; }
  const BigReal& point() const { return x_; }
  std::int64_t winding() const { return winding_; }
  BigReal lift() const { return x_ + winding_; }
  long double error() const { return error_; }
  // d(lift)/dt along the orbit, for the effect of an uncertain parameter.
  long double sensitivity() const { return sensitivity_; }

  // frac(x - r): zero at r, in [1 - b, 1) on the rest of U.
  BigReal phase() const;
  Placement placement() const;
  // floor(lift - r): the integer m with lift in [r + m, r + m + 1).
  std::int64_t turns() const;

 private:
  const FlatSpotMap* map_;
  std::int64_t index_ = 1;
  BigReal x_;
  std::int64_t winding_ = 0;
  long double error_ = 0.0L;
  long double sensitivity_ = 1.0L;
  long double rounding_ = 0.0L;
};

// The forward orbit of the flat spot: entry 0 stands for U itself
// (represented by its right end r), entry i >= 1 is the point F^i(U).
struct CriticalOrbit {
  FlatSpotMap map;
  std::vector<BigReal> points;
  std::vector<std::int64_t> windings;
  std::vector<long double> errors;
  std::vector<long double> sensitivities;
  std::optional<std::int64_t> absorbed_at;
  std::optional<Rational> rotation;  // implied by absorption
  Precision precision = kDefaultPrecision;
  int restarts = 0;

  std::int64_t size() const { return static_cast<std::int64_t>(points.size()) - 1; }
  BigReal lift(std::int64_t i) const;
  long double error(std::int64_t i) const { return errors.at(static_cast<std::size_t>(i)); }
  long double sensitivity(std::int64_t i) const {
    return sensitivities.at(static_cast<std::size_t>(i));
  }
  // Shortest distance from point i to U (zero for i = 0).
  BigReal distance_to_flat_spot(std::int64_t i) const;
  // |(i, j)|: shortest arc between two orbit entries; entry 0 is the arc U.
  BigReal gap(std::int64_t i, std::int64_t j) const;
  // lift(i) - m, shifted by an integer m into [c - 1/2, c + 1/2) where c is
  // the midpoint of U.
  BigReal lift_near_flat_spot(std::int64_t i, std::int64_t* shift = nullptr) const;
  // +1 when point i lies right of U (measured in the lift), -1 when left.
  int side(std::int64_t i) const;
  void require(std::int64_t n) const;  // throws OrbitTooShort
};

// Computes F^1(U) ... F^N(U). Truncates and records the rotation number when
// the orbit falls into U. Restarts at doubled precision whenever the error
// bound becomes comparable to the distances the orbit resolves.
CriticalOrbit critical_orbit(const FlatSpotMap& map, std::int64_t n, const OrbitOptions& options = {});

// Backward orbit of U: arc i is F^{-i}(U), stored by lift endpoints with
// left[i] in [0, 1) and right[i] = left[i] + length.
struct BackwardOrbit {
  std::vector<BigReal> left;
  std::vector<BigReal> right;
  std::vector<long double> errors;

  std::int64_t size() const { return static_cast<std::int64_t>(left.size()) - 1; }
  BigReal length(std::int64_t i) const;
};

BackwardOrbit backward_orbit(const FlatSpotMap& map, std::int64_t n);

}  // namespace flatspot

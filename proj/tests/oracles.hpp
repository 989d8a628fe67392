#pragma once

// Reference values computed without the library: plain floating point,
// integer arithmetic or closed forms.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using ld = long double;

inline ld bridge(ld u, ld nu) {
  const ld a = std::pow(u, nu), c = std::pow(1.0L - u, nu);
  return a / (a + c);
}

inline ld bridge_slope(ld u, ld nu) {
  const ld a = std::pow(u, nu), c = std::pow(1.0L - u, nu);
  const ld da = nu * std::pow(u, nu - 1.0L), dc = -nu * std::pow(1.0L - u, nu - 1.0L);
  return (da * c - a * dc) / ((a + c) * (a + c));
}

// Lift of the canonical map with U = [0, b].
inline ld canonical(ld x, ld b, ld t, ld nu) {
  const ld cell = std::floor(x);
  const ld y = x - cell;
  if (y <= b) return cell + t;
  return cell + t + bridge((y - b) / (1.0L - b), nu);
}

// The printed Appendix B formula, before reduction mod 1.
inline ld appendix_b(ld x, ld b, ld t) {
  const ld v = (x - 1.0L) / b;
  const ld w = (x + b - 1.0L) / b;
  return v * v * v * (1.0L - 3.0L * w + 6.0L * w * w - 10.0L * w * w * w + std::pow(x - 1.0L, 3)) + t;
}

// Partial quotients of p/q by the Euclidean algorithm, a(0) first.
inline std::vector<std::int64_t> euclid(std::int64_t p, std::int64_t q) {
  std::vector<std::int64_t> a;
  while (q != 0) {
    a.push_back(p / q);
    p = std::exchange(q, p % q);
  }
  return a;
}

inline std::vector<std::int64_t> fibonacci(int count) {
  std::vector<std::int64_t> f{1, 1};
  while (static_cast<int>(f.size()) < count) f.push_back(f[f.size() - 1] + f[f.size() - 2]);
  f.resize(static_cast<std::size_t>(count));
  return f;
}

struct Fraction {
  std::int64_t p, q;
};

inline Fraction reduce(Fraction f) {
  const std::int64_t g = std::gcd(f.p, f.q);
  return {f.p / g, f.q / g};
}

inline Fraction cross_ratio(Fraction a, Fraction b, Fraction c, Fraction d) {
  // All four share a denominator in the cases used; work over it.
  const std::int64_t ab = b.p - a.p, bc = c.p - b.p, cd = d.p - c.p;
  return reduce({ab * cd, (ab + bc) * (bc + cd)});
}

// lim_{z -> b} of the power-law quotient: (b^nu - a^nu) / ((b - a) nu b^(nu - 1)).
inline ld power_law_limit(ld a, ld b, ld nu) {
  return (std::pow(b, nu) - std::pow(a, nu)) / ((b - a) * nu * std::pow(b, nu - 1.0L));
}

// Entries of [[1/2, 1/2], [1, 0]]^n from its eigen-decomposition
// (eigenvalues 1 and -1/2).
inline ld alpha_half(int n) { return 2.0L / 3.0L + std::pow(-0.5L, n) / 3.0L; }
inline ld beta_half(int n) { return 1.0L / 3.0L - std::pow(-0.5L, n) / 3.0L; }

// Sides of the closest returns of the rigid rotation by rho: +1 when
// frac(q rho) is small (right of 0), -1 when it is close to 1.
inline std::vector<int> rigid_sides(ld rho, const std::vector<std::int64_t>& qs) {
  std::vector<int> sides;
  for (auto q : qs) {
    const ld x = q * rho - std::floor(q * rho);
    sides.push_back(x < 0.5L ? 1 : -1);
  }
  return sides;
}

}  // namespace oracle

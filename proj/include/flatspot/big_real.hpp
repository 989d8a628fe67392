#pragma once

#include <mpfr.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace flatspot {

// Working precision in bits.
using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 256;

// Adjustable-precision binary floating point number backed by MPFR.
//
// Every value carries its own precision. Binary operations round to the
// larger of the two operand precisions; operations with machine scalars keep
// the precision of the BigReal operand. All rounding is to nearest.
class BigReal {
 public:
  BigReal() : BigReal(kDefaultPrecision) {}
  explicit BigReal(Precision bits);
  BigReal(double value, Precision bits);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  static BigReal from_int(std::int64_t value, Precision bits);
  // Parses a decimal string ("0.5", "-1.25e-3"); throws Error(config) on bad
  // input. When `exact` is given it reports whether no rounding occurred.
  static BigReal parse(std::string_view text, Precision bits, bool* exact = nullptr);
  static BigReal power_of_two(long exponent, Precision bits);

  Precision precision() const { return mpfr_get_prec(value_); }
  // Copy rounded (or exactly widened) to a new precision.
  BigReal with_precision(Precision bits) const;

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  // Binary exponent e with |x| in [2^(e-1), 2^e); meaningless for zero.
  long exponent() const { return mpfr_get_exp(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(value_, MPFR_RNDN); }
  std::int64_t to_int() const;  // truncates toward zero

  // Scientific notation with the given number of significant digits; 0 means
  // enough digits to round-trip the precision.
  std::string to_string(int digits = 0) const;
  // Decimal expansion that parses back to exactly this value at any precision
  // at least as large as the current one.
  std::string to_exact_string() const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);
  BigReal operator-() const;

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);

  friend bool operator==(const BigReal& a, const BigReal& b) {
    return mpfr_equal_p(a.value_, b.value_) != 0;
  }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);

 private:
  mpfr_t value_;
};

BigReal operator+(const BigReal& a, long b);
BigReal operator-(const BigReal& a, long b);
BigReal operator-(long a, const BigReal& b);
BigReal operator*(const BigReal& a, long b);
BigReal operator/(const BigReal& a, long b);
BigReal operator/(long a, const BigReal& b);
BigReal operator+(const BigReal& a, double b);
BigReal operator-(const BigReal& a, double b);
BigReal operator-(double a, const BigReal& b);
BigReal operator*(const BigReal& a, double b);
BigReal operator/(const BigReal& a, double b);

template <std::integral I>
BigReal operator+(I a, const BigReal& b) { return b + static_cast<long>(a); }
template <std::integral I>
BigReal operator*(I a, const BigReal& b) { return b * static_cast<long>(a); }
template <std::integral I>
  requires(!std::same_as<I, long>)
BigReal operator+(const BigReal& a, I b) { return a + static_cast<long>(b); }
template <std::integral I>
  requires(!std::same_as<I, long>)
BigReal operator-(const BigReal& a, I b) { return a - static_cast<long>(b); }
template <std::integral I>
  requires(!std::same_as<I, long>)
BigReal operator-(I a, const BigReal& b) { return static_cast<long>(a) - b; }
template <std::integral I>
  requires(!std::same_as<I, long>)
BigReal operator*(const BigReal& a, I b) { return a * static_cast<long>(b); }
template <std::integral I>
  requires(!std::same_as<I, long>)
BigReal operator/(const BigReal& a, I b) { return a / static_cast<long>(b); }
template <std::integral I>
  requires(!std::same_as<I, long>)
BigReal operator/(I a, const BigReal& b) { return static_cast<long>(a) / b; }
inline BigReal operator*(double a, const BigReal& b) { return b * a; }
inline BigReal operator+(double a, const BigReal& b) { return b + a; }

int compare(const BigReal& a, double b);
inline bool operator<(const BigReal& a, double b) { return compare(a, b) < 0; }
inline bool operator<=(const BigReal& a, double b) { return compare(a, b) <= 0; }
inline bool operator>(const BigReal& a, double b) { return compare(a, b) > 0; }
inline bool operator>=(const BigReal& a, double b) { return compare(a, b) >= 0; }
inline bool operator<(double a, const BigReal& b) { return compare(b, a) > 0; }
inline bool operator>(double a, const BigReal& b) { return compare(b, a) < 0; }

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal log(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal pow(const BigReal& x, const BigReal& y);
BigReal pow(const BigReal& x, unsigned long n);
BigReal floor(const BigReal& x);
BigReal ldexp(const BigReal& x, long e);
const BigReal& min(const BigReal& a, const BigReal& b);
const BigReal& max(const BigReal& a, const BigReal& b);

// Unit in the last place of x at its own precision (2^-precision for zero).
long double ulp(const BigReal& x);

// (sqrt(5) - 1) / 2 correctly rounded at the given precision.
BigReal golden_mean(Precision bits);

}  // namespace flatspot

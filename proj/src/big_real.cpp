#include "flatspot/big_real.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>

#include "flatspot/errors.hpp"

namespace flatspot {

namespace {

constexpr mpfr_rnd_t kRound = MPFR_RNDN;

Precision widest(const BigReal& a, const BigReal& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

BigReal::BigReal(Precision bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(double value, Precision bits) {
  mpfr_init2(value_, bits);
  mpfr_set_d(value_, value, kRound);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, kRound);
}

BigReal::BigReal(BigReal&& other) noexcept {
  value_[0] = other.value_[0];
  other.value_[0]._mpfr_d = nullptr;
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    if (precision() != other.precision()) {
      mpfr_set_prec(value_, other.precision());
    }
    mpfr_set(value_, other.value_, kRound);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this != &other) {
    mpfr_swap(value_, other.value_);
  }
  return *this;
}

BigReal::~BigReal() {
  if (value_[0]._mpfr_d != nullptr) {
    mpfr_clear(value_);
  }
}

BigReal BigReal::from_int(std::int64_t value, Precision bits) {
  BigReal r(bits);
  mpfr_set_si(r.value_, static_cast<long>(value), kRound);
  return r;
}

BigReal BigReal::parse(std::string_view text, Precision bits, bool* exact) {
  BigReal r(bits);
  const std::string s(text);
  if (s.empty()) fail(ErrorKind::config, "empty number");
  char* end = nullptr;
  const int ternary = mpfr_strtofr(r.value_, s.c_str(), &end, 10, kRound);
  if (end != s.c_str() + s.size()) {
    fail(ErrorKind::config, "not a decimal number: '" + s + "'");
  }
  if (exact != nullptr) *exact = ternary == 0;
  if (!r.is_finite()) {
    fail(ErrorKind::config, "not a finite number: '" + s + "'");
  }
  return r;
}

BigReal BigReal::power_of_two(long exponent, Precision bits) {
  BigReal r(bits);
  mpfr_set_ui_2exp(r.value_, 1, exponent, kRound);
  return r;
}

BigReal BigReal::with_precision(Precision bits) const {
  BigReal r(bits);
  mpfr_set(r.value_, value_, kRound);
  return r;
}

std::int64_t BigReal::to_int() const {
  return static_cast<std::int64_t>(mpfr_get_si(value_, MPFR_RNDZ));
}

std::string BigReal::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return sign() > 0 ? "inf" : "-inf";
  if (digits <= 0) {
    digits = static_cast<int>(mpfr_get_str_ndigits(10, precision()));
  }
  char* buffer = nullptr;
  const std::string format = "%." + std::to_string(digits - 1) + "Re";
  mpfr_asprintf(&buffer, format.c_str(), value_);
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

std::string BigReal::to_exact_string() const {
  if (is_zero()) return "0";
  if (!is_finite()) return to_string();
  // A p-bit binary fraction with exponent e has at most p + |e| significant
  // decimal digits.
  const long digits = precision() + std::labs(exponent()) + 2;
  std::string text = to_string(static_cast<int>(digits));
  const auto e_pos = text.find('e');
  std::string mantissa = text.substr(0, e_pos);
  const std::string tail = text.substr(e_pos);
  if (mantissa.find('.') != std::string::npos) {
    while (!mantissa.empty() && mantissa.back() == '0') mantissa.pop_back();
    if (!mantissa.empty() && mantissa.back() == '.') mantissa.pop_back();
  }
  return mantissa + tail;
}

BigReal& BigReal::operator+=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRound);
  mpfr_add(value_, value_, rhs.value_, kRound);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRound);
  mpfr_sub(value_, value_, rhs.value_, kRound);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRound);
  mpfr_mul(value_, value_, rhs.value_, kRound);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRound);
  mpfr_div(value_, value_, rhs.value_, kRound);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal r(precision());
  mpfr_neg(r.value_, value_, kRound);
  return r;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(widest(a, b));
  mpfr_add(r.get(), a.get(), b.get(), kRound);
  return r;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(widest(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), kRound);
  return r;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(widest(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), kRound);
  return r;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r(widest(a, b));
  mpfr_div(r.get(), a.get(), b.get(), kRound);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

BigReal operator+(const BigReal& a, long b) {
  BigReal r(a.precision());
  mpfr_add_si(r.get(), a.get(), b, kRound);
  return r;
}

BigReal operator-(const BigReal& a, long b) {
  BigReal r(a.precision());
  mpfr_sub_si(r.get(), a.get(), b, kRound);
  return r;
}

BigReal operator-(long a, const BigReal& b) {
  BigReal r(b.precision());
  mpfr_si_sub(r.get(), a, b.get(), kRound);
  return r;
}

BigReal operator*(const BigReal& a, long b) {
  BigReal r(a.precision());
  mpfr_mul_si(r.get(), a.get(), b, kRound);
  return r;
}

BigReal operator/(const BigReal& a, long b) {
  BigReal r(a.precision());
  mpfr_div_si(r.get(), a.get(), b, kRound);
  return r;
}

BigReal operator/(long a, const BigReal& b) {
  BigReal r(b.precision());
  mpfr_si_div(r.get(), a, b.get(), kRound);
  return r;
}

BigReal operator+(const BigReal& a, double b) {
  BigReal r(a.precision());
  mpfr_add_d(r.get(), a.get(), b, kRound);
  return r;
}

BigReal operator-(const BigReal& a, double b) {
  BigReal r(a.precision());
  mpfr_sub_d(r.get(), a.get(), b, kRound);
  return r;
}

BigReal operator-(double a, const BigReal& b) {
  BigReal r(b.precision());
  mpfr_d_sub(r.get(), a, b.get(), kRound);
  return r;
}

BigReal operator*(const BigReal& a, double b) {
  BigReal r(a.precision());
  mpfr_mul_d(r.get(), a.get(), b, kRound);
  return r;
}

BigReal operator/(const BigReal& a, double b) {
  BigReal r(a.precision());
  mpfr_div_d(r.get(), a.get(), b, kRound);
  return r;
}

int compare(const BigReal& a, double b) { return mpfr_cmp_d(a.get(), b); }

BigReal abs(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_abs(r.get(), x.get(), kRound);
  return r;
}

BigReal sqrt(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_sqrt(r.get(), x.get(), kRound);
  return r;
}

BigReal log(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_log(r.get(), x.get(), kRound);
  return r;
}

BigReal exp(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_exp(r.get(), x.get(), kRound);
  return r;
}

BigReal pow(const BigReal& x, const BigReal& y) {
  BigReal r(std::max(x.precision(), y.precision()));
  mpfr_pow(r.get(), x.get(), y.get(), kRound);
  return r;
}

BigReal pow(const BigReal& x, unsigned long n) {
  BigReal r(x.precision());
  mpfr_pow_ui(r.get(), x.get(), n, kRound);
  return r;
}

BigReal floor(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_floor(r.get(), x.get());
  return r;
}

BigReal ldexp(const BigReal& x, long e) {
  BigReal r(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, kRound);
  return r;
}

const BigReal& min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }
const BigReal& max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

long double ulp(const BigReal& x) {
  if (x.is_zero() || !x.is_finite()) {
    return std::ldexp(1.0L, -static_cast<int>(x.precision()));
  }
  return std::ldexp(1.0L, static_cast<int>(x.exponent() - x.precision()));
}

BigReal golden_mean(Precision bits) {
  BigReal five = BigReal::from_int(5, bits + 16);
  BigReal g = (sqrt(five) - 1) / 2;
  return g.with_precision(bits);
}

}  // namespace flatspot

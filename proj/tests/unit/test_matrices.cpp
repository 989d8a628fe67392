#include <doctest.h>

#include <cmath>

#include "flatspot/errors.hpp"
#include "flatspot/matrices.hpp"
#include "oracles.hpp"

using namespace flatspot;

namespace {

constexpr Precision kBits = 128;

BigReal big(const char* s) { return BigReal::parse(s, kBits); }

MatrixSeq half_sequence(std::size_t count) { return MatrixSeq::constant(big("2"), big("0.5"), count); }

}  // namespace

TEST_CASE("a single matrix") {
  auto seq = MatrixSeq::constant(big("3"), 1L / big("3"), 4);
  auto p = compose(seq, 1);
  auto b1 = seq.matrix(1);
  CHECK(p.m.a == b1.a);
  CHECK(p.m.b == b1.b);
  CHECK(p.m.c == b1.c);
  CHECK(p.m.d == b1.d);
  CHECK(abs(b1.a - 1L / big("3")) < 1e-30);
  CHECK(abs(b1.b - 1L / big("3")) < 1e-30);
}

TEST_CASE("products for nu = 2 and b = 1/2") {
  auto seq = half_sequence(10001);
  Product p = compose(seq, 1);
  for (std::size_t n = 1; n <= 10000; ++n) {
    if (n > 1) p = Product{seq.matrix(n) * p.m, n, std::nullopt};
    CHECK(p.alpha() <= 2.0);
    CHECK(p.beta() <= 1.0);
  }
  for (int n : {1, 2, 3, 10, 51, 100}) {
    auto q = compose(seq, static_cast<std::size_t>(n));
    const BigReal sign = (n % 2 == 0 ? 1L : -1L) * BigReal::power_of_two(-n, kBits);
    // Eigen-decomposition oracle: alpha = 2/3 + (-1/2)^n / 3, beta = 1/3 - (-1/2)^n / 3.
    BigReal alpha = (2L + sign) / 3L;
    BigReal beta = (1L - sign) / 3L;
    CHECK(abs(q.alpha() - alpha) < 1e-20);
    CHECK(abs(q.beta() - beta) < 1e-20);
    CHECK(q.alpha().to_double() == doctest::Approx(static_cast<double>(oracle::alpha_half(n))));
    CHECK(q.beta().to_double() == doctest::Approx(static_cast<double>(oracle::beta_half(n))));
    CHECK(abs(closed_form_alpha(seq, static_cast<std::size_t>(n)) - q.alpha()) < 1e-20);
    CHECK(abs(closed_form_beta(seq, static_cast<std::size_t>(n)) - q.beta()) < 1e-20);
  }
  auto last = compose(seq, 10000);
  REQUIRE(last.closed_form_deviation);
  CHECK(*last.closed_form_deviation < 1e-20);
}

TEST_CASE("closed forms hold for a varying admissible sequence") {
  MatrixSeq seq{big("2"), {}};
  for (int k = 0; k < 40; ++k) seq.b.push_back(big("0.5") / (1L + BigReal(0.1 * (k % 7), kBits)));
  seq.check_admissible();
  for (std::size_t n = 1; n < 39; ++n) {
    auto p = compose(seq, n);
    CHECK(abs(closed_form_alpha(seq, n) - p.alpha()) < 1e-20);
    CHECK(abs(closed_form_beta(seq, n) - p.beta()) < 1e-20);
  }
}

TEST_CASE("eigenvalues and norms") {
  CHECK(abs(spectral_norm(Mat2::identity(kBits)) - 1L) < 1e-30);
  // [[1/3, 1/3], [1, 0]]: characteristic polynomial x^2 - x/3 - 1/3.
  auto m3 = MatrixSeq::constant(big("3"), 1L / big("3"), 2).matrix(1);
  BigReal rho3 = (1L + sqrt(big("13"))) / 6L;
  CHECK(abs(spectral_radius(m3) - rho3) < 1e-20);
  CHECK(rho3.to_double() == doctest::Approx(0.7676).epsilon(1e-4));
  // [[1/2, 1/2], [1, 0]]: eigenvalues 1 and -1/2.
  auto m2 = half_sequence(2).matrix(1);
  CHECK(abs(spectral_radius(m2) - 1L) < 1e-20);
  CHECK(abs(m2.det() + big("0.5")) < 1e-30);
  CHECK(abs(m2.trace() - big("0.5")) < 1e-30);
  // Some power of the nu = 3 matrix contracts below 0.8.
  Mat2 power = m3;
  int k = 1;
  while (spectral_norm(power) >= 0.8 && k < 50) {
    power = m3 * power;
    ++k;
  }
  CHECK(k < 50);
  // The nu = 2 products do not decay.
  auto seq = half_sequence(2001);
  for (std::size_t n : {10, 100, 1000, 2000}) CHECK(spectral_norm(compose(seq, n).m) > 0.5);
}

TEST_CASE("admissibility") {
  MatrixSeq seq{big("3"), {big("0.3"), big("0.4")}};
  CHECK_THROWS_AS(seq.check_admissible(), Error);
  MatrixSeq one{big("3"), {big("0.3")}};
  CHECK_THROWS_AS(one.check_admissible(), Error);
  MatrixSeq low{big("1"), {big("0.3"), big("0.3")}};
  CHECK_THROWS_AS(low.check_admissible(), Error);
}

TEST_CASE("contraction length") {
  auto r3 = find_N(big("3"));
  CHECK(r3.N >= 1);
  CHECK(r3.worst_norm < 0.8);
  auto r205 = find_N(big("2.05"));
  CHECK(r205.N > r3.N);
  CHECK(r205.worst_norm < 0.8);
  try {
    find_N(big("2"));
    FAIL("found a contraction length at nu = 2");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_found);
  }
}

TEST_CASE("zeta residuals vanish on an exact recursion") {
  const BigReal nu = big("3");
  auto cf = ContinuedFraction::golden(30);
  std::vector<SEntry> s;
  s.push_back(SEntry{5, big("1.7"), std::nullopt});
  s.push_back(SEntry{6, big("2.1"), std::nullopt});
  for (int n = 6; n < 25; ++n) {
    const auto& cur = s.back();
    const auto& prev = s[s.size() - 2];
    BigReal c1 = (1L - 1L / pow(nu, static_cast<unsigned long>(cf.level_a(n)))) / (nu - 1L);
    BigReal c2 = 1L / pow(nu, static_cast<unsigned long>(cf.level_a(n - 1)));
    s.push_back(SEntry{n + 1, c1 * cur.s + c2 * prev.s, std::nullopt});
  }
  auto z = zeta_track(s, cf, nu);
  CHECK(z.max_residual < 1e-30);
  CHECK(z.max_norm < 10.0);
  std::vector<SEntry> gap{s[0], s[2]};
  CHECK_THROWS_AS(zeta_track(gap, cf, nu), Error);
}

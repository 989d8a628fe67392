#include <doctest.h>

#include <cmath>

#include "flatspot/circle.hpp"
#include "flatspot/errors.hpp"
#include "flatspot/orbit.hpp"
#include "flatspot/rotation.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace flatspot;

namespace {

FlatSpotMap canon(const char* t, const char* nu = "3", Precision p = 128) {
  return FlatSpotMap::canonical("0.5", t, nu, p).accept();
}

BigReal golden(Precision p) { return (sqrt(BigReal(5.0, p)) - 1L) / 2L; }

}  // namespace

TEST_CASE("orbit of length one is the image of U") {
  auto f = canon("0.3");
  OrbitOptions oo;
  oo.precision = 128;
  auto orbit = critical_orbit(f, 1, oo);
  REQUIRE(orbit.size() == 1);
  CHECK(frac(orbit.lift(1)) == frac(f.eval(BigReal(0.2, 128))));
}

TEST_CASE("a constructed period-two plateau") {
  // f(U) = 3/4 and f(3/4) = 3/4 + B(1/2) = 5/4, inside U + 1.
  const long double second = oracle::canonical(0.75L, 0.5L, 0.75L, 3.0L);
  REQUIRE(second - 1.0L >= 0.0L);
  REQUIRE(second - 1.0L <= 0.5L);
  auto f = canon("0.75");
  auto orbit = critical_orbit(f, 10);
  REQUIRE(orbit.absorbed_at);
  CHECK(*orbit.absorbed_at == 2);
  REQUIRE(orbit.rotation);
  CHECK(orbit.rotation->p == 1);
  CHECK(orbit.rotation->q == 2);
  auto rho = rotation_number(f, BigReal::power_of_two(-30, 128), 1000);
  CHECK(rho.kind == RotationNumber::Kind::rational);
  CHECK(rho.fraction.p == 1);
  CHECK(rho.fraction.q == 2);
  CHECK(rho.witness == 2);
}

TEST_CASE("a fixed point gives rotation number zero") {
  auto rho = rotation_number(canon("0"), BigReal::power_of_two(-30, 128), 1000);
  CHECK(rho.kind == RotationNumber::Kind::rational);
  CHECK(rho.fraction.p == 0);
  CHECK(rho.fraction.q == 1);
}

TEST_CASE("golden mean expansion") {
  auto cf = ContinuedFraction::golden(30);
  const auto fib = oracle::fibonacci(31);
  CHECK(cf.a(0) == 0);
  for (int n = 1; n <= 30; ++n) CHECK(cf.a(n) == 1);
  for (int n = 0; n <= 30; ++n) CHECK(cf.q(n) == fib[static_cast<std::size_t>(n)]);
  CHECK(cf.level_q(10) == 55);
  CHECK(cf.level_q(1) == 1);
  CHECK(cf.level_q(2) == 1);
  CHECK(cf.level_a(1) == 0);
}

TEST_CASE("rational expansions follow the Euclidean algorithm") {
  for (auto [p, q] : {std::pair<long, long>{3, 7}, {13, 29}, {21, 34}, {5, 12}}) {
    auto cf = ContinuedFraction::of_rational(Rational{p, q});
    const auto want = oracle::euclid(p, q);
    REQUIRE(cf.finite());
    REQUIRE(cf.depth() + 1 == static_cast<int>(want.size()));
    for (int n = 0; n <= cf.depth(); ++n) CHECK(cf.a(n) == want[static_cast<std::size_t>(n)]);
    CHECK(cf.q(cf.depth()) == q);
    CHECK(cf.p(cf.depth()) == p);
  }
  auto cf = ContinuedFraction::of_rational(Rational{3, 7});
  CHECK(cf.a(1) == 2);
  CHECK(cf.a(2) == 3);
}

TEST_CASE("silver mean expansion") {
  const Precision p = 256;
  BigReal silver = sqrt(BigReal(2.0, p)) - 1L;
  auto cf = ContinuedFraction::of_real(silver, BigReal::power_of_two(-200, p), 40);
  for (int n = 1; n <= 40; ++n) CHECK(cf.a(n) == 2);
  CHECK_THROWS_AS(ContinuedFraction::of_real(silver, BigReal::power_of_two(-10, p), 40), Error);
}

TEST_CASE("rigid golden rotation") {
  const Precision p = 256;
  BigReal g = golden(p);
  auto rigid = FlatSpotMap::rigid(g.to_exact_string(), p).accept();
  auto rho = rotation_number(rigid, BigReal::power_of_two(-40, p), 10000000);
  CHECK(rho.kind == RotationNumber::Kind::irrational_approx);
  CHECK(rho.error <= BigReal::power_of_two(-40, p));
  CHECK(rho.contains(g));
  CHECK(abs(rho.value - g) <= rho.error);
}

TEST_CASE("closest returns decrease and alternate like the rigid rotation") {
  const auto& run = test_support::golden_table("3", 16);
  auto cf = run.parameter.cf;
  auto returns = closest_returns(run.orbit, cf, 3, 16);
  auto check = check_closest_returns(returns);
  CHECK(check.strictly_decreasing);
  CHECK(check.alternating);
  std::vector<std::int64_t> qs;
  for (const auto& r : returns) qs.push_back(r.q);
  const auto sides = oracle::rigid_sides((std::sqrt(5.0L) - 1.0L) / 2.0L, qs);
  for (std::size_t k = 0; k < returns.size(); ++k) CHECK(returns[k].side == sides[k]);
  CHECK_THROWS_AS(closest_returns(run.orbit, cf, 3, 40), Error);
}

TEST_CASE("parameter search is reproducible and lands on the target") {
  auto family = canon("0.5", "3", 256);
  SearchOptions so;
  so.orbit.precision = 256;
  so.max_iters = 2000;
  so.tol_t = BigReal::power_of_two(-40, 256);
  auto a = find_parameter(family, Target::golden(256), so);
  auto b = find_parameter(family, Target::golden(256), so);
  CHECK(a.t == b.t);
  CHECK(a.hi - a.lo <= so.tol_t);
  CHECK(a.t.to_double() == doctest::Approx(0.81635015495107845).epsilon(1e-10));
  // Independent check: the rotation number at t* encloses the golden mean.
  auto rho = rotation_number(family.with_t(a.t), BigReal::power_of_two(-20, 256), 100000);
  CHECK(rho.contains(golden(256)));
}

TEST_CASE("rational target lands inside the plateau") {
  auto family = canon("0.5");
  SearchOptions so;
  so.max_iters = 100;
  auto r = find_parameter(family, Target::of(Rational{1, 2}, 128), so);
  auto orbit = critical_orbit(family.with_t(r.t), 10);
  REQUIRE(orbit.rotation);
  CHECK(orbit.rotation->p == 1);
  CHECK(orbit.rotation->q == 2);
}

TEST_CASE("rotation number is monotone in t") {
  auto family = canon("0.5");
  auto grid = monotonicity_audit(family, BigReal(0.0, 128), BigReal(1.0, 128), 100, 2000);
  REQUIRE(grid.size() == 100);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    CHECK(grid[k].value + grid[k].error >= grid[k - 1].value - grid[k - 1].error);
  }
}

TEST_CASE("locking intervals") {
  auto family = canon("0.5");
  auto cf = ContinuedFraction::golden(20);
  const BigReal tol = BigReal::power_of_two(-60, 128);
  SUBCASE("the 1/1 plateau is where F(U) lands in U + 1") {
    auto li = locking_interval(family, cf, 2, tol);
    CHECK(li.fraction.p == 1);
    CHECK(li.fraction.q == 1);
    // F(U) is the point t, so the plateau is t in [1, 1 + b].
    CHECK(abs(li.t_left - 1L) < 1e-15);
    CHECK(abs(li.t_right - 1.5) < 1e-15);
    BigReal mid = (li.t_left + li.t_right) / 2L;
    CHECK(family.with_t(mid).in_flat_spot(family.with_t(mid).eval(BigReal(0.25, 128))));
  }
  SUBCASE("widths shrink with the level") {
    BigReal prev(2.0, 128);
    for (int n = 3; n <= 9; ++n) {
      auto li = locking_interval(family, cf, n, tol);
      CHECK(li.fraction.q == cf.level_q(n));
      CHECK(li.width > 0.0);
      CHECK(li.width < prev);
      prev = li.width;
      auto orbit = critical_orbit(family.with_t((li.t_left + li.t_right) / 2L), 4 * li.fraction.q);
      REQUIRE(orbit.rotation);
      CHECK(orbit.rotation->p == li.fraction.p);
      CHECK(orbit.rotation->q == li.fraction.q);
    }
  }
}

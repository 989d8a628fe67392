#include <doctest.h>

#include <cmath>
#include <random>

#include "flatspot/errors.hpp"
#include "flatspot/geometry.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace flatspot;

namespace {

const std::vector<Partition>& golden_partitions() {
  static const std::vector<Partition> parts = [] {
    const auto& run = test_support::golden_table("3", 16);
    std::vector<Partition> out;
    for (int n = 2; n <= 10; ++n) out.push_back(build_partition(run.parameter.map, run.parameter.cf, n));
    return out;
  }();
  return parts;
}

const Hole* hole(const std::vector<Hole>& hs, std::int64_t index) {
  for (const auto& h : hs) {
    if (h.index == index) return &h;
  }
  return nullptr;
}

BigReal big(const char* s) { return BigReal::parse(s, 128); }

}  // namespace

TEST_CASE("partitions tile the circle") {
  for (const auto& p : golden_partitions()) {
    CHECK(static_cast<std::int64_t>(p.preimages.size()) == p.q + p.q_next);
    CHECK(static_cast<std::int64_t>(p.holes().size()) == p.q + p.q_next);
    BigReal total = p.preimage_total() + p.hole_total();
    CHECK(abs(total - 1L).to_long_double() <= p.error_bound() + 1e-60L);
  }
}

TEST_CASE("circ holes of one level are the box holes of the next") {
  const auto& parts = golden_partitions();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    for (const auto& c : parts[k - 1].circs) {
      const Hole* b = hole(parts[k].boxes, c.index);
      REQUIRE(b != nullptr);
      CHECK(abs(b->arc.start - c.arc.start) < 1e-50);
      CHECK(abs(b->arc.length - c.arc.length) < 1e-50);
    }
  }
}

TEST_CASE("holes of the next level subdivide the holes of the previous one") {
  const auto& parts = golden_partitions();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    for (const auto* h : parts[k].holes()) {
      bool inside = false;
      for (const auto* g : parts[k - 1].holes()) {
        const BigReal off = ccw_length(g->arc.start, h->arc.start);
        if (off + h->arc.length <= g->arc.length + 1e-50) inside = true;
      }
      CHECK(inside);
    }
  }
}

TEST_CASE("deficit and Hausdorff sums") {
  const auto& parts = golden_partitions();
  auto deficit = lebesgue_deficit(parts);
  for (double r : deficit.ratios) CHECK(r < 1.0);
  CHECK(deficit.rate < 1.0);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    CHECK(hausdorff_sum(parts[k], 1.0) == deficit.totals[k]);
    CHECK(abs(hausdorff_sum(parts[k], 0.0) - (parts[k].q + parts[k].q_next)) < 1e-30);
    BigReal prev = hausdorff_sum(parts[k], 0.0);
    for (double a : default_alpha_grid()) {
      if (a == 0.0) continue;
      BigReal s = hausdorff_sum(parts[k], a);
      CHECK(s < prev);
      prev = s;
    }
  }
  auto report = hausdorff_upper(parts, default_alpha_grid());
  REQUIRE(report.alpha_star);
  CHECK(*report.alpha_star < 1.0);
  CHECK(report.verdict == "bounded");
  CHECK(report.caveat == "finite-level evidence");
}

TEST_CASE("an inconclusive window yields no exponent") {
  const auto& parts = golden_partitions();
  std::vector<Partition> two(parts.begin(), parts.begin() + 2);
  auto report = hausdorff_scan(two, {0.05});
  CHECK(report.verdict == "inconclusive");
  CHECK_FALSE(report.alpha_star);
  CHECK_THROWS_AS(hausdorff_upper(two, {0.05}), Error);
}

TEST_CASE("cross ratio") {
  const BigReal want = big("0.25");
  auto o = oracle::cross_ratio({0, 4}, {1, 4}, {2, 4}, {3, 4});
  CHECK(o.p == 1);
  CHECK(o.q == 4);
  CHECK(abs(cross_ratio({big("0"), big("0.25"), big("0.5"), big("0.75")}) - want) < 1e-20);
  SUBCASE("affine invariance") {
    Quadruple q{big("0.1"), big("0.13"), big("0.2"), big("0.31")};
    auto affine = [](const BigReal& x) { return x * 0.3 + 0.1; };
    Quadruple m{affine(q.a), affine(q.b), affine(q.c), affine(q.d)};
    CHECK(abs(cross_ratio(q) - cross_ratio(m)) < 1e-30);
  }
  SUBCASE("b tending to a") {
    BigReal prev(1.0, 128);
    for (int k = 5; k < 60; k += 5) {
      BigReal c = cross_ratio({big("0"), BigReal::power_of_two(-k, 128), big("0.5"), big("0.75")});
      CHECK(c < prev);
      prev = c;
    }
    CHECK(prev < 1e-16);
  }
  CHECK_THROWS_AS(cross_ratio({big("0.5"), big("0.25"), big("0.6"), big("0.7")}), Error);
}

TEST_CASE("distortion of cross ratios") {
  auto rigid = FlatSpotMap::rigid("0.3819", 128).accept();
  Quadruple q{big("0.1"), big("0.15"), big("0.2"), big("0.3")};
  auto d = dcr_product(rigid, q, 10);
  CHECK(abs(d.product - 1L) < 1e-30);
  for (const auto& f : d.factors) CHECK(abs(f - 1L) < 1e-30);

  auto f = FlatSpotMap::canonical("0.5", "0.55", "3", 128).accept();
  Quadruple p{big("0.55"), big("0.6"), big("0.65"), big("0.7")};
  auto two = dcr_product(f, p, 2);
  auto one = dcr_product(f, p, 1);
  Quadruple image{f.eval(p.a), f.eval(p.b), f.eval(p.c), f.eval(p.d)};
  auto next = dcr_product(f, image, 1);
  CHECK(abs(two.product - one.product * next.product) < 1e-30);
  // The open middle arc meets U.
  CHECK_THROWS_AS(dcr_product(f, {big("0.45"), big("0.48"), big("0.52"), big("0.6")}, 1), Error);
}

TEST_CASE("power-law quotient") {
  auto r = power_law_quotient(big("1"), big("2"), big("2.000000000000000000000001"), big("2"));
  const auto want = static_cast<double>(oracle::power_law_limit(1.0L, 2.0L, 2.0L));
  CHECK(want == doctest::Approx(0.75));
  CHECK(abs(r.limit - big("0.75")) < 1e-20);
  CHECK(abs(power_law_quotient(big("0.3"), big("0.7"), big("1.9"), big("1")).r - 1L) < 1e-30);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double a = u(rng), b = a + u(rng), nu = 1.0 + 3.0 * u(rng);
    BigReal prev(1e9, 128);
    for (double z = b + 0.01; z < b + 3.0; z += 0.25) {
      BigReal v = power_law_quotient(BigReal(a, 128), BigReal(b, 128), BigReal(z, 128), BigReal(nu, 128)).r;
      CHECK(v <= prev + 1e-25);
      prev = v;
    }
  }
  CHECK_THROWS_AS(power_law_quotient(big("2"), big("1"), big("3"), big("2")), Error);
}

TEST_CASE("interval chains") {
  auto rigid = FlatSpotMap::rigid("0.3819", 128).accept();
  auto chain = build_chain(rigid, Arc{big("0.2"), big("0.05")}, 5);
  CHECK(chain.steps() == 5);
  CHECK(rescaled_nonlinearity(rigid, chain, 33).sup < 1e-30);

  auto f = FlatSpotMap::canonical("0.5", "0.55", "3", 128).accept();
  // I_0 = f(I_1) with I_1 = [0.6, 0.7].
  Arc first = make_arc(f.eval(big("0.6")), f.eval(big("0.7")));
  auto one = build_chain(f, first, 1);
  REQUIRE(one.steps() == 1);
  CHECK(abs(one.intervals[1].start - big("0.6")) < 1e-25);
  auto res = rescaled_nonlinearity(f, one, 65);
  // g = f^{-1} rescaled to I_0: |g''/g'| = |N f| / f' at the preimage times |I_0|.
  BigReal sup(0.0, 128);
  for (int k = 0; k <= 64; ++k) {
    BigReal x = big("0.6") + big("0.1") * k / 64L;
    BigReal v = abs(f.nonlinearity(x)) / f.deriv(x) * first.length;
    if (v > sup) sup = v;
  }
  CHECK(abs(res.sup - sup) < sup * 1e-20);
  CHECK_THROWS_AS(build_chain(f, Arc{big("0.28"), big("0.05")}, 3), Error);
}

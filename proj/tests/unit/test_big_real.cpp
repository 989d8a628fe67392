#include <doctest.h>

#include "flatspot/big_real.hpp"
#include "flatspot/circle.hpp"
#include "flatspot/errors.hpp"

using namespace flatspot;

TEST_CASE("decimal parsing and exact round trip") {
  bool exact = false;
  BigReal half = BigReal::parse("0.5", 128, &exact);
  CHECK(exact);
  CHECK(half == BigReal(0.5, 128));
  BigReal tenth = BigReal::parse("0.1", 128, &exact);
  CHECK_FALSE(exact);
  CHECK(BigReal::parse(tenth.to_exact_string(), 128) == tenth);
  CHECK(BigReal::parse(tenth.to_exact_string(), 512) == tenth.with_precision(512));
  CHECK_THROWS_AS(BigReal::parse("abc", 128), Error);
}

TEST_CASE("arithmetic at 128 bits resolves 1e-30") {
  BigReal one(1.0, 128);
  BigReal tiny = BigReal::parse("1e-30", 128);
  CHECK((one + tiny) - one > 0.0);
  CHECK(abs(((one + tiny) - one) / tiny - 1L) < 1e-6);
  CHECK(abs(sqrt(BigReal(2.0, 128)) * sqrt(BigReal(2.0, 128)) - 2L) < 1e-36);
}

TEST_CASE("circle arcs") {
  const Precision p = 128;
  BigReal a(0.9, p), b(0.1, p);
  CHECK(abs(ccw_length(a, b) - 0.2) < 1e-15);
  CHECK(abs(arc_distance(a, b) - 0.2) < 1e-15);
  Arc arc = make_arc(a, b);
  CHECK(arc.contains(BigReal(0.0, p)));
  CHECK_FALSE(arc.contains(BigReal(0.5, p)));
  CHECK(abs(arc.distance(BigReal(0.3, p)) - 0.2) < 1e-15);
  Arc s = shortest_arc(b, a);
  CHECK(abs(s.length - 0.2) < 1e-15);
  CHECK(abs(s.start - 0.9) < 1e-15);
}

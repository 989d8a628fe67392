#pragma once

#include "flatspot/big_real.hpp"

namespace flatspot {

// Fractional part in [0, 1).
BigReal frac(const BigReal& x);

// Length of the counter-clockwise arc from a to b.
BigReal ccw_length(const BigReal& a, const BigReal& b);

// Length of the shorter of the two arcs joining a and b (at most 1/2).
BigReal arc_distance(const BigReal& a, const BigReal& b);

// Closed arc of the circle, stored as a start point in [0, 1) and a length
// in [0, 1]. Traversal is counter-clockwise from `start`.
struct Arc {
  BigReal start;
  BigReal length;

  BigReal end() const;  // start + length, reduced to [0, 1)
  bool contains(const BigReal& x) const;
  // Zero inside the arc, otherwise the shortest distance to either endpoint.
  BigReal distance(const BigReal& x) const;
};

Arc make_arc(const BigReal& from, const BigReal& to);  // counter-clockwise

// The shortest arc joining a and b. For antipodal points the arc containing
// a right neighbourhood of 0 is chosen.
Arc shortest_arc(const BigReal& a, const BigReal& b);

}  // namespace flatspot

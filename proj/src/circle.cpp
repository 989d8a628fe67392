#include "flatspot/circle.hpp"

namespace flatspot {

BigReal frac(const BigReal& x) { return x - floor(x); }

BigReal ccw_length(const BigReal& a, const BigReal& b) { return frac(b - a); }

BigReal arc_distance(const BigReal& a, const BigReal& b) {
  BigReal d = ccw_length(a, b);
  BigReal other = 1 - d;
  return other < d ? other : d;
}

BigReal Arc::end() const { return frac(start + length); }

bool Arc::contains(const BigReal& x) const { return ccw_length(start, x) <= length; }

BigReal Arc::distance(const BigReal& x) const {
  if (contains(x)) return BigReal(x.precision());
  BigReal to_start = ccw_length(x, start);
  BigReal from_end = ccw_length(end(), x);
  return from_end < to_start ? from_end : to_start;
}

Arc make_arc(const BigReal& from, const BigReal& to) {
  return Arc{frac(from), ccw_length(from, to)};
}

Arc shortest_arc(const BigReal& a, const BigReal& b) {
  BigReal d = ccw_length(a, b);
  const int c = compare(d, 0.5);
  if (c < 0) return Arc{frac(a), d};
  if (c > 0) return Arc{frac(b), 1 - d};
  // Antipodal: keep the arc that starts at 0 or runs across it.
  Arc forward{frac(a), d};
  BigReal zero(a.precision());
  if (forward.start.is_zero() || (forward.contains(zero) && !forward.end().is_zero())) {
    return forward;
  }
  return Arc{frac(b), 1 - d};
}

}  // namespace flatspot

#include "flatspot/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "flatspot/errors.hpp"

namespace flatspot {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                   double confidence) {
  if (x.size() != y.size()) fail(ErrorKind::length_mismatch, "fit_line: x and y differ in length");
  if (x.size() < 2) fail(ErrorKind::length_mismatch, "fit_line: need at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) fail(ErrorKind::length_mismatch, "fit_line: x values are all equal");

  LinearFit fit;
  fit.points = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    sse += r * r;
  }
  fit.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  if (x.size() > 2) {
    fit.slope_stderr = std::sqrt(sse / (n - 2) / sxx);
    boost::math::students_t dist(n - 2);
    const double tq = boost::math::quantile(boost::math::complement(dist, (1 - confidence) / 2));
    fit.slope_lo = fit.slope - tq * fit.slope_stderr;
    fit.slope_hi = fit.slope + tq * fit.slope_stderr;
  } else {
    fit.slope_stderr = std::numeric_limits<double>::infinity();
    fit.slope_lo = -std::numeric_limits<double>::infinity();
    fit.slope_hi = std::numeric_limits<double>::infinity();
  }
  return fit;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace flatspot

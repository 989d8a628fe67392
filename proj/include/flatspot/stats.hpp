#pragma once

#include <cstddef>
#include <vector>

namespace flatspot {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  // Two-sided confidence interval for the slope.
  double slope_lo = 0.0;
  double slope_hi = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x with a Student-t
// confidence interval at the given level (0.95 by default).
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                   double confidence = 0.95);

double median(std::vector<double> values);

}  // namespace flatspot

#pragma once

#include <cstddef>
#include <vector>

namespace itf {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;  // 1 for an exact line, also when y is constant
  std::size_t points = 0;
};

// least squares y ~ intercept + slope x; needs two distinct x values
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace itf

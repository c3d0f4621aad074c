#pragma once

#include <span>
#include <vector>

namespace ferrosim::analysis {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  // (y - fit) / (max(y) - min(y)); raw residuals when the window is zero.
  std::vector<double> residuals;

  double operator()(double x) const { return intercept + slope * x; }
};

// Ordinary least squares with adjusted R^2 = 1 - (1 - R^2)(n - 1)/(n - 2).
// Throws std::invalid_argument for fewer than 3 points or constant x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace ferrosim::analysis

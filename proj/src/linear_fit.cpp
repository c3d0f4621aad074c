#include "ferrosim/linear_fit.hpp"

#include <algorithm>
#include <stdexcept>

namespace ferrosim::analysis {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_fit: size mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("linear_fit: need at least 3 points");

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("linear_fit: zero variance in x");

  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = y[i] - fit(x[i]);
    ssr += raw[i] * raw[i];
  }
  fit.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  const double dn = static_cast<double>(n);
  fit.adj_r2 = 1.0 - (1.0 - fit.r2) * (dn - 1.0) / (dn - 2.0);

  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double window = *hi - *lo;
  fit.residuals = std::move(raw);
  if (window > 0.0) {
    for (auto& r : fit.residuals) r /= window;
  }
  return fit;
}

}  // namespace ferrosim::analysis

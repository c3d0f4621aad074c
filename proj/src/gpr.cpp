#include "ferrosim/gpr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace ferrosim::analysis {

HyperGrid default_grid(std::span<const double> y) {
  double mean = 0.0;
  for (const double v : y) mean += v;
  mean /= static_cast<double>(std::max<std::size_t>(y.size(), 1));
  double var = 0.0;
  for (const double v : y) var += (v - mean) * (v - mean);
  var /= static_cast<double>(std::max<std::size_t>(y.size(), 1));
  const double floor = 1e-12 * std::max(1.0, mean * mean);
  var = std::max(var, floor);

  HyperGrid g;
  constexpr int kLengths = 16;
  for (int i = 0; i < kLengths; ++i) {
    g.length_scales.push_back(std::pow(30.0, static_cast<double>(i) / (kLengths - 1)));
  }
  for (const double f : {0.3, 1.0, 3.0, 10.0}) g.signal_variances.push_back(f * var);
  for (const double f : {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3}) {
    g.noise_variances.push_back(f * var);
  }
  return g;
}

double GprModel::kernel(double a, double b) const {
  const double d = (a - b) / hyper_.length_scale;
  return hyper_.signal_variance * std::exp(-0.5 * d * d);
}

GprModel GprModel::fit(std::span<const double> x, std::span<const double> y, const GprHyper& hyper) {
  if (x.size() != y.size()) throw std::invalid_argument("gpr: size mismatch");
  if (x.empty()) throw std::invalid_argument("gpr: no training data");
  if (!(hyper.length_scale > 0.0) || !(hyper.signal_variance > 0.0) ||
      !(hyper.noise_variance > 0.0)) {
    throw std::invalid_argument("gpr: hyperparameters must be positive");
  }
  GprModel m;
  m.hyper_ = hyper;
  m.x_.assign(x.begin(), x.end());
  m.y_.assign(y.begin(), y.end());
  const auto n = static_cast<Eigen::Index>(x.size());
  for (const double v : y) m.offset_ += v;
  m.offset_ /= static_cast<double>(n);

  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      k(i, j) = k(j, i) = m.kernel(x[i], x[j]);
    }
    k(i, i) += hyper.noise_variance + kJitter * hyper.signal_variance;
  }
  m.llt_.compute(k);
  if (m.llt_.info() != Eigen::Success) {
    throw std::runtime_error("gpr: kernel matrix is numerically singular");
  }
  Eigen::VectorXd centred(n);
  for (Eigen::Index i = 0; i < n; ++i) centred(i) = y[i] - m.offset_;
  m.alpha_ = m.llt_.solve(centred);

  const auto& l = m.llt_.matrixL();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(l(i, i));
  m.lml_ = -0.5 * centred.dot(m.alpha_) - log_det -
           0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  return m;
}

double GprModel::mean(double x) const {
  double s = offset_;
  for (std::size_t i = 0; i < x_.size(); ++i) s += kernel(x, x_[i]) * alpha_(static_cast<Eigen::Index>(i));
  return s;
}

double GprModel::variance(double x) const {
  Eigen::VectorXd ks(static_cast<Eigen::Index>(x_.size()));
  for (std::size_t i = 0; i < x_.size(); ++i) ks(static_cast<Eigen::Index>(i)) = kernel(x, x_[i]);
  const Eigen::VectorXd v = llt_.matrixL().solve(ks);
  return std::max(0.0, hyper_.signal_variance - v.squaredNorm());
}

std::vector<double> GprModel::mean(std::span<const double> xs) const {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const double x : xs) out.push_back(mean(x));
  return out;
}

GprSelection gpr_select(std::span<const double> x, std::span<const double> y, const HyperGrid& grid) {
  if (x.size() < 4) throw std::invalid_argument("gpr: need at least 4 points");
  if (grid.empty()) throw std::invalid_argument("gpr: empty hyperparameter grid");
  std::vector<double> lml;
  std::optional<GprModel> best;
  for (const double l : grid.length_scales) {
    for (const double sf2 : grid.signal_variances) {
      for (const double sn2 : grid.noise_variances) {
        try {
          auto m = GprModel::fit(x, y, {l, sf2, sn2});
          lml.push_back(m.log_marginal_likelihood());
          if (!best || m.log_marginal_likelihood() > best->log_marginal_likelihood()) {
            best = std::move(m);
          }
        } catch (const std::runtime_error&) {
          lml.push_back(-std::numeric_limits<double>::infinity());
        }
      }
    }
  }
  if (!best) throw std::runtime_error("gpr: kernel matrix singular at every grid point");
  return {std::move(*best), std::move(lml)};
}

GprModel gpr_fit(std::span<const double> x, std::span<const double> y, const HyperGrid& grid) {
  return gpr_select(x, y, grid).model;
}

}  // namespace ferrosim::analysis

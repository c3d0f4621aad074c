#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ferrosim::analysis {

struct GprHyper {
  double length_scale;     // pulse-index units
  double signal_variance;  // sigma_f^2
  double noise_variance;   // sigma_n^2
};

struct HyperGrid {
  std::vector<double> length_scales;
  std::vector<double> signal_variances;
  std::vector<double> noise_variances;

  bool empty() const {
    return length_scales.empty() || signal_variances.empty() || noise_variances.empty();
  }
};

// 16 log-spaced length scales on [1, 30] and variance ladders bracketing the
// sample variance of y (floored so a constant series still has a grid).
HyperGrid default_grid(std::span<const double> y);

// Exact-inference GP with squared-exponential kernel
//   k(i, j) = sf2 exp(-(i - j)^2 / (2 l^2)) + sn2 delta_ij
// around a constant prior mean equal to the training mean.
class GprModel {
 public:
  static constexpr double kJitter = 1e-10;  // relative to sf2

  // Throws std::runtime_error if the kernel matrix is singular after jitter.
  static GprModel fit(std::span<const double> x, std::span<const double> y, const GprHyper& hyper);

  const GprHyper& hyper() const { return hyper_; }
  double log_marginal_likelihood() const { return lml_; }
  const std::vector<double>& x_train() const { return x_; }
  const std::vector<double>& y_train() const { return y_; }

  double mean(double x) const;
  // Variance of the latent function (noise excluded); never negative.
  double variance(double x) const;
  std::vector<double> mean(std::span<const double> xs) const;

 private:
  GprModel() = default;
  double kernel(double a, double b) const;

  GprHyper hyper_{};
  std::vector<double> x_;
  std::vector<double> y_;
  double offset_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  double lml_ = 0.0;
};

struct GprSelection {
  GprModel model;
  std::vector<double> grid_lml;  // one entry per grid point, -inf where singular
};

// Maximizes the log marginal likelihood over the grid. Needs >= 4 points.
GprSelection gpr_select(std::span<const double> x, std::span<const double> y, const HyperGrid& grid);
GprModel gpr_fit(std::span<const double> x, std::span<const double> y, const HyperGrid& grid);

}  // namespace ferrosim::analysis

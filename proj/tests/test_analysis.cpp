#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "ferrosim/analysis.hpp"
#include "ferrosim/domains.hpp"
#include "ferrosim/instrument.hpp"

using namespace ferrosim;
using namespace ferrosim::analysis;

namespace {

std::vector<double> iota(int n) {
  std::vector<double> x(n);
  std::iota(x.begin(), x.end(), 0.0);
  return x;
}

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / a.size());
}

// n_cycles identical pot/dep cycles, optionally with Gaussian scatter.
PulseSeries synthetic_series(int n_cycles, int n_pot, int n_dep, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<PulseSample> s;
  int index = 0;
  for (int c = 0; c < n_cycles; ++c) {
    for (int p = 0; p < n_pot; ++p) {
      const double r = 100e3 + 1e3 * p;
      s.push_back({index++, c, Branch::Potentiation, p, r + sigma * noise(rng), r});
    }
    for (int p = 0; p < n_dep; ++p) {
      const double r = 100e3 + 1e3 * (n_pot - 1) - 1.2e3 * p;
      s.push_back({index++, c, Branch::Depression, p, r + sigma * noise(rng), r});
    }
  }
  return PulseSeries(std::move(s));
}

Trace flat_trace(double mean, double dev, int n) {
  Trace t(TraceKind::Resistance);
  for (int i = 0; i < n; ++i) t.append(i, 0.0, mean + (i % 2 == 0 ? dev : -dev));
  return t;
}

}  // namespace

TEST(LinearFit, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  std::vector<double> y;
  for (double v : x) y.push_back(-3.0 + 0.5 * v);
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 0.5, 1e-14);
  EXPECT_NEAR(f.intercept, -3.0, 1e-14);
  EXPECT_DOUBLE_EQ(f.r2, 1.0);
  EXPECT_DOUBLE_EQ(f.adj_r2, 1.0);
}

TEST(LinearFit, FivePointReference) {
  const std::vector<double> x{0, 1, 2, 3, 4};
  const std::vector<double> y{1.0, 3.1, 4.8, 7.2, 9.0};
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 2.01, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r2, 0.9978512151748666, 1e-12);
  EXPECT_NEAR(f.adj_r2, 0.9971349535664888, 1e-12);
  const double sum = std::accumulate(f.residuals.begin(), f.residuals.end(), 0.0);
  EXPECT_NEAR(sum, 0.0, 1e-12);
  // Residuals are normalized by the y window of 8.
  EXPECT_NEAR(f.residuals[0], (1.0 - 1.0) / 8.0, 1e-12);
  EXPECT_NEAR(f.residuals[1], (3.1 - 3.01) / 8.0, 1e-12);
}

TEST(LinearFit, Errors) {
  const std::vector<double> two{1, 2};
  EXPECT_THROW(linear_fit(two, two), std::invalid_argument);
  const std::vector<double> cx{1, 1, 1};
  const std::vector<double> y{1, 2, 3};
  EXPECT_THROW(linear_fit(cx, y), std::invalid_argument);
}

TEST(Gpr, TwoPointMarginalLikelihood) {
  const std::vector<double> x{0.0, 1.5};
  const std::vector<double> y{1.0, 3.0};
  const GprHyper h{2.0, 1.3, 0.2};
  const auto m = GprModel::fit(x, y, h);
  // K = [[a, b], [b, a]], centred y = (-1, 1): y' K^-1 y = 2 / (a - b).
  const double a = h.signal_variance * (1.0 + GprModel::kJitter) + h.noise_variance;
  const double b = h.signal_variance * std::exp(-0.5 * 1.5 * 1.5 / 4.0);
  const double lml = -1.0 / (a - b) - 0.5 * std::log(a * a - b * b) - std::log(2.0 * std::numbers::pi);
  EXPECT_NEAR(m.log_marginal_likelihood(), lml, 1e-12);
  // Posterior mean at x0: offset + k' alpha, alpha = K^-1 yc.
  const double alpha0 = (-a - b) / (a * a - b * b);
  const double alpha1 = (a + b) / (a * a - b * b);
  EXPECT_NEAR(m.mean(0.0), 2.0 + h.signal_variance * alpha0 + b * alpha1, 1e-12);
}

TEST(Gpr, InterpolatesWithTinyNoise) {
  const auto x = iota(20);
  std::vector<double> y;
  for (double v : x) y.push_back(std::sin(v / 3.0));
  const auto m = GprModel::fit(x, y, {3.0, 1.0, 1e-8});
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(m.mean(x[i]), y[i], 1e-3);
  for (double q = 0.0; q < 19.0; q += 0.37) EXPECT_GE(m.variance(q), 0.0);
  EXPECT_LT(m.variance(5.0), 1e-4);
}

TEST(Gpr, DenoisesSmoothSignal) {
  const auto x = iota(60);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 50.0);
  std::vector<double> truth, y;
  for (double v : x) {
    truth.push_back(1000.0 * std::sin(v / 8.0));
    y.push_back(truth.back() + n(rng));
  }
  const auto m = gpr_fit(x, y, default_grid(y));
  EXPECT_LT(rmse(m.mean(x), truth), 0.6 * rmse(y, truth));
}

TEST(Gpr, ConstantSeries) {
  const auto x = iota(10);
  const std::vector<double> y(10, 123.0);
  const auto m = gpr_fit(x, y, default_grid(y));
  for (double v : x) EXPECT_NEAR(m.mean(v), 123.0, 1e-9);
}

TEST(Gpr, SelectionIsGridMaximum) {
  const auto x = iota(15);
  std::vector<double> y;
  for (double v : x) y.push_back(v * v + (static_cast<int>(v) % 3));
  const auto grid = default_grid(y);
  const auto sel = gpr_select(x, y, grid);
  ASSERT_EQ(sel.grid_lml.size(), 16u * 4u * 8u);
  for (double l : sel.grid_lml) EXPECT_GE(sel.model.log_marginal_likelihood(), l);
}

TEST(Gpr, Errors) {
  const std::vector<double> x{0, 1, 2};
  EXPECT_THROW(gpr_select(x, x, default_grid(x)), std::invalid_argument);
  EXPECT_THROW(GprModel::fit(x, x, {0.0, 1.0, 1.0}), std::invalid_argument);
}

TEST(DeltaR, LinearAndConstant) {
  const auto x = iota(12);
  std::vector<double> lin;
  for (double v : x) lin.push_back(2.0 * v + 5.0);
  const auto m = GprModel::fit(x, lin, {20.0, 100.0, 1e-8});
  for (double d : delta_r(m, x)) EXPECT_NEAR(d, 2.0, 1e-3);

  const std::vector<double> flat(12, 7.0);
  const auto mf = GprModel::fit(x, flat, {3.0, 1.0, 1e-4});
  for (double d : delta_r(mf, x)) EXPECT_NEAR(d, 0.0, 1e-12);
}

TEST(Snr, InfiniteWhenResidualsVanish) {
  const auto x = iota(8);
  const std::vector<double> y(8, 5.0);
  const auto m = GprModel::fit(x, y, {3.0, 1.0, 1e-6});
  const std::vector<double> delta{1.0, 0.0};
  const auto r = snr(m, x, y, delta);
  EXPECT_TRUE(r.infinite);
  EXPECT_TRUE(std::isinf(r.values[0]));
  EXPECT_EQ(r.values[1], 0.0);
}

TEST(Snr, MonteCarloAgainstKnownNoise) {
  // Averaged over seeds, SNR_i matches |Delta R_i| / sigma for the true sigma.
  const auto x = iota(50);
  double ratio = 0.0;
  constexpr int kSeeds = 20;
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 5.0);
    std::vector<double> y;
    for (double v : x) y.push_back(200.0 * std::tanh((v - 25.0) / 8.0) + n(rng));
    const auto m = gpr_fit(x, y, default_grid(y));
    const auto d = delta_r(m, x);
    const auto r = snr(m, x, y, d);
    ASSERT_FALSE(r.infinite);
    EXPECT_NEAR(r.values[10], std::abs(d[10]) / r.sigma_res, 1e-12);
    ratio += r.values[25] / (std::abs(d[25]) / 5.0);
  }
  EXPECT_NEAR(ratio / kSeeds, 1.0, 0.1);
}

TEST(SymmetryFactor, Values) {
  EXPECT_EQ(symmetry_factor(2.0, 2.0), 0.0);
  EXPECT_EQ(symmetry_factor(2.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(symmetry_factor(3.0, 2.0), 0.2);
  EXPECT_DOUBLE_EQ(symmetry_factor(3e5, 2e5), symmetry_factor(3.0, 2.0));
  EXPECT_THROW(symmetry_factor(0.0, 0.0), std::domain_error);
  EXPECT_THROW(symmetry_factor(-1.0, 1.0), std::invalid_argument);
}

TEST(SymmetryFactor, RangeProperty) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    const double s = symmetry_factor(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_DOUBLE_EQ(s, symmetry_factor(b, a));
  }
}

TEST(SfProfile, MirrorBranchesAreSymmetric) {
  std::vector<double> pot, dep;
  for (int i = 0; i <= 10; ++i) {
    pot.push_back(i);
    dep.push_back(10 - i);
  }
  const auto p = sf_profile(pot, dep);
  for (double s : p.sf) EXPECT_NEAR(s, 0.0, 1e-12);
  EXPECT_NEAR(p.sf_mean, 0.0, 1e-12);
}

TEST(SfProfile, UnequalConstantSteps) {
  std::vector<double> pot, dep;
  for (int i = 0; i <= 10; ++i) pot.push_back(2.0 * i);
  for (int i = 0; i <= 7; ++i) dep.push_back(21.0 - 3.0 * i);
  const auto p = sf_profile(pot, dep, 32);
  ASSERT_EQ(p.sf.size(), 32u);
  for (double s : p.sf) EXPECT_NEAR(s, 0.2, 1e-12);
  EXPECT_NEAR(p.sf_center, 0.2, 1e-12);
}

TEST(SfProfile, DisjointRangesFail) {
  const std::vector<double> pot{0, 1, 2};
  const std::vector<double> dep{10, 9, 8};
  EXPECT_THROW(sf_profile(pot, dep), std::invalid_argument);
}

TEST(CycleStats, IdenticalCyclesHaveZeroSpread) {
  const auto s = synthetic_series(4, 10, 8, 0.0, 1);
  const auto c = cycle_stats(s);
  EXPECT_EQ(c.positions.size(), 18u);
  EXPECT_DOUBLE_EQ(c.r_on, 100e3);
  for (const auto& p : c.positions) EXPECT_EQ(p.sigma, 0.0);
}

TEST(CycleStats, RecoversInjectedScatter) {
  const auto s = synthetic_series(200, 10, 8, 1e3, 9);
  const auto c = cycle_stats(s, 100e3);
  double mean = 0.0;
  for (const auto& p : c.positions) mean += p.sigma_over_ron;
  mean /= c.positions.size();
  EXPECT_NEAR(mean, 0.01, 0.001);
}

TEST(CycleStats, Misaligned) {
  std::vector<PulseSample> s;
  int k = 0;
  for (int c = 0; c < 3; ++c) {
    const int n = c == 1 ? 3 : 4;
    for (int p = 0; p < n; ++p) s.push_back({k++, c, Branch::Potentiation, p, 1.0, 1.0});
  }
  EXPECT_THROW(cycle_stats(PulseSeries(s)), std::invalid_argument);
  EXPECT_THROW(cycle_stats(synthetic_series(2, 4, 4, 0.0, 1)), std::invalid_argument);
}

TEST(PulseSeries, RejectsGaps) {
  std::vector<PulseSample> s{{0, 0, Branch::Potentiation, 0, 1, 1},
                             {1, 0, Branch::Potentiation, 2, 1, 1}};
  EXPECT_THROW(PulseSeries{s}, std::invalid_argument);
}

TEST(Energy, WriteEnergyPerArea) {
  EXPECT_NEAR(write_energy(3.5, 3.02e-8, 200e-9, 20, 5), 2.114e-16, 1e-28);
  EXPECT_EQ(write_energy(3.5, 3.02e-8, 0.0, 20, 5), 0.0);
  EXPECT_DOUBLE_EQ(write_energy(3.5, 3.02e-8, 200e-9, 40, 5),
                   0.5 * write_energy(3.5, 3.02e-8, 200e-9, 20, 5));
  EXPECT_THROW(write_energy(3.5, 1e-8, 1e-9, 0.0, 5), std::invalid_argument);
}

TEST(StatesDistinguishable, Basics) {
  const std::vector<Trace> one{flat_trace(1e5, 1.0, 10)};
  EXPECT_EQ(states_distinguishable(one, 2.0), 1);
  // Pooled sigma for alternating +-1 over 4 samples is sqrt(4/3).
  const double sd = std::sqrt(4.0 / 3.0);
  const std::vector<Trace> close{flat_trace(0.0, 1.0, 4), flat_trace(1.9 * sd, 1.0, 4)};
  EXPECT_EQ(states_distinguishable(close, 2.0), 1);
  const std::vector<Trace> apart{flat_trace(0.0, 1.0, 4), flat_trace(2.1 * sd, 1.0, 4)};
  EXPECT_EQ(states_distinguishable(apart, 2.0), 2);
}

TEST(HysteresisArea, UnitSquare) {
  Trace t(TraceKind::Resistance);
  t.append(0, 0, 0);
  t.append(1, 1, 0);
  t.append(2, 1, 1);
  t.append(3, 0, 1);
  EXPECT_DOUBLE_EQ(hysteresis_area(t), 1.0);
}

TEST(LoopContains, DetectsEscape) {
  Trace outer(TraceKind::Resistance), inner(TraceKind::Resistance);
  outer.append(0, 0.0, 1.0);
  outer.append(1, 0.0, 3.0);
  inner.append(0, 0.0, 2.0);
  EXPECT_TRUE(loop_contains(outer, inner));
  inner.append(1, 0.0, 3.5);
  EXPECT_FALSE(loop_contains(outer, inner));
  EXPECT_TRUE(loop_contains(outer, inner, 0.6));
  Trace off(TraceKind::Resistance);
  off.append(0, 0.05, 2.0);
  EXPECT_THROW(loop_contains(outer, off), std::invalid_argument);
}

TEST(PvLoopMetrics, SingleHysteronLoop) {
  domains::DomainEnsemble e({domains::Hysteron(0.8, -1.1, 1.0)}, 10.0);
  const auto t = domains::run_waveform(e, Waveform::triangle_loop(3.0, 1e3, 600));
  const auto m = pv_loop_metrics(t);
  EXPECT_DOUBLE_EQ(m.pr_plus, 10.0);
  EXPECT_DOUBLE_EQ(m.pr_minus, -10.0);
  const double dv = 12.0 / 600;
  EXPECT_NEAR(m.vc_plus, 0.8, dv);
  EXPECT_NEAR(m.vc_minus, -1.1, dv);
}

TEST(ActiveWindow, TrimsSaturatedEnds) {
  std::vector<double> lv;
  for (int i = 0; i <= 10; ++i) lv.push_back(i);
  EXPECT_EQ(active_window(lv), std::make_pair(1, 9));
  std::reverse(lv.begin(), lv.end());
  EXPECT_EQ(active_window(lv), std::make_pair(1, 9));
  const std::vector<double> flat(5, 1.0);
  EXPECT_EQ(active_window(flat), std::make_pair(0, 4));
}

TEST(ComputeMetrics, DeviceRunIsWellBehaved) {
  auto dev = instrument::make_device({}, {}, {}, 1e5, {});
  const auto trace = instrument::potentiation_depression(dev, instrument::AmplitudeRamp{}, 5);
  const auto report = compute_metrics(PulseSeries::from_trace(trace));
  EXPECT_GE(report.adj_r2, 0.9);
  for (double s : report.sf.sf) {
    if (!std::isnan(s)) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
  }
  EXPECT_LT(report.gpr_rmse, report.raw_rmse);
  EXPECT_NEAR(report.energy_per_area, 2.114e-16, 1e-28);
  EXPECT_FALSE(report.energy_matches_reference);
  ASSERT_TRUE(report.cycles.has_value());
  EXPECT_EQ(report.pot.delta_r.size(), report.pot.positions.size() - 1);
}

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "ferrosim/domains.hpp"

using namespace ferrosim;
using namespace ferrosim::domains;

TEST(Hysteron, RejectsInvertedThresholds) {
  EXPECT_THROW(Hysteron(-1.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Hysteron(1.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Hysteron(1.0, -1.0, -0.1), std::invalid_argument);
  EXPECT_THROW(Hysteron(1.0, -1.0, 1.0, 0), std::invalid_argument);
}

TEST(Hysteron, SwitchesAtThresholdsInclusive) {
  Hysteron h(0.91, -1.27, 1.0);
  EXPECT_FALSE(h.apply(0.90));
  EXPECT_TRUE(h.apply(0.91));
  EXPECT_EQ(h.state(), 1);
  EXPECT_FALSE(h.apply(-1.26));
  EXPECT_TRUE(h.apply(-1.27));
  EXPECT_EQ(h.state(), -1);
}

TEST(Hysteron, InactiveNeverSwitches) {
  Hysteron h(0.5, -0.5, 1.0, -1, false);
  EXPECT_FALSE(h.apply(10.0));
  EXPECT_EQ(h.state(), -1);
}

TEST(BuildEnsemble, ZeroSpreadGivesIdenticalThresholds) {
  const auto e = build_ensemble({2, 0.91, -1.27, 0.0, 12.5, 7});
  ASSERT_EQ(e.size(), 2u);
  for (const auto& h : e.hysterons()) {
    EXPECT_DOUBLE_EQ(h.v_up(), 0.91);
    EXPECT_DOUBLE_EQ(h.v_down(), -1.27);
    EXPECT_DOUBLE_EQ(h.weight(), 0.5);
  }
}

TEST(BuildEnsemble, SameSeedSameEnsemble) {
  const EnsembleConfig cfg{1000, 0.91, -1.27, 0.3, 12.5, 42};
  EXPECT_EQ(build_ensemble(cfg), build_ensemble(cfg));
  EnsembleConfig other = cfg;
  other.seed = 43;
  EXPECT_FALSE(build_ensemble(cfg) == build_ensemble(other));
}

TEST(BuildEnsemble, PristineSplitCancels) {
  const auto e = build_ensemble({4, 0.91, -1.27, 0.0, 12.5, 1});
  EXPECT_DOUBLE_EQ(e.polarization(), 0.0);
}

TEST(BuildEnsemble, EveryPairOrdered) {
  // Wide spread forces many redraws.
  const auto e = build_ensemble({5000, 0.2, -0.2, 1.0, 10.0, 3});
  for (const auto& h : e.hysterons()) EXPECT_GT(h.v_up(), h.v_down());
}

TEST(BuildEnsemble, ViolationsNameTheInvariant) {
  EnsembleConfig bad{0, -1.0, 1.0, -0.1, 12.5, 1};
  const auto v = bad.violations();
  ASSERT_EQ(v.size(), 3u);
  try {
    build_ensemble(bad);
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("n_hysterons"), std::string::npos);
    EXPECT_NE(msg.find("EnsembleConfig ordering"), std::string::npos);
    EXPECT_NE(msg.find("sigma_c"), std::string::npos);
  }
}

TEST(Ensemble, SaturationAndDeadZone) {
  auto e = build_ensemble({500, 0.91, -1.27, 0.3, 12.5, 5});
  e.apply_voltage(3.8);
  EXPECT_DOUBLE_EQ(e.polarization(), 12.5);
  EXPECT_EQ(e.apply_voltage(0.0), 0u);
  e.apply_voltage(-3.8);
  EXPECT_DOUBLE_EQ(e.polarization(), -12.5);
}

TEST(Ensemble, PolarizationMatchesWeightedSum) {
  const std::vector<Hysteron> hs{{1.0, -1.0, 0.1, 1},  {1.2, -0.3, 0.4, -1}, {0.5, -2.0, 0.2, 1},
                                 {2.0, 1.5, 0.25, -1}, {0.1, -0.1, 0.05, 1}};
  const DomainEnsemble e(hs, 20.0);
  const double oracle = 20.0 * (0.1 - 0.4 + 0.2 - 0.25 + 0.05) / 1.0;
  EXPECT_NEAR(e.polarization(), oracle, 1e-14);
}

TEST(Ensemble, NoActiveDomainsIsAnError) {
  DomainEnsemble e({{1.0, -1.0, 1.0, 1, false}}, 10.0);
  EXPECT_FALSE(e.has_active());
  EXPECT_THROW((void)e.polarization(), std::domain_error);
}

TEST(Ensemble, StaircaseMatchesPerHysteronRule) {
  const std::vector<Hysteron> hs{{1.5, -0.2, 1.0}, {2.5, -1.0, 1.0}, {0.5, -0.6, 1.0, 1}};
  DomainEnsemble e(hs, 1.0);
  std::vector<int> s{-1, -1, 1};
  for (const double v : {2.0, -0.5, 2.0}) {
    e.apply_voltage(v);
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (v >= hs[i].v_up()) s[i] = 1;
      if (v <= hs[i].v_down()) s[i] = -1;
    }
    EXPECT_EQ(e.states(), s);
  }
}

TEST(Wakeup, ClosedForm) {
  const WakeupParams p{1e4, 0.5};
  EXPECT_DOUBLE_EQ(wakeup_fraction(0.0, p), 0.5);
  EXPECT_NEAR(wakeup_fraction(1e5, p), 0.99997730003511876, 1e-15);
  EXPECT_NEAR(wakeup_fraction(1e9, p), 1.0, 1e-15);
  EXPECT_THROW(wakeup_fraction(-1.0, p), std::invalid_argument);
  double prev = 0.0;
  for (double n = 0; n < 1e5; n += 2500) {
    const double f = wakeup_fraction(n, p);
    EXPECT_GE(f, prev);
    prev = f;
  }
}

TEST(Wakeup, ActiveSetsAreNested) {
  auto e = build_ensemble({2000, 0.91, -1.27, 0.475, 12.5, 9});
  std::vector<bool> prev(e.size(), false);
  for (const double f : {0.1, 0.3, 0.5, 0.8, 1.0}) {
    e.set_active_fraction(f);
    std::size_t count = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const bool a = e.hysterons()[i].active();
      if (prev[i]) {
        EXPECT_TRUE(a);
      }
      prev[i] = a;
      count += a;
    }
    EXPECT_NEAR(static_cast<double>(count) / 2000.0, f, 0.04);
  }
}

TEST(Wakeup, RaisesSaturatedPolarization) {
  auto e = build_ensemble({2000, 0.91, -1.27, 0.475, 12.5, 9});
  set_wakeup(e, 0.0, {});
  e.apply_voltage(4.0);
  const double pristine = e.polarization();
  set_wakeup(e, 1e5, {});
  e.apply_voltage(4.0);
  EXPECT_GT(e.polarization(), pristine);
  EXPECT_NEAR(e.polarization(), 12.5, 0.01);
}

TEST(RunWaveform, ZeroAmplitudeKeepsPolarization) {
  auto e = build_ensemble({300, 0.91, -1.27, 0.475, 12.5, 2});
  // Thresholds straddling 0 V may flip on the first 0 V sample; after that
  // the trace must stay flat.
  const auto t = run_waveform(e, Waveform::triangle_loop(0.0, 1e3, 100));
  for (const auto& s : t.samples()) EXPECT_EQ(s.value, t[0].value);
  const auto again = run_waveform(e, Waveform::triangle_loop(0.0, 1e3, 100));
  for (const auto& s : again.samples()) EXPECT_EQ(s.value, t[0].value);
}

TEST(Snapshot, RoundTripsEveryField) {
  auto e = build_ensemble({64, 0.91, -1.27, 0.475, 12.5, 11});
  set_wakeup(e, 3000.0, {});
  e.apply_voltage(1.1);
  const auto back = from_snapshot(to_snapshot(e));
  EXPECT_EQ(back, e);

  const auto path = std::filesystem::temp_directory_path() / "ferrosim_snapshot_test.json";
  save_snapshot(e, path);
  EXPECT_EQ(load_snapshot(path), e);
  std::filesystem::remove(path);
}

TEST(Snapshot, RejectsForeignFiles) {
  EXPECT_THROW(from_snapshot(R"({"format":"other","version":1})"), std::invalid_argument);
}

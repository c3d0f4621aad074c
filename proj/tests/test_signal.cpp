#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "ferrosim/signal.hpp"

using namespace ferrosim;

TEST(Waveform, RejectsDiscontinuousJoin) {
  EXPECT_THROW(Waveform({{1.0, 0.0, 1.0}, {1.0, 0.5, 0.0}}, 0.1), std::invalid_argument);
}

TEST(Waveform, RejectsNonPositiveDuration) {
  EXPECT_THROW(Waveform({{0.0, 0.0, 1.0}}, 0.1), std::invalid_argument);
  EXPECT_THROW(Waveform({{1.0, 0.0, 1.0}}, 0.0), std::invalid_argument);
}

TEST(Waveform, SamplesIncludeEveryCorner) {
  const auto wf = Waveform::triangle_loop(3.0, 1e3, 40);
  EXPECT_DOUBLE_EQ(wf.duration(), 1.5e-3);
  const auto s = wf.sample();
  double vmax = -1e9, vmin = 1e9;
  for (std::size_t i = 1; i < s.size(); ++i) {
    EXPECT_GT(s[i].t, s[i - 1].t);
    vmax = std::max(vmax, s[i].v);
    vmin = std::min(vmin, s[i].v);
  }
  EXPECT_DOUBLE_EQ(vmax, 3.0);
  EXPECT_DOUBLE_EQ(vmin, -3.0);
  EXPECT_DOUBLE_EQ(s.front().v, 0.0);
  EXPECT_DOUBLE_EQ(s.back().v, 0.0);
}

TEST(Waveform, SampleSpacingNeverExceedsDt) {
  const Waveform wf({{1.0, 0.0, 2.0}, {0.35, 2.0, 2.0}}, 0.1);
  const auto s = wf.sample();
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LE(s[i].t - s[i - 1].t, 0.1 + 1e-12);
  EXPECT_NEAR(s.back().t, 1.35, 1e-12);
}

TEST(Trace, TimeMustIncrease) {
  Trace t(TraceKind::Resistance);
  t.append(0.0, 0.0, 1.0);
  EXPECT_THROW(t.append(0.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(t.append(-1.0, 0.0, 1.0), std::invalid_argument);
}

TEST(Trace, ExtraColumnsAreChecked) {
  Trace t(TraceKind::Polarization, {"a", "b"});
  const double one[] = {1.0};
  const double two[] = {1.0, 2.0};
  EXPECT_THROW(t.append(0.0, 0.0, 0.0, one), std::invalid_argument);
  t.append(0.0, 0.5, 3.0, two);
  EXPECT_TRUE(t.has_column("b"));
  EXPECT_FALSE(t.has_column("c"));
  EXPECT_EQ(t.column("b"), std::vector<double>{2.0});
  EXPECT_EQ(t.column("v"), std::vector<double>{0.5});
  EXPECT_EQ(t.units(), "uC/cm2");
}

TEST(TraceKind, RoundTripsThroughNames) {
  for (const auto k : {TraceKind::Polarization, TraceKind::Resistance, TraceKind::Capacitance}) {
    EXPECT_EQ(trace_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(trace_kind_from_string("voltage"), std::invalid_argument);
}

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ferrosim/electrostatics.hpp"

using namespace ferrosim::electro;

// Reference values below were produced offline with 50-digit arithmetic.

TEST(Depletion, MatchesHighPrecisionOracle) {
  const DeviceStack s;
  EXPECT_NEAR(depletion_width_nm(1.0, s), 1.6466483902821346, 1e-12);
  EXPECT_NEAR(depletion_width_nm(2.0, s), 3.2517431455492215, 1e-12);
  EXPECT_NEAR(depletion_width_nm(2.5, s), 4.0396581175984751, 1e-12);
  EXPECT_NEAR(depletion_width_nm(3.0, s), 4.8182798385163608, 1e-12);
  EXPECT_NEAR(depletion_width_nm(4.0, s), 6.3489105412129172, 1e-12);
}

TEST(Depletion, ZeroAndSmallBiasLimits) {
  const DeviceStack s;
  EXPECT_EQ(depletion_width_nm(0.0, s), 0.0);
  // Small-signal limit: x_d -> C V / (q N_D).
  const double v = 1e-9;
  const double c = units::uf_per_cm2_to_si(s.c_hzo_uf_cm2);
  const double slope_m = c / (PhysConstants{}.q * units::per_cm3_to_si(s.n_d_cm3));
  EXPECT_NEAR(depletion_width_nm(v, s), units::m_to_nm(slope_m * v), 1e-15);
  EXPECT_THROW(depletion_width_nm(-0.1, s), std::invalid_argument);
}

TEST(Depletion, MonotoneInBiasAndInverseInDoping) {
  DeviceStack s;
  double prev = 0.0;
  for (double v = 0.1; v < 5.0; v += 0.1) {
    const double x = depletion_width_nm(v, s);
    EXPECT_GT(x, prev);
    prev = x;
  }
  const double x_hi = depletion_width_nm(2.0, s);
  s.n_d_cm3 *= 10.0;
  EXPECT_LT(depletion_width_nm(2.0, s), x_hi);
}

TEST(SeriesCapacitance, MatchesOracleAndLimits) {
  EXPECT_NEAR(series_capacitance(1e-10, 10.0, 100.0, 1000.0), 4.6961385452991736e-11, 1e-24);
  EXPECT_NEAR(series_capacitance(1.13e-10, 8.0, 189.0, 3600.0), 9.8256e-11, 1e-14);
  EXPECT_DOUBLE_EQ(series_capacitance(1e-10, 8.0, std::numeric_limits<double>::infinity(), 3600.0),
                   1e-10);
  EXPECT_LT(series_capacitance(1e-10, 8.0, 189.0, 3600.0), 1e-10);
}

TEST(ExtractPermittivity, InvertsSeriesCapacitance) {
  for (const double eps : {5.0, 50.0, 189.0, 1000.0}) {
    const double c = series_capacitance(1.13e-10, 8.0, eps, 3600.0);
    EXPECT_NEAR(extract_permittivity(1.13e-10, c, 8.0, 3600.0), eps, 1e-9 * eps);
  }
}

TEST(ExtractPermittivity, RejectsTotalAboveElement) {
  EXPECT_THROW(extract_permittivity(1e-10, 1e-10, 8.0, 3600.0), std::invalid_argument);
  EXPECT_THROW(extract_permittivity(1e-10, 2e-10, 8.0, 3600.0), std::invalid_argument);
}

TEST(Channel, OnResistanceFromGeometry) {
  const DeviceStack s;
  EXPECT_NEAR(on_resistance(s), 102187.5, 1e-9);
  EXPECT_DOUBLE_EQ(channel_resistance(s, 0.0), on_resistance(s));
  EXPECT_DOUBLE_EQ(channel_resistance(s, 3.0, ChannelPolarity::Accumulation), on_resistance(s));
  EXPECT_NEAR(channel_resistance(s, 4.0), 2.0 * on_resistance(s), 1e-6);
}

TEST(Channel, FullDepletionClampsToCeiling) {
  const DeviceStack s;
  EXPECT_DOUBLE_EQ(channel_resistance(s, 8.0), s.r_max_ohm);
  EXPECT_DOUBLE_EQ(channel_resistance(s, 20.0), s.r_max_ohm);
}

TEST(GatePotential, PolarizationToVoltage) {
  const auto g = gate_potential_from_polarization(12.4, 2.7, 1.0);
  EXPECT_NEAR(g.v_gs, 4.5925925925925926, 1e-13);
  EXPECT_EQ(g.polarity, ChannelPolarity::Depletion);
  EXPECT_NEAR(gate_potential_from_polarization(12.4, 2.7, 0.3).v_gs, 1.3777777777777778, 1e-13);
  EXPECT_EQ(gate_potential_from_polarization(-5.0, 2.7, 0.3).polarity, ChannelPolarity::Accumulation);
  EXPECT_THROW(gate_potential_from_polarization(1.0, 2.7, 0.0), std::invalid_argument);
  EXPECT_THROW(gate_potential_from_polarization(1.0, 2.7, 1.5), std::invalid_argument);
}

TEST(OnOff, DecreasesWithChannelThickness) {
  DeviceStack s;
  double prev = std::numeric_limits<double>::infinity();
  for (const double d : {8.0, 11.3, 15.0}) {
    s.d_wox_nm = d;
    const double r = on_off_ratio(s, 2.69);
    EXPECT_LT(r, prev);
    prev = r;
  }
}

TEST(Stack, ViolationsNameTheField) {
  DeviceStack s;
  s.d_wox_nm = -1.0;
  s.rho_ohm_cm = 0.0;
  const auto v = s.violations();
  ASSERT_GE(v.size(), 2u);
  EXPECT_NE(v[0].find("DeviceStack.d_wox_nm"), std::string::npos);
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(XdCurve, GridAndOrdering) {
  const auto nd = log_space(1e17, 1e21, 9);
  EXPECT_NEAR(nd[4], 1e19, 1e5);
  const double vs[] = {1.0, 4.0};
  const auto curves = xd_vs_nd_curve(vs, nd, DeviceStack{});
  ASSERT_EQ(curves.size(), 2u);
  for (std::size_t i = 0; i < nd.size(); ++i) EXPECT_LT(curves[0].x_d_nm[i], curves[1].x_d_nm[i]);
  for (std::size_t i = 1; i < nd.size(); ++i) EXPECT_LT(curves[1].x_d_nm[i], curves[1].x_d_nm[i - 1]);
}

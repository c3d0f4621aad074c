#pragma once

#include <span>
#include <string>
#include <vector>

namespace ferrosim::electro {

struct PhysConstants {
  static constexpr double eps0 = 8.8541878128e-12;  // F/m
  static constexpr double q = 1.602176634e-19;      // C
};

// Lab units -> SI. Every formula below converts through these and nothing else.
namespace units {
constexpr double nm_to_m(double nm) { return nm * 1e-9; }
constexpr double m_to_nm(double m) { return m * 1e9; }
constexpr double um_to_m(double um) { return um * 1e-6; }
constexpr double um2_to_m2(double um2) { return um2 * 1e-12; }
constexpr double um2_to_cm2(double um2) { return um2 * 1e-8; }
constexpr double uf_per_cm2_to_si(double uf_cm2) { return uf_cm2 * 1e-2; }  // F/m^2
constexpr double uc_per_cm2_to_si(double uc_cm2) { return uc_cm2 * 1e-2; }  // C/m^2
constexpr double per_cm3_to_si(double n_cm3) { return n_cm3 * 1e6; }        // m^-3
constexpr double ohm_cm_to_si(double rho) { return rho * 1e-2; }            // Ohm m
}  // namespace units

// W/WOx/HZO/TiN stack in the units quoted by lab reports.
struct DeviceStack {
  double d_wox_nm = 8.0;
  double eps_wox = 189.0;
  double c_hzo_uf_cm2 = 2.7;
  double n_d_cm3 = 1.01e20;
  double rho_ohm_cm = 0.327;
  double mu_cm2_vs = 0.19;  // informational
  double width_um = 20.0;
  double length_um = 5.0;
  double area_cap_um2 = 3600.0;
  double r_max_ohm = 1e8;

  std::vector<std::string> violations() const;
  void validate() const;  // throws std::invalid_argument listing all violations
};

// 1/C = 1/c_hzo + d_wox / (eps0 eps_wox A). Capacitances in F.
double series_capacitance(double c_hzo_f, double d_wox_nm, double eps_wox, double area_um2);

// Inverse of series_capacitance for eps_wox.
double extract_permittivity(double c_hzo_f, double c_total_f, double d_wox_nm, double area_um2);

// One-sided abrupt depletion of the channel under a gate potential v_gs >= 0.
double depletion_width_nm(double v_gs, const DeviceStack& stack);

enum class ChannelPolarity { Depletion, Accumulation };

struct GatePotential {
  double v_gs;  // magnitude, V
  ChannelPolarity polarity;
};

// V_GS = scale |p| / C_HZO. Positive polarization depletes the n-type channel.
GatePotential gate_potential_from_polarization(double p_uc_cm2, double c_hzo_uf_cm2,
                                               double scale);

// rho l / (w d_wox)
double on_resistance(const DeviceStack& stack);

// rho l / (w (d_wox - x_d)), clamped to r_max at full depletion.
double channel_resistance(const DeviceStack& stack, double x_d_nm,
                          ChannelPolarity polarity = ChannelPolarity::Depletion);

// Composition of the three steps above.
double resistance_from_polarization(const DeviceStack& stack, double p_uc_cm2, double scale);

// (R_off - R_on) / R_on at gate potential v_gs.
double on_off_ratio(const DeviceStack& stack, double v_gs);

struct XdCurve {
  double v_gs;
  std::vector<double> n_d_cm3;
  std::vector<double> x_d_nm;
};

std::vector<XdCurve> xd_vs_nd_curve(std::span<const double> v_gs,
                                    std::span<const double> n_d_cm3, const DeviceStack& stack);

std::vector<double> log_space(double lo, double hi, std::size_t n);

}  // namespace ferrosim::electro

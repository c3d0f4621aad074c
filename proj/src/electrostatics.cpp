#include "ferrosim/electrostatics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ferrosim::electro {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

std::vector<std::string> DeviceStack::violations() const {
  std::vector<std::string> out;
  const auto positive = [&](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      out.push_back(std::string("DeviceStack.") + name + " must be positive");
      return false;
    }
    return true;
  };
  const bool d_ok = positive(d_wox_nm, "d_wox_nm");
  positive(eps_wox, "eps_wox");
  positive(c_hzo_uf_cm2, "c_hzo_uf_cm2");
  positive(n_d_cm3, "n_d_cm3");
  const bool rho_ok = positive(rho_ohm_cm, "rho_ohm_cm");
  positive(mu_cm2_vs, "mu_cm2_vs");
  const bool w_ok = positive(width_um, "width_um");
  const bool l_ok = positive(length_um, "length_um");
  positive(area_cap_um2, "area_cap_um2");
  const bool rmax_ok = positive(r_max_ohm, "r_max_ohm");
  if (d_ok && (d_wox_nm < 1.0 || d_wox_nm > 100.0)) {
    out.emplace_back("DeviceStack.d_wox_nm must lie in [1, 100] nm");
  }
  if (d_ok && rho_ok && w_ok && l_ok && rmax_ok && !(r_max_ohm > on_resistance(*this))) {
    out.emplace_back("DeviceStack.r_max_ohm must exceed the on-resistance rho*l/(w*d_wox)");
  }
  return out;
}

void DeviceStack::validate() const {
  const auto bad = violations();
  if (bad.empty()) return;
  std::string msg = bad.front();
  for (std::size_t i = 1; i < bad.size(); ++i) msg += "; " + bad[i];
  throw std::invalid_argument(msg);
}

double series_capacitance(double c_hzo_f, double d_wox_nm, double eps_wox, double area_um2) {
  require_positive(c_hzo_f, "c_hzo");
  require_positive(d_wox_nm, "d_wox");
  require_positive(area_um2, "area");
  if (!(eps_wox > 0.0)) throw std::invalid_argument("eps_wox must be positive");
  if (std::isinf(eps_wox)) return c_hzo_f;
  const double inv_wox =
      units::nm_to_m(d_wox_nm) / (PhysConstants::eps0 * eps_wox * units::um2_to_m2(area_um2));
  return 1.0 / (1.0 / c_hzo_f + inv_wox);
}

double extract_permittivity(double c_hzo_f, double c_total_f, double d_wox_nm, double area_um2) {
  require_positive(c_hzo_f, "c_hzo");
  require_positive(c_total_f, "c_total");
  require_positive(d_wox_nm, "d_wox");
  require_positive(area_um2, "area");
  if (!(c_total_f < c_hzo_f)) {
    throw std::invalid_argument("series capacitance must be below smallest element");
  }
  const double inv_wox = 1.0 / c_total_f - 1.0 / c_hzo_f;
  return units::nm_to_m(d_wox_nm) / (PhysConstants::eps0 * units::um2_to_m2(area_um2) * inv_wox);
}

double depletion_width_nm(double v_gs, const DeviceStack& stack) {
  if (!(v_gs >= 0.0) || !std::isfinite(v_gs)) {
    throw std::invalid_argument("depletion_width: v_gs must be finite and >= 0");
  }
  const double eps = PhysConstants::eps0 * stack.eps_wox;
  const double c = units::uf_per_cm2_to_si(stack.c_hzo_uf_cm2);
  const double n_d = units::per_cm3_to_si(stack.n_d_cm3);
  const double arg = 2.0 * c * c * v_gs / (PhysConstants::q * n_d * eps);
  // sqrt(1 + a) - 1 without cancellation for small a.
  const double bracket = arg / (std::sqrt(1.0 + arg) + 1.0);
  return units::m_to_nm(eps / c * bracket);
}

GatePotential gate_potential_from_polarization(double p_uc_cm2, double c_hzo_uf_cm2,
                                               double scale) {
  require_positive(c_hzo_uf_cm2, "c_hzo_area");
  if (!(scale > 0.0 && scale <= 1.0)) throw std::invalid_argument("scale must lie in (0, 1]");
  // Same lab units top and bottom, so uC/cm^2 over uF/cm^2 is volts.
  return {scale * std::abs(p_uc_cm2) / c_hzo_uf_cm2,
          p_uc_cm2 > 0.0 ? ChannelPolarity::Depletion : ChannelPolarity::Accumulation};
}

double on_resistance(const DeviceStack& stack) {
  return units::ohm_cm_to_si(stack.rho_ohm_cm) * units::um_to_m(stack.length_um) /
         (units::um_to_m(stack.width_um) * units::nm_to_m(stack.d_wox_nm));
}

double channel_resistance(const DeviceStack& stack, double x_d_nm, ChannelPolarity polarity) {
  if (!(x_d_nm >= 0.0)) throw std::invalid_argument("channel_resistance: x_d must be >= 0");
  const double r_on = on_resistance(stack);
  if (polarity == ChannelPolarity::Accumulation || x_d_nm == 0.0) return r_on;
  const double t_eff = stack.d_wox_nm - x_d_nm;
  if (!(t_eff > 0.0)) return stack.r_max_ohm;
  return std::min(r_on * stack.d_wox_nm / t_eff, stack.r_max_ohm);
}

double resistance_from_polarization(const DeviceStack& stack, double p_uc_cm2, double scale) {
  const auto gate = gate_potential_from_polarization(p_uc_cm2, stack.c_hzo_uf_cm2, scale);
  if (gate.polarity == ChannelPolarity::Accumulation) {
    return channel_resistance(stack, 0.0, ChannelPolarity::Accumulation);
  }
  return channel_resistance(stack, depletion_width_nm(gate.v_gs, stack));
}

double on_off_ratio(const DeviceStack& stack, double v_gs) {
  const double r_on = on_resistance(stack);
  const double r_off = channel_resistance(stack, depletion_width_nm(v_gs, stack));
  return (r_off - r_on) / r_on;
}

std::vector<XdCurve> xd_vs_nd_curve(std::span<const double> v_gs,
                                    std::span<const double> n_d_cm3, const DeviceStack& stack) {
  if (v_gs.empty() || n_d_cm3.empty()) {
    throw std::invalid_argument("xd_vs_nd_curve: empty voltage or carrier grid");
  }
  std::vector<XdCurve> out;
  out.reserve(v_gs.size());
  for (const double v : v_gs) {
    XdCurve curve{v, {}, {}};
    DeviceStack s = stack;
    for (const double n : n_d_cm3) {
      s.n_d_cm3 = n;
      curve.n_d_cm3.push_back(n);
      curve.x_d_nm.push_back(depletion_width_nm(v, s));
    }
    out.push_back(std::move(curve));
  }
  return out;
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi >= lo) || n == 0) throw std::invalid_argument("log_space: bad range");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.back() = hi;
  return out;
}

}  // namespace ferrosim::electro

#include "ferrosim/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ferrosim::instrument {

NoiseModel noise_model_from_string(std::string_view name) {
  if (name == "ron_referenced") return NoiseModel::RonReferenced;
  if (name == "relative") return NoiseModel::Relative;
  throw std::invalid_argument("unknown noise model: " + std::string(name));
}

std::string_view to_string(NoiseModel model) {
  return model == NoiseModel::Relative ? "relative" : "ron_referenced";
}

FeFETDevice::FeFETDevice(domains::DomainEnsemble ensemble, electro::DeviceStack stack,
                         DeviceOptions options)
    : ensemble_(std::move(ensemble)),
      stack_(stack),
      options_(options),
      // Decorrelate the read-noise stream from the ensemble sampler.
      rng_(options.seed ^ 0x9E3779B97F4A7C15ULL) {
  stack_.validate();
  if (!(options_.read_noise_sigma >= 0.0)) {
    throw std::invalid_argument("read_noise_sigma must be >= 0");
  }
  if (!(options_.scale > 0.0 && options_.scale <= 1.0)) {
    throw std::invalid_argument("scale must lie in (0, 1]");
  }
  if (!(options_.t_min >= 0.0) || !(options_.width_tau >= 0.0) || !(options_.read_time > 0.0)) {
    throw std::invalid_argument("pulse timing options must be non-negative (read_time > 0)");
  }
}

void FeFETDevice::wait(double seconds) {
  if (!(seconds >= 0.0)) throw std::invalid_argument("wait: negative duration");
  clock_ += seconds;
  since_write_ += seconds;
}

double FeFETDevice::polarization() const {
  if (!ensemble_.has_active()) return 0.0;
  double p = ensemble_.polarization();
  if (options_.retention_decay > 0.0) {
    const double loss = options_.retention_decay * std::log10(1.0 + since_write_);
    p *= std::max(0.0, 1.0 - loss);
  }
  return p;
}

double FeFETDevice::true_resistance() const {
  return electro::resistance_from_polarization(stack_, polarization(), options_.scale);
}

double FeFETDevice::read_rds() {
  // The +-200 mV sweep stays ohmic, so both endpoints carry the same R_true.
  const double r_true = true_resistance();
  const double eps = options_.read_noise_sigma > 0.0 ? options_.read_noise_sigma * normal_(rng_) : 0.0;
  clock_ += options_.read_time;
  since_write_ += options_.read_time;
  if (options_.noise_model == NoiseModel::Relative) return r_true * (1.0 + eps);
  return r_true + on_resistance() * eps;
}

void FeFETDevice::write_pulse(double amplitude, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("write_pulse: width must be positive");
  if (!std::isfinite(amplitude)) throw std::invalid_argument("write_pulse: non-finite amplitude");
  log_.count += 1;
  log_.total_width += width;
  log_.last_width = width;
  clock_ += width;
  since_write_ = 0.0;
  if (options_.width_rule && width < options_.t_min) return;
  double v = amplitude;
  if (options_.width_tau > 0.0) v *= -std::expm1(-width / options_.width_tau);
  ensemble_.apply_voltage(v);
  ensemble_.apply_voltage(0.0);
}

FeFETDevice FeFETDevice::noiseless() const {
  FeFETDevice copy = *this;
  copy.options_.read_noise_sigma = 0.0;
  return copy;
}

FeFETDevice make_device(const domains::EnsembleConfig& ensemble, const electro::DeviceStack& stack,
                        const DeviceOptions& options, double wakeup_cycles,
                        const domains::WakeupParams& wakeup) {
  auto domains = domains::build_ensemble(ensemble);
  domains::set_wakeup(domains, wakeup_cycles, wakeup);
  return FeFETDevice(std::move(domains), stack, options);
}

std::vector<double> triangular_staircase(double v_min, double v_max, int n_steps) {
  if (!(v_min < v_max)) throw std::invalid_argument("staircase: v_min must be below v_max");
  if (n_steps < 4) throw std::invalid_argument("staircase: need at least 4 steps");
  const double leg1 = std::abs(v_max);
  const double leg2 = v_max - v_min;
  const double leg3 = std::abs(v_min);
  const double length = leg1 + leg2 + leg3;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_steps));
  for (int k = 1; k <= n_steps; ++k) {
    const double s = length * static_cast<double>(k) / static_cast<double>(n_steps);
    double v;
    if (s <= leg1) {
      v = std::copysign(s, v_max);
    } else if (s <= leg1 + leg2) {
      v = v_max - (s - leg1);
    } else {
      v = v_min + std::copysign(s - leg1 - leg2, -v_min);
    }
    // A fixed 1 nV lattice makes equal voltages bitwise equal across loops
    // whose step sizes differ in the last ulp.
    out.push_back(std::round(v * 1e9) / 1e9);
  }
  out.back() = 0.0;
  return out;
}

Trace rv_hysteresis(FeFETDevice& dev, double v_min, double v_max, int n_steps, double width) {
  Trace trace(TraceKind::Resistance, {"step"});
  int step = 0;
  for (const double v : triangular_staircase(v_min, v_max, n_steps)) {
    dev.write_pulse(v, width);
    const double r = dev.read_rds();
    const double tag[] = {static_cast<double>(step++)};
    trace.append(dev.clock(), v, r, tag);
  }
  return trace;
}

std::vector<Trace> minor_loops(FeFETDevice& dev, const std::vector<double>& amplitudes,
                               double step, double width) {
  if (!(step > 0.0)) throw std::invalid_argument("minor_loops: step must be positive");
  std::vector<Trace> out;
  if (amplitudes.empty()) return out;
  for (const double a : amplitudes) {
    if (!(a > 0.0)) throw std::invalid_argument("minor_loops: amplitudes must be positive");
  }
  // Reset to the negative end first so the opening 0 -> +a leg of the
  // first loop already lies on the closed outer loop.
  dev.write_pulse(-*std::max_element(amplitudes.begin(), amplitudes.end()), width);
  for (const double a : amplitudes) {
    const int n = static_cast<int>(std::lround(4.0 * a / step));
    out.push_back(rv_hysteresis(dev, -a, a, n, width));
    out.back().set_label("amplitude=" + std::to_string(a));
  }
  return out;
}

Trace pv_loop(FeFETDevice& dev, double amplitude, double frequency, int samples_per_period) {
  const auto wf = Waveform::triangle_loop(amplitude, frequency, samples_per_period);
  Trace trace(TraceKind::Polarization);
  for (const auto& s : wf.sample()) {
    dev.ensemble().apply_voltage(s.v);
    trace.append(s.t, s.v, dev.polarization());
  }
  dev.wait(wf.duration());
  return trace;
}

Trace cv_butterfly(FeFETDevice& dev, double v_range, double dv, double sweep_rate) {
  if (!(v_range > 0.0)) throw std::invalid_argument("cv_butterfly: v_range must be positive");
  if (!(dv > 0.0)) throw std::invalid_argument("cv_butterfly: dv must be positive");
  if (dv > v_range / 10.0) throw std::invalid_argument("cv_butterfly: dv exceeds v_range/10");
  if (!(sweep_rate > 0.0)) throw std::invalid_argument("cv_butterfly: sweep_rate must be positive");

  const auto& st = dev.stack();
  const double area_cm2 = electro::units::um2_to_cm2(st.area_cap_um2);
  const double c_hzo = st.c_hzo_uf_cm2 * 1e-6 * area_cm2;
  const double c_lin = electro::series_capacitance(c_hzo, st.d_wox_nm, st.eps_wox, st.area_cap_um2);
  const auto n = static_cast<int>(std::ceil(2.0 * v_range / dv - 1e-9));
  const double h = 2.0 * v_range / n;

  dev.ensemble().apply_voltage(v_range);
  Trace trace(TraceKind::Capacitance, {"direction"});
  double t = 0.0;
  for (const int dir : {-1, +1}) {
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    std::vector<double> q(v.size());
    for (int i = 0; i <= n; ++i) {
      v[i] = -dir * v_range + dir * h * i;
      dev.ensemble().apply_voltage(v[i]);
      q[i] = dev.polarization() * 1e-6 * area_cm2 + c_lin * v[i];
    }
    for (int i = 1; i < n; ++i) {
      t += h / sweep_rate;
      const double c = (q[i + 1] - q[i - 1]) / (v[i + 1] - v[i - 1]);
      const double tag[] = {static_cast<double>(dir)};
      trace.append(t, v[i], c, tag);
    }
    t += 2.0 * h / sweep_rate;
  }
  dev.wait(t);
  return trace;
}

PundResult pund(FeFETDevice& dev, double amplitude, double frequency) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("pund: amplitude must be positive");
  if (!(frequency > 0.0)) throw std::invalid_argument("pund: frequency must be positive");
  auto& ens = dev.ensemble();
  const auto pulse = [&](double v) {
    const double before = dev.polarization();
    ens.apply_voltage(v);
    ens.apply_voltage(0.0);
    dev.wait(1.0 / frequency);
    return dev.polarization() - before;
  };
  pulse(-amplitude);  // preset
  PundResult r;
  r.p = pulse(amplitude);
  r.u = pulse(amplitude);
  r.n = pulse(-amplitude);
  r.d = pulse(-amplitude);
  r.total = 0.5 * ((r.p - r.u) + (r.d - r.n));
  return r;
}

Trace endurance_run(FeFETDevice& dev, const std::vector<CycleBlock>& schedule, double amplitude,
                    const std::vector<double>& pund_points, double pund_frequency,
                    const domains::WakeupParams& wakeup) {
  if (schedule.empty()) throw std::invalid_argument("endurance: empty cycle schedule");
  double total_cycles = 0.0;
  for (const auto& b : schedule) {
    if (!(b.n_cycles > 0.0) || !(b.frequency > 0.0)) {
      throw std::invalid_argument("endurance: schedule blocks need positive cycles and frequency");
    }
    total_cycles += b.n_cycles;
  }
  const auto elapsed = [&](double count) {
    double t = 0.0;
    double remaining = count;
    for (const auto& b : schedule) {
      const double n = std::min(remaining, b.n_cycles);
      t += n / b.frequency;
      remaining -= n;
      if (remaining <= 0.0) break;
    }
    return t;
  };

  Trace trace(TraceKind::Polarization, {"cycles"});
  const double pund_time = 5.0 / pund_frequency;
  double previous = -1.0;
  for (std::size_t i = 0; i < pund_points.size(); ++i) {
    const double count = pund_points[i];
    if (!(count > previous)) throw std::invalid_argument("endurance: points must increase");
    if (count > total_cycles * (1.0 + 1e-12)) {
      throw std::invalid_argument("endurance: point beyond the cycle schedule");
    }
    previous = count;
    domains::set_wakeup(dev.ensemble(), count, wakeup);
    const double p = pund(dev, amplitude, pund_frequency).total;
    const double tag[] = {count};
    trace.append(elapsed(count) + static_cast<double>(i) * pund_time, amplitude, p, tag);
  }
  return trace;
}

RetentionResult retention_protocol(FeFETDevice& dev, const RetentionParams& params) {
  if (params.n_states < 2) throw std::invalid_argument("retention: need at least 2 states");
  if (!(params.interval > 0.0) || !(params.duration >= params.interval)) {
    throw std::invalid_argument("retention: need 0 < interval <= duration");
  }
  if (!(params.v_write_max > 0.0)) throw std::invalid_argument("retention: v_write_max must be > 0");

  // Amplitude ladder from a noise-free twin: equally spaced target resistances.
  const auto settle = [&](double amplitude) {
    FeFETDevice twin = dev.noiseless();
    twin.write_pulse(params.reset_v, params.reset_width);
    if (amplitude > 0.0) twin.write_pulse(amplitude, params.write_width);
    return twin.true_resistance();
  };
  const double r_lo = settle(0.0);
  const double r_hi = settle(params.v_write_max);

  RetentionResult result;
  for (int k = 0; k < params.n_states; ++k) {
    const double target = r_lo + (r_hi - r_lo) * k / (params.n_states - 1);
    double amplitude = 0.0;
    if (k > 0) {
      double lo = 0.0;
      double hi = params.v_write_max;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (settle(mid) >= target ? hi : lo) = mid;
      }
      amplitude = hi;
    }
    result.amplitudes.push_back(amplitude);
    result.targets.push_back(target);
  }

  const auto n_reads = static_cast<int>(std::floor(params.duration / params.interval + 1e-9));
  for (int k = 0; k < params.n_states; ++k) {
    dev.write_pulse(params.reset_v, params.reset_width);
    if (result.amplitudes[k] > 0.0) dev.write_pulse(result.amplitudes[k], params.write_width);
    Trace trace(TraceKind::Resistance, {"state", "amplitude"});
    trace.set_label("state " + std::to_string(k));
    for (int j = 0; j <= n_reads; ++j) {
      if (j > 0) dev.wait(params.interval - dev.options().read_time);
      const double r = dev.read_rds();
      const double tag[] = {static_cast<double>(k), result.amplitudes[k]};
      trace.append(j * params.interval, result.amplitudes[k], r, tag);
    }
    result.traces.push_back(std::move(trace));
  }
  return result;
}

std::vector<Pulse> pulse_train(const PulseScheme& scheme) {
  std::vector<Pulse> out;
  if (const auto* a = std::get_if<AmplitudeRamp>(&scheme)) {
    if (!(a->step >= 0.0) || !(a->width > 0.0)) {
      throw std::invalid_argument("amplitude ramp: step must be >= 0 and width > 0");
    }
    if (!(a->v_pot_max >= 0.0) || !(a->v_dep_min <= 0.0)) {
      throw std::invalid_argument("amplitude ramp: need v_pot_max >= 0 >= v_dep_min");
    }
    int n_pot = a->n_pot;
    int n_dep = a->n_dep;
    if (a->step == 0.0 && (n_pot <= 0 || n_dep <= 0)) {
      throw std::invalid_argument("amplitude ramp: zero step requires explicit pulse counts");
    }
    if (n_pot <= 0) n_pot = static_cast<int>(std::lround(a->v_pot_max / a->step));
    if (n_dep <= 0) n_dep = static_cast<int>(std::lround(-a->v_dep_min / a->step));
    if (n_pot < 1 || n_dep < 1) throw std::invalid_argument("amplitude ramp: empty branch");
    for (int k = 1; k <= n_pot; ++k) {
      out.push_back({std::min(k * a->step, a->v_pot_max), a->width, Branch::Potentiation});
    }
    for (int k = 1; k <= n_dep; ++k) {
      out.push_back({std::max(-k * a->step, a->v_dep_min), a->width, Branch::Depression});
    }
    return out;
  }
  const auto& w = std::get<WidthRamp>(scheme);
  if (w.n_pot < 1 || w.n_dep < 1) throw std::invalid_argument("width ramp: empty branch");
  if (!(w.w_start > 0.0) || !(w.w_end >= w.w_start)) {
    throw std::invalid_argument("width ramp: need 0 < w_start <= w_end");
  }
  const auto width_at = [&](int k, int n) {
    return n == 1 ? w.w_start : w.w_start + (w.w_end - w.w_start) * k / (n - 1);
  };
  for (int k = 0; k < w.n_pot; ++k) out.push_back({w.v_pot, width_at(k, w.n_pot), Branch::Potentiation});
  for (int k = 0; k < w.n_dep; ++k) out.push_back({w.v_dep, width_at(k, w.n_dep), Branch::Depression});
  return out;
}

Pulse preconditioning_pulse(const PulseScheme& scheme) {
  if (const auto* a = std::get_if<AmplitudeRamp>(&scheme)) {
    return {a->v_dep_min, a->width, Branch::Depression};
  }
  const auto& w = std::get<WidthRamp>(scheme);
  return {w.v_dep, w.w_end, Branch::Depression};
}

Trace potentiation_depression(FeFETDevice& dev, const PulseScheme& scheme, int n_cycles) {
  if (n_cycles < 1) throw std::invalid_argument("potentiation_depression: n_cycles must be >= 1");
  const auto train = pulse_train(scheme);
  const auto pre = preconditioning_pulse(scheme);
  dev.write_pulse(pre.amplitude, pre.width);

  Trace trace(TraceKind::Resistance,
              {"pulse_index", "cycle_id", "branch", "position", "width", "r_true"});
  int index = 0;
  for (int cycle = 0; cycle < n_cycles; ++cycle) {
    int position = 0;
    Branch current = train.front().branch;
    for (const auto& p : train) {
      if (p.branch != current) {
        current = p.branch;
        position = 0;
      }
      dev.write_pulse(p.amplitude, p.width);
      const double r_true = dev.true_resistance();
      const double r = dev.read_rds();
      const double tags[] = {static_cast<double>(index++), static_cast<double>(cycle),
                             static_cast<double>(static_cast<int>(p.branch)),
                             static_cast<double>(position++), p.width, r_true};
      trace.append(dev.clock(), p.amplitude, r, tags);
    }
  }
  return trace;
}

}  // namespace ferrosim::instrument

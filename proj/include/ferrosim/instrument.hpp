#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ferrosim/domains.hpp"
#include "ferrosim/electrostatics.hpp"
#include "ferrosim/signal.hpp"

namespace ferrosim::instrument {

enum class NoiseModel {
  RonReferenced,  // R_true + sigma * R_on * eps: constant absolute scatter
  Relative,       // R_true * (1 + sigma * eps)
};

NoiseModel noise_model_from_string(std::string_view name);
std::string_view to_string(NoiseModel model);

struct DeviceOptions {
  double read_noise_sigma = 0.01;
  NoiseModel noise_model = NoiseModel::RonReferenced;
  double scale = 0.30;           // polarization -> effective V_GS
  bool width_rule = true;        // pulses shorter than t_min switch nothing
  double t_min = 10e-9;          // s
  double width_tau = 0.0;        // s; > 0 scales V by (1 - exp(-width / tau))
  double read_time = 1e-3;       // s spent by one +-200 mV read sweep
  double retention_decay = 0.0;  // fractional P loss per decade of seconds after a write
  std::uint64_t seed = 42;
};

struct PulseLog {
  std::size_t count = 0;
  double total_width = 0.0;  // s
  double last_width = 0.0;   // s
};

// Ferroelectric gate stack driving a WOx channel. Reads consume noise and
// clock time but never touch the polarization state.
class FeFETDevice {
 public:
  FeFETDevice(domains::DomainEnsemble ensemble, electro::DeviceStack stack,
              DeviceOptions options = {});

  const domains::DomainEnsemble& ensemble() const { return ensemble_; }
  domains::DomainEnsemble& ensemble() { return ensemble_; }
  const electro::DeviceStack& stack() const { return stack_; }
  const DeviceOptions& options() const { return options_; }
  const PulseLog& pulse_log() const { return log_; }

  double clock() const { return clock_; }
  void wait(double seconds);

  // Remanent polarization seen by the channel; 0 for a film with no active domains.
  double polarization() const;
  double true_resistance() const;
  double on_resistance() const { return electro::on_resistance(stack_); }

  double read_rds();
  void write_pulse(double amplitude, double width);

  // Same state and stack with read noise disabled.
  FeFETDevice noiseless() const;

 private:
  domains::DomainEnsemble ensemble_;
  electro::DeviceStack stack_;
  DeviceOptions options_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  double clock_ = 0.0;
  double since_write_ = 0.0;
  PulseLog log_;
};

// Builds the ensemble, applies `wakeup_cycles` of field cycling, validates the stack.
FeFETDevice make_device(const domains::EnsembleConfig& ensemble, const electro::DeviceStack& stack,
                        const DeviceOptions& options, double wakeup_cycles,
                        const domains::WakeupParams& wakeup);

// 0 -> v_max -> v_min -> 0 in n_steps equal steps along the path, quantized
// to 1 nV so loops on a common step share voltages exactly.
std::vector<double> triangular_staircase(double v_min, double v_max, int n_steps);

Trace rv_hysteresis(FeFETDevice& dev, double v_min, double v_max, int n_steps,
                    double width = 2e-6);

// Symmetric loops (-a, +a) for each amplitude, all on a common voltage step,
// after one reset pulse at -max(a).
std::vector<Trace> minor_loops(FeFETDevice& dev, const std::vector<double>& amplitudes,
                               double step, double width = 5e-6);

Trace pv_loop(FeFETDevice& dev, double amplitude, double frequency, int samples_per_period = 400);

Trace cv_butterfly(FeFETDevice& dev, double v_range, double dv, double sweep_rate = 1.0);

struct PundResult {
  double p = 0.0;  // remanent change per pulse, uC/cm^2
  double u = 0.0;
  double n = 0.0;
  double d = 0.0;
  double total = 0.0;  // |P_r-| + |P_r+|
};

PundResult pund(FeFETDevice& dev, double amplitude, double frequency);

struct CycleBlock {
  double n_cycles;
  double frequency;  // Hz
};

// PUND at each cumulative cycle count; the trace carries a "cycles" column.
Trace endurance_run(FeFETDevice& dev, const std::vector<CycleBlock>& schedule, double amplitude,
                    const std::vector<double>& pund_points, double pund_frequency,
                    const domains::WakeupParams& wakeup);

struct RetentionParams {
  int n_states = 18;
  double duration = 1500.0;  // s
  double interval = 5.0;     // s
  double reset_v = -4.0;
  double reset_width = 1e-3;
  double write_width = 5e-6;
  double v_write_max = 4.0;
};

struct RetentionResult {
  std::vector<Trace> traces;
  std::vector<double> amplitudes;
  std::vector<double> targets;  // noise-free target resistances
};

RetentionResult retention_protocol(FeFETDevice& dev, const RetentionParams& params);

struct AmplitudeRamp {
  double v_pot_max = 3.5;
  double v_dep_min = -3.0;
  double step = 0.1;
  double width = 10e-6;
  int n_pot = 0;  // 0: derived from v_pot_max / step
  int n_dep = 0;
};

struct WidthRamp {
  double v_pot = 2.0;
  double v_dep = -2.0;
  double w_start = 40e-9;
  double w_end = 250e-9;
  int n_pot = 12;
  int n_dep = 12;
};

using PulseScheme = std::variant<AmplitudeRamp, WidthRamp>;

struct Pulse {
  double amplitude;
  double width;
  Branch branch;
};

// One potentiation + depression cycle.
std::vector<Pulse> pulse_train(const PulseScheme& scheme);
Pulse preconditioning_pulse(const PulseScheme& scheme);

// Columns: pulse_index, cycle_id, branch, position, width, r_true.
Trace potentiation_depression(FeFETDevice& dev, const PulseScheme& scheme, int n_cycles);

}  // namespace ferrosim::instrument

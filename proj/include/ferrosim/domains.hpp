#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ferrosim/signal.hpp"

namespace ferrosim::domains {

// Bistable relay: switches to +1 at or above v_up, to -1 at or below v_down.
class Hysteron {
 public:
  Hysteron(double v_up, double v_down, double weight, int state = -1, bool active = true);

  double v_up() const { return v_up_; }
  double v_down() const { return v_down_; }
  double weight() const { return weight_; }
  int state() const { return state_; }
  bool active() const { return active_; }

  // Returns true when the state flipped. Inactive hysterons never switch.
  bool apply(double v) {
    if (!active_) return false;
    if (v >= v_up_ && state_ != 1) {
      state_ = 1;
      return true;
    }
    if (v <= v_down_ && state_ != -1) {
      state_ = -1;
      return true;
    }
    return false;
  }

  void set_active(bool active) { active_ = active; }

  friend bool operator==(const Hysteron&, const Hysteron&) = default;

 private:
  double v_up_;
  double v_down_;
  double weight_;
  int state_;
  bool active_;
};

struct EnsembleConfig {
  int n_hysterons = 2000;
  double mean_v_up = 0.91;     // V
  double mean_v_down = -1.27;  // V
  double sigma_c = 0.475;      // V
  double p_sat = 12.5;         // uC/cm^2
  std::uint64_t seed = 42;

  // Empty when the config is valid; otherwise one message per violated invariant.
  std::vector<std::string> violations() const;
};

// Weighted Preisach ensemble. A single-owner value: copy it to run
// independent protocols.
class DomainEnsemble {
 public:
  // Activation keys default to 0 (always active); states keep their given values.
  DomainEnsemble(std::vector<Hysteron> hysterons, double p_sat, std::uint64_t seed = 0,
                 std::vector<double> activation_keys = {});

  const std::vector<Hysteron>& hysterons() const { return hysterons_; }
  const std::vector<double>& activation_keys() const { return activation_keys_; }
  std::size_t size() const { return hysterons_.size(); }
  double p_sat() const { return p_sat_; }
  double active_fraction() const { return active_fraction_; }
  std::uint64_t seed() const { return seed_; }

  // Quasi-static Preisach update. Returns the number of hysterons that flipped.
  std::size_t apply_voltage(double v);

  // P = p_sat * sum(w s active) / sum(w), in uC/cm^2.
  // Throws std::domain_error("no active domains") if nothing is active.
  double polarization() const;
  bool has_active() const;

  // A hysteron is active iff its activation key is below `fraction`, so the
  // active set only grows as the fraction rises.
  void set_active_fraction(double fraction);

  std::vector<int> states() const;

  friend bool operator==(const DomainEnsemble&, const DomainEnsemble&) = default;

 private:
  std::vector<Hysteron> hysterons_;
  std::vector<double> activation_keys_;
  double p_sat_;
  double active_fraction_ = 1.0;
  std::uint64_t seed_;
  double total_weight_ = 0.0;
};

// Samples thresholds v_up ~ N(mean_v_up, sigma), v_down ~ N(mean_v_down, sigma)
// and redraws any pair with v_up <= v_down. Initial states alternate +1/-1.
// Throws std::invalid_argument naming the violated invariant.
DomainEnsemble build_ensemble(const EnsembleConfig& config);

// Applies every sample of the waveform and records (t, V, P).
Trace run_waveform(DomainEnsemble& ensemble, const Waveform& waveform);

struct WakeupParams {
  double n_w = 1e4;   // cycles
  double a_min = 0.5; // pristine active fraction
};

// a_min + (1 - a_min) * (1 - exp(-n_cycles / n_w))
double wakeup_fraction(double n_cycles, const WakeupParams& params);

// Sets the active fraction after `n_cycles` bipolar field cycles.
double set_wakeup(DomainEnsemble& ensemble, double n_cycles, const WakeupParams& params);

// JSON snapshot with every field, the seed and the full state vector.
std::string to_snapshot(const DomainEnsemble& ensemble);
DomainEnsemble from_snapshot(const std::string& text);
void save_snapshot(const DomainEnsemble& ensemble, const std::filesystem::path& path);
DomainEnsemble load_snapshot(const std::filesystem::path& path);

}  // namespace ferrosim::domains

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ferrosim/gpr.hpp"
#include "ferrosim/linear_fit.hpp"
#include "ferrosim/signal.hpp"

namespace ferrosim::analysis {

struct PulseSample {
  int pulse_index;
  int cycle_id;
  Branch branch;
  int position;  // pulse number within its branch, from 0
  double r_ds;
  double r_true;  // NaN when the noise-free value is unknown
};

// Read-after-write resistance series from a potentiation/depression run.
class PulseSeries {
 public:
  explicit PulseSeries(std::vector<PulseSample> samples);

  // Needs the pulse_index, cycle_id, branch and position columns; r_true is optional.
  static PulseSeries from_trace(const Trace& trace);

  const std::vector<PulseSample>& samples() const { return samples_; }
  int n_cycles() const { return n_cycles_; }
  bool has_branch(Branch b) const;
  bool has_truth() const;

  struct BranchData {
    std::vector<double> position;
    std::vector<double> r_ds;
    std::vector<double> r_true;
    std::vector<int> cycle_id;
    int length = 0;  // distinct positions
  };
  BranchData branch(Branch b) const;

 private:
  std::vector<PulseSample> samples_;
  int n_cycles_ = 0;
};

// Delta R_i = mean(x_{i+1}) - mean(x_i) on the posterior mean.
std::vector<double> delta_r(const GprModel& model, std::span<const double> positions);

struct SnrResult {
  std::vector<double> values;  // |Delta R_i| / sigma_res; +inf when sigma_res == 0
  double sigma_res = 0.0;
  bool infinite = false;
};

// sigma_res is the standard deviation of (observed - posterior mean) over (x, y).
SnrResult snr(const GprModel& model, std::span<const double> x, std::span<const double> y,
              std::span<const double> delta);

// |dr_pot - dr_dep| / (dr_pot + dr_dep) on magnitudes.
double symmetry_factor(double dr_pot, double dr_dep);

struct SfProfile {
  std::vector<double> r_grid;
  std::vector<double> dr_pot;
  std::vector<double> dr_dep;
  std::vector<double> sf;  // NaN where both branches are flat
  double sf_mean = 0.0;    // over the full overlap
  double sf_center = 0.0;  // over the central third of the grid
};

// Takes the noise-free resistance at consecutive pulse positions of each
// branch, matches step sizes at equal resistance and applies the symmetry factor.
SfProfile sf_profile(std::span<const double> pot_levels, std::span<const double> dep_levels,
                     int n_grid = 32);

struct PositionStats {
  Branch branch;
  int position;
  double mean;
  double sigma;
  double sigma_over_ron;
};

struct CycleStats {
  double r_on = 0.0;
  std::vector<PositionStats> positions;
};

// Per-position mean and sample sigma across cycles. R_on defaults to the
// smallest per-position mean. Needs >= 3 cycles with identical pulse layouts.
CycleStats cycle_stats(const PulseSeries& series, std::optional<double> r_on = std::nullopt);

// E = v i t / (w l) in J/um^2 with w, l in um.
double write_energy(double v, double i_gate, double t, double w_um, double l_um);

// Largest subset of traces whose time-averaged means, in order, are pairwise
// separated by at least k_sigma pooled per-sample standard deviations.
int states_distinguishable(std::span<const Trace> traces, double k_sigma);

// Signed area enclosed by the (V, value) path, closing last -> first.
double hysteresis_area(const Trace& trace);

// True when every inner sample lies between the outer loop's branches at the
// same voltage (within tol). Voltages must come from a shared step grid.
bool loop_contains(const Trace& outer, const Trace& inner, double tol = 0.0);

struct PvLoopMetrics {
  double pr_plus;   // P at V = 0 on the descending branch
  double pr_minus;  // P at V = 0 on the ascending branch
  double vc_plus;   // zero crossing of P on the ascending branch
  double vc_minus;  // zero crossing on the descending branch
};

// Expects the 0 -> +A -> -A -> +A -> 0 loop produced by pv_loop.
PvLoopMetrics pv_loop_metrics(const Trace& trace);

// [first, last] positions whose normalized level lies within [lo, hi].
std::pair<int, int> active_window(std::span<const double> levels, double lo = 0.05, double hi = 0.95);

struct EnergyInputs {
  double v_write = 3.5;
  double i_gate = 3.02e-8;
  double t_write = 200e-9;
  double width_um = 20.0;
  double length_um = 5.0;
};

struct MetricsOptions {
  double window_lo = 0.05;
  double window_hi = 0.95;
  int sf_grid = 32;
  EnergyInputs energy;
  double energy_reference = 2.1e-17;  // J/um^2, externally quoted value to compare against
  std::optional<double> r_on;
};

struct BranchMetrics {
  Branch branch;
  int window_first = 0;
  int window_last = 0;
  LinearFit fit;
  std::vector<double> fit_x;
  std::vector<double> fit_y;
  GprHyper hyper{};
  double lml = 0.0;
  std::vector<double> positions;
  std::vector<double> gpr_mean;
  std::vector<double> gpr_std;
  std::vector<double> delta_r;
  SnrResult snr;
  double gpr_rmse = 0.0;  // against r_true; NaN without truth
  double raw_rmse = 0.0;
};

struct MetricsReport {
  BranchMetrics pot;
  BranchMetrics dep;
  double adj_r2 = 0.0;  // the weaker of the two branches
  SfProfile sf;
  std::optional<CycleStats> cycles;
  double cycle_sigma_pct = 0.0;  // mean sigma/R_on in percent; NaN without >= 3 cycles
  double gpr_rmse = 0.0;
  double raw_rmse = 0.0;
  double energy_per_area = 0.0;
  double energy_reference = 0.0;
  bool energy_matches_reference = false;
};

MetricsReport compute_metrics(const PulseSeries& series, const MetricsOptions& options = {});

}  // namespace ferrosim::analysis

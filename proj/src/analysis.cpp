#include "ferrosim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ferrosim::analysis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Linear interpolation on sorted abscissae, clamped at both ends.
double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto i = static_cast<std::size_t>(it - xs.begin());
  const double x0 = xs[i - 1];
  const double x1 = xs[i];
  if (x1 == x0) return ys[i];
  return ys[i - 1] + (ys[i] - ys[i - 1]) * (x - x0) / (x1 - x0);
}

// Zero crossing of y along the path, or NaN when y keeps its sign.
double zero_crossing(std::span<const double> x, std::span<const double> y) {
  for (std::size_t i = 1; i < y.size(); ++i) {
    if ((y[i - 1] <= 0.0 && y[i] > 0.0) || (y[i - 1] >= 0.0 && y[i] < 0.0)) {
      return x[i - 1] + (x[i] - x[i - 1]) * (0.0 - y[i - 1]) / (y[i] - y[i - 1]);
    }
  }
  return kNaN;
}

// Value of y where x crosses 0 along the path.
double value_at_zero(std::span<const double> x, std::span<const double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) return y[i];
    if (i > 0 && ((x[i - 1] < 0.0) != (x[i] < 0.0))) {
      return y[i - 1] + (y[i] - y[i - 1]) * (0.0 - x[i - 1]) / (x[i] - x[i - 1]);
    }
  }
  return kNaN;
}

double rms(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

}  // namespace

PulseSeries::PulseSeries(std::vector<PulseSample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw std::invalid_argument("pulse series: empty");
  int max_cycle = -1;
  std::map<std::pair<int, int>, int> next_position;  // (cycle, branch) -> expected position
  for (const auto& s : samples_) {
    if (s.cycle_id < 0 || s.position < 0) {
      throw std::invalid_argument("pulse series: negative cycle or position");
    }
    auto& expected = next_position[{s.cycle_id, static_cast<int>(s.branch)}];
    if (s.position != expected) {
      throw std::invalid_argument("pulse series: positions not contiguous within a cycle");
    }
    ++expected;
    max_cycle = std::max(max_cycle, s.cycle_id);
  }
  n_cycles_ = max_cycle + 1;
}

PulseSeries PulseSeries::from_trace(const Trace& trace) {
  for (const char* col : {"pulse_index", "cycle_id", "branch", "position"}) {
    if (!trace.has_column(col)) {
      throw std::invalid_argument(std::string("pulse series: trace lacks column ") + col);
    }
  }
  const auto index = trace.column("pulse_index");
  const auto cycle = trace.column("cycle_id");
  const auto branch = trace.column("branch");
  const auto position = trace.column("position");
  const bool truth = trace.has_column("r_true");
  const auto r_true = truth ? trace.column("r_true") : std::vector<double>{};
  std::vector<PulseSample> samples;
  samples.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    samples.push_back({static_cast<int>(index[i]), static_cast<int>(cycle[i]),
                       branch[i] > 0 ? Branch::Potentiation : Branch::Depression,
                       static_cast<int>(position[i]), trace[i].value,
                       truth ? r_true[i] : kNaN});
  }
  return PulseSeries(std::move(samples));
}

bool PulseSeries::has_branch(Branch b) const {
  return std::any_of(samples_.begin(), samples_.end(), [&](const auto& s) { return s.branch == b; });
}

bool PulseSeries::has_truth() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](const auto& s) { return !std::isnan(s.r_true); });
}

PulseSeries::BranchData PulseSeries::branch(Branch b) const {
  BranchData d;
  for (const auto& s : samples_) {
    if (s.branch != b) continue;
    d.position.push_back(s.position);
    d.r_ds.push_back(s.r_ds);
    d.r_true.push_back(s.r_true);
    d.cycle_id.push_back(s.cycle_id);
    d.length = std::max(d.length, s.position + 1);
  }
  return d;
}

std::vector<double> delta_r(const GprModel& model, std::span<const double> positions) {
  if (positions.size() < 2) throw std::invalid_argument("delta_r: need at least 2 positions");
  const auto m = model.mean(positions);
  std::vector<double> out(m.size() - 1);
  for (std::size_t i = 0; i + 1 < m.size(); ++i) out[i] = m[i + 1] - m[i];
  return out;
}

SnrResult snr(const GprModel& model, std::span<const double> x, std::span<const double> y,
              std::span<const double> delta) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("snr: bad sample set");
  std::vector<double> res(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) res[i] = y[i] - model.mean(x[i]);
  const double mean = std::accumulate(res.begin(), res.end(), 0.0) / static_cast<double>(res.size());
  double var = 0.0;
  for (const double r : res) var += (r - mean) * (r - mean);
  var /= static_cast<double>(res.size() - 1);

  SnrResult out;
  out.sigma_res = std::sqrt(var);
  // Residuals at round-off level of the data count as noise-free.
  double scale = 0.0;
  for (const double v : y) scale = std::max(scale, std::abs(v));
  out.infinite = !(out.sigma_res > 1e-12 * scale);
  for (const double d : delta) {
    if (d == 0.0) {
      out.values.push_back(0.0);
    } else if (out.infinite) {
      out.values.push_back(std::numeric_limits<double>::infinity());
    } else {
      out.values.push_back(std::abs(d) / out.sigma_res);
    }
  }
  return out;
}

double symmetry_factor(double dr_pot, double dr_dep) {
  if (!(dr_pot >= 0.0) || !(dr_dep >= 0.0)) {
    throw std::invalid_argument("symmetry_factor: step magnitudes must be >= 0");
  }
  const double sum = dr_pot + dr_dep;
  if (sum == 0.0) throw std::domain_error("SF undefined at flat point");
  return std::abs(dr_pot - dr_dep) / sum;
}

SfProfile sf_profile(std::span<const double> pot_levels, std::span<const double> dep_levels,
                     int n_grid) {
  if (pot_levels.size() < 2 || dep_levels.size() < 2) {
    throw std::invalid_argument("sf_profile: each branch needs at least 2 levels");
  }
  if (n_grid < 3) throw std::invalid_argument("sf_profile: grid needs at least 3 points");

  // (resistance level, |step|) pairs sorted by level.
  const auto steps = [](std::span<const double> m) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      pts.emplace_back(0.5 * (m[i] + m[i + 1]), std::abs(m[i + 1] - m[i]));
    }
    std::sort(pts.begin(), pts.end());
    std::pair<std::vector<double>, std::vector<double>> xy;
    for (const auto& [r, d] : pts) {
      xy.first.push_back(r);
      xy.second.push_back(d);
    }
    return xy;
  };
  const auto [pot_r, pot_d] = steps(pot_levels);
  const auto [dep_r, dep_d] = steps(dep_levels);
  const double lo = std::max(pot_r.front(), dep_r.front());
  const double hi = std::min(pot_r.back(), dep_r.back());
  if (!(hi > lo)) throw std::invalid_argument("sf_profile: branches do not overlap in resistance");

  SfProfile out;
  double sum_all = 0.0;
  double sum_center = 0.0;
  int n_all = 0;
  int n_center = 0;
  const int c0 = n_grid / 3;
  const int c1 = n_grid - n_grid / 3;
  for (int i = 0; i < n_grid; ++i) {
    const double r = lo + (hi - lo) * i / (n_grid - 1);
    const double a = interp(pot_r, pot_d, r);
    const double b = interp(dep_r, dep_d, r);
    const double sf = (a + b) > 0.0 ? symmetry_factor(a, b) : kNaN;
    out.r_grid.push_back(r);
    out.dr_pot.push_back(a);
    out.dr_dep.push_back(b);
    out.sf.push_back(sf);
    if (std::isnan(sf)) continue;
    sum_all += sf;
    ++n_all;
    if (i >= c0 && i < c1) {
      sum_center += sf;
      ++n_center;
    }
  }
  out.sf_mean = n_all > 0 ? sum_all / n_all : kNaN;
  out.sf_center = n_center > 0 ? sum_center / n_center : kNaN;
  return out;
}

CycleStats cycle_stats(const PulseSeries& series, std::optional<double> r_on) {
  if (series.n_cycles() < 3) throw std::invalid_argument("cycle_stats: need at least 3 cycles");
  // (branch, position) -> values over cycles
  std::map<std::pair<int, int>, std::vector<double>> groups;
  std::map<int, std::map<int, int>> layout;  // cycle -> branch -> count
  for (const auto& s : series.samples()) {
    groups[{-static_cast<int>(s.branch), s.position}].push_back(s.r_ds);
    ++layout[s.cycle_id][static_cast<int>(s.branch)];
  }
  for (const auto& [cycle, counts] : layout) {
    if (counts != layout.begin()->second) {
      throw std::invalid_argument("cycle_stats: misaligned cycles");
    }
  }
  if (static_cast<int>(layout.size()) != series.n_cycles()) {
    throw std::invalid_argument("cycle_stats: misaligned cycles");
  }

  CycleStats out;
  for (const auto& [key, values] : groups) {
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    out.positions.push_back({key.first < 0 ? Branch::Potentiation : Branch::Depression, key.second,
                             mean, std::sqrt(var / (n - 1.0)), 0.0});
  }
  out.r_on = r_on.value_or(std::min_element(out.positions.begin(), out.positions.end(),
                                            [](const auto& a, const auto& b) {
                                              return a.mean < b.mean;
                                            })->mean);
  if (!(out.r_on > 0.0)) throw std::invalid_argument("cycle_stats: R_on must be positive");
  for (auto& p : out.positions) p.sigma_over_ron = p.sigma / out.r_on;
  return out;
}

double write_energy(double v, double i_gate, double t, double w_um, double l_um) {
  if (!(v >= 0.0) || !(i_gate >= 0.0) || !(t >= 0.0) || !(w_um > 0.0) || !(l_um > 0.0)) {
    throw std::invalid_argument("write_energy: inputs must be non-negative (w, l positive)");
  }
  return v * i_gate * t / (w_um * l_um);
}

int states_distinguishable(std::span<const Trace> traces, double k_sigma) {
  if (traces.empty()) throw std::invalid_argument("states_distinguishable: no traces");
  if (!(k_sigma > 0.0)) throw std::invalid_argument("states_distinguishable: k_sigma must be > 0");
  std::vector<double> means;
  double ss = 0.0;
  double dof = 0.0;
  for (const auto& tr : traces) {
    if (tr.empty()) throw std::invalid_argument("states_distinguishable: empty trace");
    const auto v = tr.values();
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (const double x : v) ss += (x - m) * (x - m);
    dof += static_cast<double>(v.size() - 1);
    means.push_back(m);
  }
  const double pooled = dof > 0.0 ? std::sqrt(ss / dof) : 0.0;
  const double gap = k_sigma * pooled;
  std::sort(means.begin(), means.end());
  int count = 1;
  double last = means.front();
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (means[i] - last >= gap && means[i] > last) {
      ++count;
      last = means[i];
    }
  }
  return count;
}

double hysteresis_area(const Trace& trace) {
  const auto& s = trace.samples();
  if (s.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& a = s[i];
    const auto& b = s[(i + 1) % s.size()];
    twice += a.v * b.value - b.v * a.value;
  }
  return 0.5 * twice;
}

bool loop_contains(const Trace& outer, const Trace& inner, double tol) {
  std::map<double, std::pair<double, double>> bounds;  // V -> (min, max) over the outer loop
  for (const auto& s : outer.samples()) {
    auto [it, fresh] = bounds.try_emplace(s.v, s.value, s.value);
    if (!fresh) {
      it->second.first = std::min(it->second.first, s.value);
      it->second.second = std::max(it->second.second, s.value);
    }
  }
  for (const auto& s : inner.samples()) {
    const auto it = bounds.find(s.v);
    if (it == bounds.end()) {
      throw std::invalid_argument("loop_contains: inner voltage not on the outer grid");
    }
    if (s.value < it->second.first - tol || s.value > it->second.second + tol) return false;
  }
  return true;
}

PvLoopMetrics pv_loop_metrics(const Trace& trace) {
  const auto v = trace.voltages();
  const auto p = trace.values();
  if (v.size() < 8) throw std::invalid_argument("pv_loop_metrics: trace too short");
  const auto top = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  const auto bottom = static_cast<std::size_t>(std::min_element(v.begin() + top, v.end()) - v.begin());
  const auto top2 =
      static_cast<std::size_t>(std::max_element(v.begin() + bottom, v.end()) - v.begin());
  if (!(top < bottom && bottom < top2)) {
    throw std::invalid_argument("pv_loop_metrics: expected +A, -A, +A turning points");
  }
  const std::span<const double> vd(v.data() + top, bottom - top + 1);
  const std::span<const double> pd(p.data() + top, bottom - top + 1);
  const std::span<const double> va(v.data() + bottom, top2 - bottom + 1);
  const std::span<const double> pa(p.data() + bottom, top2 - bottom + 1);
  return {value_at_zero(vd, pd), value_at_zero(va, pa), zero_crossing(va, pa),
          zero_crossing(vd, pd)};
}

std::pair<int, int> active_window(std::span<const double> levels, double lo, double hi) {
  if (levels.size() < 2) throw std::invalid_argument("active_window: need at least 2 levels");
  const double first = levels.front();
  const double span = levels.back() - first;
  if (span == 0.0) return {0, static_cast<int>(levels.size()) - 1};
  int a = -1;
  int b = -1;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double f = (levels[i] - first) / span;
    if (f >= lo && f <= hi) {
      if (a < 0) a = static_cast<int>(i);
      b = static_cast<int>(i);
    }
  }
  if (a < 0) return {0, static_cast<int>(levels.size()) - 1};
  return {a, b};
}

namespace {

BranchMetrics branch_metrics(const PulseSeries& series, Branch b, const MetricsOptions& opt) {
  const auto data = series.branch(b);
  if (data.length < 4) throw std::invalid_argument("metrics: branch needs at least 4 positions");
  BranchMetrics m;
  m.branch = b;

  auto sel = gpr_select(data.position, data.r_ds, default_grid(data.r_ds));
  const auto& model = sel.model;
  m.hyper = model.hyper();
  m.lml = model.log_marginal_likelihood();
  for (int i = 0; i < data.length; ++i) m.positions.push_back(i);
  m.gpr_mean = model.mean(m.positions);
  for (const double x : m.positions) m.gpr_std.push_back(std::sqrt(model.variance(x)));
  m.delta_r = delta_r(model, m.positions);
  m.snr = snr(model, data.position, data.r_ds, m.delta_r);

  const auto [first, last] = active_window(m.gpr_mean, opt.window_lo, opt.window_hi);
  m.window_first = first;
  m.window_last = last;
  for (std::size_t i = 0; i < data.position.size(); ++i) {
    if (data.position[i] >= first && data.position[i] <= last) {
      m.fit_x.push_back(data.position[i]);
      m.fit_y.push_back(data.r_ds[i]);
    }
  }
  if (m.fit_x.size() < 3 || last - first < 1) {
    // Too narrow a transition: fall back to the whole branch.
    m.window_first = 0;
    m.window_last = data.length - 1;
    m.fit_x = data.position;
    m.fit_y = data.r_ds;
  }
  m.fit = linear_fit(m.fit_x, m.fit_y);

  if (series.has_truth()) {
    std::vector<double> pred;
    for (const double x : data.position) pred.push_back(m.gpr_mean[static_cast<std::size_t>(x)]);
    m.gpr_rmse = rms(pred, data.r_true);
    m.raw_rmse = rms(data.r_ds, data.r_true);
  } else {
    m.gpr_rmse = m.raw_rmse = kNaN;
  }
  return m;
}

}  // namespace

MetricsReport compute_metrics(const PulseSeries& series, const MetricsOptions& options) {
  if (!series.has_branch(Branch::Potentiation) || !series.has_branch(Branch::Depression)) {
    throw std::invalid_argument("metrics: both potentiation and depression pulses are required");
  }
  MetricsReport r;
  r.pot = branch_metrics(series, Branch::Potentiation, options);
  r.dep = branch_metrics(series, Branch::Depression, options);
  r.adj_r2 = std::min(r.pot.fit.adj_r2, r.dep.fit.adj_r2);
  r.sf = sf_profile(r.pot.gpr_mean, r.dep.gpr_mean, options.sf_grid);

  if (series.n_cycles() >= 3) {
    r.cycles = cycle_stats(series, options.r_on);
    double s = 0.0;
    for (const auto& p : r.cycles->positions) s += p.sigma_over_ron;
    r.cycle_sigma_pct = 100.0 * s / static_cast<double>(r.cycles->positions.size());
  } else {
    r.cycle_sigma_pct = kNaN;
  }

  if (series.has_truth()) {
    const double np = static_cast<double>(series.branch(Branch::Potentiation).r_ds.size());
    const double nd = static_cast<double>(series.branch(Branch::Depression).r_ds.size());
    const auto pool = [&](double a, double b) {
      return std::sqrt((a * a * np + b * b * nd) / (np + nd));
    };
    r.gpr_rmse = pool(r.pot.gpr_rmse, r.dep.gpr_rmse);
    r.raw_rmse = pool(r.pot.raw_rmse, r.dep.raw_rmse);
  } else {
    r.gpr_rmse = r.raw_rmse = kNaN;
  }

  const auto& e = options.energy;
  r.energy_per_area = write_energy(e.v_write, e.i_gate, e.t_write, e.width_um, e.length_um);
  r.energy_reference = options.energy_reference;
  r.energy_matches_reference =
      std::abs(r.energy_per_area - r.energy_reference) <= 0.05 * std::abs(r.energy_reference);
  return r;
}

}  // namespace ferrosim::analysis

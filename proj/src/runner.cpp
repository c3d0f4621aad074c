#include "ferrosim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "ferrosim/analysis.hpp"
#include "ferrosim/electrostatics.hpp"
#include "ferrosim/instrument.hpp"
#include "ferrosim/io.hpp"

namespace ferrosim::runner {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Plot {
  std::string x_label;
  std::string y_label;
  std::vector<io::SvgSeries> series;
};

// Collects every artifact of one run and the manifest entries describing them.
class Writer {
 public:
  Writer(const config::ExperimentConfig& cfg, std::string dir)
      : cfg_(cfg), dir_(std::move(dir)),
        header_{cfg.id, cfg.seed, config::config_hash(cfg)} {
    for (const auto& f : cfg.formats) formats_.insert(f);
  }

  bool wants(const std::string& format) const { return formats_.count(format) > 0; }

  void trace(const std::string& name, const Trace& t, const std::string& x_axis = "v") {
    std::ostringstream os;
    io::write_trace_csv(os, t, header_);
    put(name + ".csv", os.str(), std::string(to_string(t.kind())), t.size());
    if (wants("json")) put(name + ".json", io::trace_to_json(t).dump(1) + "\n", "trace-json", t.size());
    if (wants("svg")) {
      Plot p{x_axis == "t" ? "t (s)" : "V (V)",
             std::string(to_string(t.kind())) + " (" + std::string(t.units()) + ")",
             {{t.label().empty() ? name : t.label(), x_axis == "t" ? t.times() : t.voltages(),
               t.values()}}};
      svg(name, p);
    }
  }

  void table(const std::string& name, const io::Table& t, const std::optional<Plot>& plot = {}) {
    std::ostringstream os;
    io::write_table_csv(os, t, header_);
    put(name + ".csv", os.str(), "table", t.rows.size());
    if (plot && wants("svg")) svg(name, *plot);
  }

  void json_file(const std::string& name, const json& j) {
    put(name + ".json", j.dump(1) + "\n", "report", 0);
  }

  void svg(const std::string& name, const Plot& p) {
    std::ostringstream os;
    io::write_svg(os, cfg_.id + ": " + name, p.x_label, p.y_label, p.series);
    put(name + ".svg", os.str(), "svg", 0);
  }

  RunResult finish(json summary) {
    io::write_file((fs::path(dir_) / "config.resolved.yaml").string(), config::to_yaml(cfg_));
    json m;
    m["format"] = "ferrosim-manifest";
    m["version"] = 1;
    m["experiment"] = cfg_.experiment;
    m["id"] = cfg_.id;
    m["seed"] = cfg_.seed;
    m["config_hash"] = header_.config_hash;
    m["config"] = "config.resolved.yaml";
    m["files"] = entries_;
    m["summary"] = summary;
    io::write_file((fs::path(dir_) / "manifest.json").string(), m.dump(1) + "\n");
    files_.push_back("config.resolved.yaml");
    files_.push_back("manifest.json");
    return {dir_, files_, std::move(summary)};
  }

 private:
  void put(const std::string& file, const std::string& text, const std::string& kind,
           std::size_t rows) {
    io::write_file((fs::path(dir_) / file).string(), text);
    files_.push_back(file);
    json e{{"path", file}, {"kind", kind}};
    if (rows) e["rows"] = rows;
    entries_.push_back(std::move(e));
  }

  const config::ExperimentConfig& cfg_;
  std::string dir_;
  io::TraceHeader header_;
  std::set<std::string> formats_;
  std::vector<std::string> files_;
  json entries_ = json::array();
};

json finite(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

instrument::FeFETDevice device_for(const config::ExperimentConfig& cfg) {
  return instrument::make_device(cfg.ensemble, cfg.stack, cfg.device, cfg.wakeup_cycles, cfg.wakeup);
}

std::string indexed(const std::string& stem, std::size_t i) {
  std::string n = std::to_string(i);
  if (n.size() < 2) n.insert(0, 2 - n.size(), '0');
  return stem + "_" + n;
}

io::Table cycle_table(const analysis::CycleStats& stats) {
  io::Table t{{"branch", "position", "mean_ohm", "sigma_ohm", "sigma_over_ron_pct"}, {}};
  for (const auto& p : stats.positions) {
    t.rows.push_back({static_cast<double>(static_cast<int>(p.branch)),
                      static_cast<double>(p.position), p.mean, p.sigma,
                      100.0 * p.sigma_over_ron});
  }
  return t;
}

json run_potdep(const config::ExperimentConfig& cfg, Writer& w, const instrument::PulseScheme& scheme,
                int n_cycles) {
  auto dev = device_for(cfg);
  const auto trace = instrument::potentiation_depression(dev, scheme, n_cycles);
  w.trace("potdep", trace, "t");
  json s;
  s["pulses"] = trace.size();
  s["r_on_ohm"] = dev.on_resistance();
  const auto vals = trace.values();
  s["r_min_ohm"] = *std::min_element(vals.begin(), vals.end());
  s["r_max_ohm"] = *std::max_element(vals.begin(), vals.end());
  if (n_cycles >= 3) {
    const auto series = analysis::PulseSeries::from_trace(trace);
    const auto stats = analysis::cycle_stats(series, dev.on_resistance());
    w.table("cycle_stats", cycle_table(stats));
    double mean = 0.0;
    for (const auto& p : stats.positions) mean += p.sigma_over_ron;
    s["cycle_sigma_pct"] = 100.0 * mean / static_cast<double>(stats.positions.size());
  }
  return s;
}

instrument::AmplitudeRamp amplitude_ramp(const config::Params& p) {
  instrument::AmplitudeRamp r;
  r.v_pot_max = p.num("v_pot_max");
  r.v_dep_min = p.num("v_dep_min");
  r.step = p.num("step");
  r.width = p.num("width");
  if (p.values().count("n_pot")) {
    r.n_pot = p.integer("n_pot");
    r.n_dep = p.integer("n_dep");
  }
  return r;
}

json run_metrics(const config::ExperimentConfig& cfg, Writer& w) {
  const auto& p = cfg.params;
  std::optional<analysis::PulseSeries> series;
  std::optional<double> r_on;
  if (!p.str("input").empty()) {
    series = analysis::PulseSeries::from_trace(io::read_trace_csv_file(p.str("input")));
  } else {
    auto dev = device_for(cfg);
    const auto trace = instrument::potentiation_depression(dev, amplitude_ramp(p), p.integer("n_cycles"));
    w.trace("potdep", trace, "t");
    series = analysis::PulseSeries::from_trace(trace);
    r_on = dev.on_resistance();
  }

  analysis::MetricsOptions opt;
  opt.window_lo = p.num("window_lo");
  opt.window_hi = p.num("window_hi");
  opt.sf_grid = p.integer("sf_grid");
  opt.energy.v_write = p.num("energy_v");
  opt.energy.i_gate = p.num("energy_i");
  opt.energy.t_write = p.num("energy_t");
  opt.energy.width_um = cfg.stack.width_um;
  opt.energy.length_um = cfg.stack.length_um;
  opt.energy_reference = p.num("energy_reference");
  opt.r_on = r_on;
  const auto report = analysis::compute_metrics(*series, opt);
  w.json_file("metrics", io::metrics_to_json(report));

  const auto code = [](Branch b) { return static_cast<double>(static_cast<int>(b)); };
  io::Table a{{"branch", "position", "r_ds_ohm", "fit_ohm", "in_window"}, {}};
  io::Table b{{"branch", "position", "residual_norm"}, {}};
  io::Table c{{"branch", "position", "gpr_mean_ohm", "gpr_std_ohm"}, {}};
  io::Table d{{"branch", "step", "snr"}, {}};
  io::Table e{{"branch", "step", "delta_r_ohm"}, {}};
  io::Table f{{"r_ds_ohm", "dr_pot_ohm", "dr_dep_ohm", "sf"}, {}};
  Plot pa{"pulse position", "R_DS (Ohm)", {}};
  Plot pc{"pulse position", "R_DS (Ohm)", {}};
  Plot pd{"pulse step", "SNR", {}};
  Plot pe{"pulse step", "Delta R (Ohm)", {}};
  for (const auto* m : {&report.pot, &report.dep}) {
    const auto data = series->branch(m->branch);
    const std::string name = m->branch == Branch::Potentiation ? "potentiation" : "depression";
    for (std::size_t i = 0; i < data.position.size(); ++i) {
      const double x = data.position[i];
      const bool in = x >= m->window_first && x <= m->window_last;
      a.rows.push_back({code(m->branch), x, data.r_ds[i], m->fit(x), in ? 1.0 : 0.0});
    }
    for (std::size_t i = 0; i < m->fit_x.size(); ++i) {
      b.rows.push_back({code(m->branch), m->fit_x[i], m->fit.residuals[i]});
    }
    std::vector<double> steps;
    for (std::size_t i = 0; i < m->positions.size(); ++i) {
      c.rows.push_back({code(m->branch), m->positions[i], m->gpr_mean[i], m->gpr_std[i]});
    }
    for (std::size_t i = 0; i < m->delta_r.size(); ++i) {
      steps.push_back(static_cast<double>(i));
      d.rows.push_back({code(m->branch), static_cast<double>(i), m->snr.values[i]});
      e.rows.push_back({code(m->branch), static_cast<double>(i), m->delta_r[i]});
    }
    pa.series.push_back({name, data.position, data.r_ds});
    pc.series.push_back({name, m->positions, m->gpr_mean});
    pd.series.push_back({name, steps, m->snr.values});
    pe.series.push_back({name, steps, m->delta_r});
  }
  for (std::size_t i = 0; i < report.sf.r_grid.size(); ++i) {
    f.rows.push_back({report.sf.r_grid[i], report.sf.dr_pot[i], report.sf.dr_dep[i], report.sf.sf[i]});
  }
  w.table("panel_a_linear_fit", a, pa);
  w.table("panel_b_residuals", b);
  w.table("panel_c_gpr", c, pc);
  w.table("panel_d_snr", d, pd);
  w.table("panel_e_delta_r", e, pe);
  w.table("panel_f_symmetry", f, Plot{"R_DS (Ohm)", "SF", {{"SF", report.sf.r_grid, report.sf.sf}}});
  if (report.cycles) w.table("cycle_stats", cycle_table(*report.cycles));

  json s;
  s["adj_r2"] = finite(report.adj_r2);
  s["adj_r2_potentiation"] = finite(report.pot.fit.adj_r2);
  s["adj_r2_depression"] = finite(report.dep.fit.adj_r2);
  s["sf_mean"] = finite(report.sf.sf_mean);
  s["sf_center"] = finite(report.sf.sf_center);
  s["cycle_sigma_pct"] = finite(report.cycle_sigma_pct);
  s["gpr_rmse_ohm"] = finite(report.gpr_rmse);
  s["raw_rmse_ohm"] = finite(report.raw_rmse);
  s["energy_per_area_j_um2"] = report.energy_per_area;
  s["energy_matches_reference"] = report.energy_matches_reference;
  return s;
}

json dispatch(const config::ExperimentConfig& cfg, Writer& w) {
  const auto& p = cfg.params;
  const auto& name = cfg.experiment;
  json s = json::object();

  if (name == "pv-loop") {
    auto dev = device_for(cfg);
    const auto t = instrument::pv_loop(dev, p.num("amplitude"), p.num("frequency"),
                                       p.integer("samples_per_period"));
    w.trace("pv_loop", t);
    const auto m = analysis::pv_loop_metrics(t);
    s = {{"pr_plus_uc_cm2", finite(m.pr_plus)},
         {"pr_minus_uc_cm2", finite(m.pr_minus)},
         {"vc_plus_v", finite(m.vc_plus)},
         {"vc_minus_v", finite(m.vc_minus)},
         {"active_fraction", dev.ensemble().active_fraction()}};
  } else if (name == "cv-butterfly") {
    auto dev = device_for(cfg);
    const auto t = instrument::cv_butterfly(dev, p.num("v_range"), p.num("dv"), p.num("sweep_rate"));
    w.trace("cv_butterfly", t);
    const auto c = t.values();
    s["c_max_f"] = *std::max_element(c.begin(), c.end());
    s["c_min_f"] = *std::min_element(c.begin(), c.end());
  } else if (name == "rv-hysteresis") {
    auto dev = device_for(cfg);
    const auto t = instrument::rv_hysteresis(dev, p.num("v_min"), p.num("v_max"),
                                             p.integer("n_steps"), p.num("width"));
    w.trace("rv_hysteresis", t);
    const auto r = t.values();
    const double r_on = dev.on_resistance();
    io::Table norm{{"v_write", "r_ds_over_ron"}, {}};
    for (std::size_t i = 0; i < t.size(); ++i) norm.rows.push_back({t[i].v, r[i] / r_on});
    w.table("rv_normalized", norm);
    const double lo = *std::min_element(r.begin(), r.end());
    const double hi = *std::max_element(r.begin(), r.end());
    s = {{"r_on_ohm", r_on},
         {"r_min_ohm", lo},
         {"r_max_ohm", hi},
         {"on_off_ratio", (hi - lo) / lo},
         {"loop_area_v_ohm", analysis::hysteresis_area(t)}};
  } else if (name == "minor-loops") {
    auto dev = device_for(cfg);
    const auto loops = instrument::minor_loops(dev, p.list("amplitudes"), p.num("step"), p.num("width"));
    bool nested = true;
    json windows = json::array();
    for (std::size_t i = 0; i < loops.size(); ++i) {
      w.trace(indexed("minor_loop", i), loops[i]);
      const auto r = loops[i].values();
      windows.push_back({{"amplitude_v", p.list("amplitudes")[i]},
                         {"r_min_ohm", *std::min_element(r.begin(), r.end())},
                         {"r_max_ohm", *std::max_element(r.begin(), r.end())}});
    }
    for (std::size_t i = 0; i + 1 < loops.size(); ++i) {
      const auto& big = p.list("amplitudes")[i] >= p.list("amplitudes")[i + 1] ? loops[i] : loops[i + 1];
      const auto& small = &big == &loops[i] ? loops[i + 1] : loops[i];
      // Read noise blurs both loops, so allow 6 sigma around R_on.
      const double tol = 6.0 * cfg.device.read_noise_sigma * dev.on_resistance();
      nested = nested && analysis::loop_contains(big, small, tol);
    }
    s = {{"loops", windows}, {"nested", nested}};
  } else if (name == "pund") {
    auto dev = device_for(cfg);
    const auto r = instrument::pund(dev, p.num("amplitude"), p.num("frequency"));
    w.table("pund", {{"p", "u", "n", "d", "total"}, {{r.p, r.u, r.n, r.d, r.total}}});
    s = {{"p", r.p}, {"u", r.u}, {"n", r.n}, {"d", r.d}, {"total_uc_cm2", r.total}};
  } else if (name == "endurance") {
    auto dev = device_for(cfg);
    std::vector<instrument::CycleBlock> blocks;
    for (std::size_t i = 0; i < p.list("block_cycles").size(); ++i) {
      blocks.push_back({p.list("block_cycles")[i], p.list("block_frequency")[i]});
    }
    const auto t = instrument::endurance_run(dev, blocks, p.num("amplitude"), p.list("points"),
                                             p.num("pund_frequency"), cfg.wakeup);
    w.trace("endurance", t, "t");
    const auto v = t.values();
    s = {{"p_total_first", v.front()}, {"p_total_last", v.back()}};
  } else if (name == "retention") {
    auto dev = device_for(cfg);
    instrument::RetentionParams rp;
    rp.n_states = p.integer("n_states");
    rp.duration = p.num("duration");
    rp.interval = p.num("interval");
    rp.reset_v = p.num("reset_v");
    rp.reset_width = p.num("reset_width");
    rp.write_width = p.num("write_width");
    rp.v_write_max = p.num("v_write_max");
    const auto res = instrument::retention_protocol(dev, rp);
    io::Table states{{"state", "amplitude_v", "target_ohm", "mean_ohm"}, {}};
    for (std::size_t k = 0; k < res.traces.size(); ++k) {
      w.trace(indexed("state", k), res.traces[k], "t");
      const auto v = res.traces[k].values();
      double mean = 0.0;
      for (const double x : v) mean += x;
      states.rows.push_back({static_cast<double>(k), res.amplitudes[k], res.targets[k],
                             mean / static_cast<double>(v.size())});
    }
    w.table("states", states);
    s = {{"states", res.traces.size()},
         {"k_sigma", p.num("k_sigma")},
         {"distinguishable", analysis::states_distinguishable(res.traces, p.num("k_sigma"))}};
  } else if (name == "potdep-amplitude") {
    s = run_potdep(cfg, w, amplitude_ramp(p), p.integer("n_cycles"));
  } else if (name == "potdep-width") {
    instrument::WidthRamp r;
    r.v_pot = p.num("v_pot");
    r.v_dep = p.num("v_dep");
    r.w_start = p.num("w_start");
    r.w_end = p.num("w_end");
    r.n_pot = p.integer("n_pot");
    r.n_dep = p.integer("n_dep");
    s = run_potdep(cfg, w, r, p.integer("n_cycles"));
  } else if (name == "xd-curve") {
    const auto nd = electro::log_space(p.num("n_d_min"), p.num("n_d_max"),
                                       static_cast<std::size_t>(p.integer("n_points")));
    const auto curves = electro::xd_vs_nd_curve(p.list("v_gs"), nd, cfg.stack);
    io::Table t{{"n_d", "v_gs", "x_d_nm"}, {}};
    Plot plot{"N_D (cm^-3)", "x_d (nm)", {}};
    for (const auto& c : curves) {
      for (std::size_t i = 0; i < c.n_d_cm3.size(); ++i) t.rows.push_back({c.n_d_cm3[i], c.v_gs, c.x_d_nm[i]});
      std::vector<double> log_nd;
      for (const double x : c.n_d_cm3) log_nd.push_back(std::log10(x));
      plot.series.push_back({"V_GS=" + io::format_double(c.v_gs), log_nd, c.x_d_nm});
    }
    plot.x_label = "log10 N_D (cm^-3)";
    w.table("xd_curve", t, plot);
    json at_nd = json::array();
    for (const double v : p.list("v_gs")) {
      at_nd.push_back({{"v_gs", v}, {"x_d_nm", electro::depletion_width_nm(v, cfg.stack)}});
    }
    s = {{"at_stack_n_d", at_nd}};
  } else if (name == "metrics") {
    s = run_metrics(cfg, w);
  } else {
    throw config::ConfigError({"experiment.name: unknown experiment '" + name + "'"});
  }
  return s;
}

}  // namespace

RunResult run_experiment(const config::ExperimentConfig& cfg, const RunOptions& options) {
  fs::create_directories(options.out_dir);
  Writer w(cfg, options.out_dir);
  auto summary = dispatch(cfg, w);
  auto result = w.finish(summary);
  if (!options.quiet) {
    std::cout << cfg.id << " (" << cfg.experiment << ") -> " << options.out_dir << '\n'
              << summary.dump(2) << '\n';
  }
  return result;
}

std::string resolve_out_dir(const config::ExperimentConfig& cfg, const std::string& cli_out,
                            const std::string& env_root) {
  if (!cli_out.empty()) return cli_out;
  const fs::path dir = cfg.out_dir.empty() ? fs::path(cfg.id) : fs::path(cfg.out_dir);
  if (dir.is_absolute() || env_root.empty()) return dir.string();
  return (fs::path(env_root) / dir).string();
}

std::vector<std::string> figure_names() {
  std::vector<std::string> out;
  for (const auto& c : bundled_configs()) {
    std::string n(c.name);
    n = n.substr(0, n.find('_'));
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  }
  return out;
}

std::vector<BundledConfig> configs_for_figure(const std::string& figure) {
  std::vector<BundledConfig> out;
  for (const auto& c : bundled_configs()) {
    const std::string n(c.name);
    // "fig2" selects fig2a..fig2f, "fig2b" selects fig2b_pristine and fig2b_woken.
    const bool panel = n.size() > figure.size() && n.rfind(figure, 0) == 0 &&
                       (n[figure.size()] == '_' || (n[figure.size()] >= 'a' && n[figure.size()] <= 'z'));
    if (figure == "all" || n == figure || panel) out.push_back(c);
  }
  return out;
}

json run_figures(const std::string& figure, const FiguresOptions& options) {
  const auto selected = configs_for_figure(figure);
  if (selected.empty()) {
    std::string known;
    for (const auto& n : figure_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown figure '" + figure + "' (expected all, " + known + ")");
  }
  json index;
  index["format"] = "ferrosim-figure-index";
  index["version"] = 1;
  index["figures"] = json::array();
  for (const auto& c : selected) {
    std::vector<std::string> overrides;
    if (options.seed) overrides.push_back("device.seed=" + std::to_string(*options.seed));
    auto cfg = config::parse_config(c.text, overrides);
    if (!options.formats.empty()) cfg.formats = options.formats;
    const std::string dir = (fs::path(options.out_root) / c.name).string();
    const auto res = run_experiment(cfg, {dir, options.quiet});
    index["figures"].push_back({{"name", c.name},
                                {"experiment", cfg.experiment},
                                {"directory", c.name},
                                {"manifest", std::string(c.name) + "/manifest.json"},
                                {"summary", res.summary}});
  }
  io::write_file((fs::path(options.out_root) / "index.json").string(), index.dump(1) + "\n");
  return index;
}

}  // namespace ferrosim::runner

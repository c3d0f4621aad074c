#include "ferrosim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ferrosim::io {

namespace {

std::string value_column(TraceKind kind) {
  switch (kind) {
    case TraceKind::Polarization: return "p_uc_cm2";
    case TraceKind::Resistance: return "r_ds_ohm";
    case TraceKind::Capacitance: return "c_f";
  }
  return "value";
}

void write_header(std::ostream& os, const TraceHeader& h) {
  os << "# experiment: " << h.experiment_id << '\n'
     << "# seed: " << h.seed << '\n'
     << "# config_hash: " << h.config_hash << '\n';
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("csv: not a number: '" + std::string(s) + "'");
  }
  return x;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// JSON has no NaN/inf; keep them visible as null.
nlohmann::json num(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

nlohmann::json nums(const std::vector<double>& xs) {
  auto a = nlohmann::json::array();
  for (const double x : xs) a.push_back(num(x));
  return a;
}

nlohmann::json branch_json(const analysis::BranchMetrics& b) {
  nlohmann::json j;
  j["branch"] = b.branch == Branch::Potentiation ? "potentiation" : "depression";
  j["fit"] = {{"slope", num(b.fit.slope)},
              {"intercept", num(b.fit.intercept)},
              {"r2", num(b.fit.r2)},
              {"adj_r2", num(b.fit.adj_r2)},
              {"window_first", b.window_first},
              {"window_last", b.window_last},
              {"residuals", nums(b.fit.residuals)}};
  j["gpr"] = {{"length_scale", b.hyper.length_scale},
              {"signal_variance", b.hyper.signal_variance},
              {"noise_variance", b.hyper.noise_variance},
              {"log_marginal_likelihood", num(b.lml)},
              {"mean", nums(b.gpr_mean)},
              {"std", nums(b.gpr_std)}};
  j["delta_r"] = nums(b.delta_r);
  j["snr"] = {{"values", nums(b.snr.values)},
              {"sigma_res", num(b.snr.sigma_res)},
              {"infinite", b.snr.infinite}};
  j["gpr_rmse"] = num(b.gpr_rmse);
  j["raw_rmse"] = num(b.raw_rmse);
  return j;
}

// Axis labels only need float precision.
std::string tick_label(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<float>(x));
  return ec == std::errc() ? std::string(buf, ptr) : std::string("?");
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return {buf, ptr};
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = kDigits[h & 0xF];
  return s;
}

void write_trace_csv(std::ostream& os, const Trace& trace, const TraceHeader& header) {
  write_header(os, header);
  os << "# kind: " << to_string(trace.kind()) << '\n';
  if (!trace.label().empty()) os << "# label: " << trace.label() << '\n';
  os << "t_s,v_V," << value_column(trace.kind());
  for (const auto& c : trace.extra_columns()) os << ',' << c;
  os << '\n';
  const std::size_t n_extra = trace.extra_columns().size();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& s = trace[i];
    os << format_double(s.t) << ',' << format_double(s.v) << ',' << format_double(s.value);
    for (std::size_t c = 0; c < n_extra; ++c) os << ',' << format_double(trace.extra(i, c));
    os << '\n';
  }
}

Trace read_trace_csv(std::istream& is) {
  std::string line;
  std::string kind_name;
  std::string label;
  std::vector<std::string> columns;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = std::string_view(line).substr(1);
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      auto key = body.substr(0, colon);
      auto val = body.substr(colon + 1);
      key.remove_prefix(std::min(key.find_first_not_of(' '), key.size()));
      val.remove_prefix(std::min(val.find_first_not_of(' '), val.size()));
      if (key == "kind") kind_name = val;
      if (key == "label") label = val;
      continue;
    }
    for (const auto c : split(line, ',')) columns.emplace_back(c);
    break;
  }
  if (columns.size() < 3 || columns[0] != "t_s" || columns[1] != "v_V") {
    throw std::invalid_argument("csv: expected a t_s,v_V,<value>[,...] header row");
  }
  TraceKind kind = TraceKind::Resistance;
  if (!kind_name.empty()) {
    kind = trace_kind_from_string(kind_name);
  } else {
    bool found = false;
    for (const auto k : {TraceKind::Polarization, TraceKind::Resistance, TraceKind::Capacitance}) {
      if (value_column(k) == columns[2]) {
        kind = k;
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("csv: unknown value column '" + columns[2] + "'");
  }
  Trace trace(kind, {columns.begin() + 3, columns.end()});
  trace.set_label(label);
  std::vector<double> extra(columns.size() - 3);
  std::size_t row = 0;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (fields.size() != columns.size()) {
      throw std::invalid_argument("csv: row " + std::to_string(row) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(columns.size()));
    }
    for (std::size_t c = 3; c < fields.size(); ++c) extra[c - 3] = parse_double(fields[c]);
    trace.append(parse_double(fields[0]), parse_double(fields[1]), parse_double(fields[2]), extra);
  }
  return trace;
}

Trace read_trace_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_trace_csv(in);
}

void write_table_csv(std::ostream& os, const Table& table, const TraceHeader& header) {
  write_header(os, header);
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    os << (c ? "," : "") << table.columns[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::invalid_argument("table: ragged row");
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    os << '\n';
  }
}

nlohmann::json trace_to_json(const Trace& trace) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(trace.kind()));
  j["units"] = std::string(trace.units());
  j["label"] = trace.label();
  j["t"] = nums(trace.times());
  j["v"] = nums(trace.voltages());
  j["value"] = nums(trace.values());
  for (const auto& c : trace.extra_columns()) j["columns"][c] = nums(trace.column(c));
  return j;
}

nlohmann::json metrics_to_json(const analysis::MetricsReport& r) {
  nlohmann::json j;
  j["adj_r2"] = num(r.adj_r2);
  j["potentiation"] = branch_json(r.pot);
  j["depression"] = branch_json(r.dep);
  j["sf"] = {{"mean", num(r.sf.sf_mean)},
             {"center", num(r.sf.sf_center)},
             {"r_grid", nums(r.sf.r_grid)},
             {"dr_pot", nums(r.sf.dr_pot)},
             {"dr_dep", nums(r.sf.dr_dep)},
             {"values", nums(r.sf.sf)}};
  j["cycle_sigma_pct"] = num(r.cycle_sigma_pct);
  if (r.cycles) j["r_on"] = r.cycles->r_on;
  j["gpr_rmse"] = num(r.gpr_rmse);
  j["raw_rmse"] = num(r.raw_rmse);
  j["energy"] = {{"per_area_j_um2", num(r.energy_per_area)},
                 {"reference_j_um2", num(r.energy_reference)},
                 {"matches_reference", r.energy_matches_reference}};
  return j;
}

void write_svg(std::ostream& os, std::string_view title, std::string_view x_label,
               std::string_view y_label, const std::vector<SvgSeries>& series) {
  constexpr double kW = 640.0, kH = 420.0, kL = 80.0, kR = 20.0, kT = 40.0, kB = 60.0;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x1 >= x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
  const auto py = [&](double y) { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\">" << title << "</text>\n"
     << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\""
     << kH - kT - kB << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\">" << x_label
     << "</text>\n"
     << "<text x=\"15\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
     << kH / 2 << ")\">" << y_label << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << kH - kB + 16 << "\" text-anchor=\"middle\">"
       << tick_label(xv) << "</text>\n"
       << "<text x=\"" << kL - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
       << tick_label(yv) << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i) {
      if (!std::isfinite(series[s].x[i]) || !std::isfinite(series[s].y[i])) continue;
      os << format_double(px(series[s].x[i])) << ',' << format_double(py(series[s].y[i])) << ' ';
    }
    os << "\"/>\n<text x=\"" << kW - kR - 4 << "\" y=\"" << kT + 16 + 14 * static_cast<double>(s)
       << "\" text-anchor=\"end\" fill=\"" << color << "\">" << series[s].name << "</text>\n";
  }
  os << "</svg>\n";
}

void write_file(const std::string& path, std::string_view text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ferrosim::io

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ferrosim/analysis.hpp"
#include "ferrosim/signal.hpp"

namespace ferrosim::io {

// Shortest round-trip decimal, '.' separator regardless of locale. NaN and
// infinities print as nan, inf, -inf.
std::string format_double(double x);

std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t h);

struct TraceHeader {
  std::string experiment_id;
  std::uint64_t seed = 0;
  std::string config_hash;
};

// '#'-prefixed header lines, then t,v,<value>,<extras...>. The value column is
// named after the trace kind and its unit.
void write_trace_csv(std::ostream& os, const Trace& trace, const TraceHeader& header);
Trace read_trace_csv(std::istream& is);
Trace read_trace_csv_file(const std::string& path);

// Plain numeric table with the same header convention.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
void write_table_csv(std::ostream& os, const Table& table, const TraceHeader& header);

nlohmann::json trace_to_json(const Trace& trace);
nlohmann::json metrics_to_json(const analysis::MetricsReport& report);

struct SvgSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};
// Minimal line chart, no external assets.
void write_svg(std::ostream& os, std::string_view title, std::string_view x_label,
               std::string_view y_label, const std::vector<SvgSeries>& series);

// Writes `text` to `path`, creating parent directories.
void write_file(const std::string& path, std::string_view text);

}  // namespace ferrosim::io

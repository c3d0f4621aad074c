#include "ferrosim/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ferrosim {

Waveform::Waveform(std::vector<Segment> segments, double sample_dt)
    : segments_(std::move(segments)), sample_dt_(sample_dt) {
  if (segments_.empty()) {
    throw std::invalid_argument("waveform: empty segment list");
  }
  if (!(sample_dt_ > 0.0) || !std::isfinite(sample_dt_)) {
    throw std::invalid_argument("waveform: sample_dt must be positive");
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
      throw std::invalid_argument("waveform: segment durations must be positive");
    }
    if (!std::isfinite(s.v_start) || !std::isfinite(s.v_end)) {
      throw std::invalid_argument("waveform: non-finite voltage");
    }
    if (i > 0 && s.v_start != segments_[i - 1].v_end) {
      throw std::invalid_argument("waveform: segments must join continuously");
    }
  }
}

Waveform Waveform::triangle_loop(double amplitude, double frequency,
                                 int samples_per_period) {
  if (!(frequency > 0.0)) throw std::invalid_argument("waveform: frequency must be positive");
  if (samples_per_period < 4) {
    throw std::invalid_argument("waveform: need at least 4 samples per period");
  }
  const double period = 1.0 / frequency;
  const double dt = period / samples_per_period;
  return Waveform({{period / 4, 0.0, amplitude},
                   {period / 2, amplitude, -amplitude},
                   {period / 2, -amplitude, amplitude},
                   {period / 4, amplitude, 0.0}},
                  dt);
}

double Waveform::duration() const {
  double total = 0.0;
  for (const auto& s : segments_) total += s.duration;
  return total;
}

std::vector<TimedVoltage> Waveform::sample() const {
  std::vector<TimedVoltage> out;
  out.push_back({0.0, segments_.front().v_start});
  double t0 = 0.0;
  for (const auto& s : segments_) {
    const auto steps =
        std::max<long>(1, static_cast<long>(std::ceil(s.duration / sample_dt_ - 1e-9)));
    for (long k = 1; k <= steps; ++k) {
      const double frac = static_cast<double>(k) / static_cast<double>(steps);
      out.push_back({t0 + frac * s.duration, s.v_start + frac * (s.v_end - s.v_start)});
    }
    t0 += s.duration;
  }
  return out;
}

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::Polarization: return "polarization";
    case TraceKind::Resistance: return "resistance";
    case TraceKind::Capacitance: return "capacitance";
  }
  return "unknown";
}

std::string_view unit_of(TraceKind kind) {
  switch (kind) {
    case TraceKind::Polarization: return "uC/cm2";
    case TraceKind::Resistance: return "Ohm";
    case TraceKind::Capacitance: return "F";
  }
  return "";
}

TraceKind trace_kind_from_string(std::string_view name) {
  if (name == "polarization") return TraceKind::Polarization;
  if (name == "resistance") return TraceKind::Resistance;
  if (name == "capacitance") return TraceKind::Capacitance;
  throw std::invalid_argument("unknown trace kind: " + std::string(name));
}

Trace::Trace(TraceKind kind, std::vector<std::string> extra_columns)
    : kind_(kind), extra_names_(std::move(extra_columns)) {}

void Trace::append(double t, double v, double value, std::span<const double> extra) {
  if (extra.size() != extra_names_.size()) {
    throw std::invalid_argument("trace: extra column count mismatch");
  }
  if (!samples_.empty() && !(t > samples_.back().t)) {
    throw std::invalid_argument("trace: time must be strictly increasing");
  }
  samples_.push_back({t, v, value});
  extra_.emplace_back(extra.begin(), extra.end());
}

bool Trace::has_column(std::string_view name) const {
  return std::find(extra_names_.begin(), extra_names_.end(), name) != extra_names_.end();
}

std::vector<double> Trace::column(std::string_view name) const {
  if (name == "t") return times();
  if (name == "v") return voltages();
  if (name == "value") return values();
  const auto it = std::find(extra_names_.begin(), extra_names_.end(), name);
  if (it == extra_names_.end()) {
    throw std::invalid_argument("trace: no column named " + std::string(name));
  }
  const auto col = static_cast<std::size_t>(it - extra_names_.begin());
  std::vector<double> out;
  out.reserve(extra_.size());
  for (const auto& row : extra_) out.push_back(row[col]);
  return out;
}

std::vector<double> Trace::times() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.t);
  return out;
}

std::vector<double> Trace::voltages() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.v);
  return out;
}

std::vector<double> Trace::values() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.value);
  return out;
}

bool operator==(const Trace& a, const Trace& b) {
  if (a.kind_ != b.kind_ || a.extra_names_ != b.extra_names_ || a.extra_ != b.extra_ ||
      a.samples_.size() != b.samples_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.samples_.size(); ++i) {
    const auto& x = a.samples_[i];
    const auto& y = b.samples_[i];
    if (x.t != y.t || x.v != y.v || x.value != y.value) return false;
  }
  return true;
}

}  // namespace ferrosim

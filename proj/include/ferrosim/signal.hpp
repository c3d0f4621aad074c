#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ferrosim {

// Piecewise-linear gate program.
struct Segment {
  double duration;  // s
  double v_start;   // V
  double v_end;     // V
};

struct TimedVoltage {
  double t;
  double v;
};

class Waveform {
 public:
  // Segments must have positive duration and join continuously
  // (v_start of each segment equals v_end of the previous one).
  Waveform(std::vector<Segment> segments, double sample_dt);

  // 0 -> +A -> -A -> +A -> 0, one full loop plus the preconditioning quarter.
  static Waveform triangle_loop(double amplitude, double frequency,
                                int samples_per_period);

  const std::vector<Segment>& segments() const { return segments_; }
  double sample_dt() const { return sample_dt_; }
  double duration() const;

  // Samples every segment on a uniform sub-grid no coarser than sample_dt.
  // Segment end points are always included so no voltage extremum is lost.
  std::vector<TimedVoltage> sample() const;

 private:
  std::vector<Segment> segments_;
  double sample_dt_;
};

// Synaptic update direction, tagged by write-pulse polarity.
enum class Branch : int { Potentiation = 1, Depression = -1 };

enum class TraceKind { Polarization, Resistance, Capacitance };

std::string_view to_string(TraceKind kind);
std::string_view unit_of(TraceKind kind);
TraceKind trace_kind_from_string(std::string_view name);

struct Sample {
  double t;
  double v;
  double value;
};

// Ordered record of a measurement. Optional named extra columns carry
// per-sample tags such as pulse index or cycle number.
class Trace {
 public:
  explicit Trace(TraceKind kind, std::vector<std::string> extra_columns = {});

  TraceKind kind() const { return kind_; }
  std::string_view units() const { return unit_of(kind_); }

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  // Throws std::invalid_argument unless t exceeds the previous sample time
  // and `extra` matches the declared extra columns.
  void append(double t, double v, double value, std::span<const double> extra = {});

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const std::vector<Sample>& samples() const { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

  const std::vector<std::string>& extra_columns() const { return extra_names_; }
  bool has_column(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
  double extra(std::size_t row, std::size_t col) const { return extra_[row][col]; }

  std::vector<double> times() const;
  std::vector<double> voltages() const;
  std::vector<double> values() const;

  friend bool operator==(const Trace& a, const Trace& b);

 private:
  TraceKind kind_;
  std::string label_;
  std::vector<std::string> extra_names_;
  std::vector<Sample> samples_;
  std::vector<std::vector<double>> extra_;
};

}  // namespace ferrosim

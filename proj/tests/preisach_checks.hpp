#pragma once

// Randomized checks of the classical Preisach properties, shared by the unit
// tests and the acceptance binary. Each check runs `cases` generated cases
// from a fixed seed and reports how many failed.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ferrosim/domains.hpp"

namespace preisach_checks {

using namespace ferrosim;
using namespace ferrosim::domains;

struct Outcome {
  int cases = 0;
  int failures = 0;
  std::string first;  // description of the first failing case

  void fail(int c, const std::string& what) {
    if (failures++ == 0) first = "case " + std::to_string(c) + ": " + what;
  }
};

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

  DomainEnsemble ensemble(int max_n) {
    const int n = integer(1, max_n);
    std::vector<Hysteron> hs;
    bool any_active = false;
    for (int i = 0; i < n; ++i) {
      const double down = uniform(-3.0, 1.0);
      const double up = down + uniform(0.01, 3.0);
      const bool active = coin(0.8);
      any_active = any_active || active;
      hs.emplace_back(up, down, uniform(0.0, 1.0) + (i == 0 ? 0.1 : 0.0), coin() ? 1 : -1, active);
    }
    if (!any_active) {
      const auto& h = hs.front();
      hs.front() = Hysteron(h.v_up(), h.v_down(), h.weight(), h.state(), true);
    }
    return DomainEnsemble(std::move(hs), uniform(1.0, 30.0));
  }

  std::vector<double> voltages(int n, double amp = 4.0) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = uniform(-amp, amp);
    return v;
  }

  Waveform waveform(int n_segments) {
    std::vector<Segment> segs;
    double v = 0.0;
    for (int i = 0; i < n_segments; ++i) {
      const double next = uniform(-4.0, 4.0);
      segs.push_back({uniform(0.1, 1.0), v, next});
      v = next;
    }
    return Waveform(segs, 0.05);
  }
};

// Sampled ramp from a to b including both ends.
inline std::vector<double> ramp(double a, double b, int n = 25) {
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) out.push_back(a + (b - a) * i / n);
  return out;
}

inline std::vector<double> apply_all(DomainEnsemble& e, const std::vector<double>& vs) {
  std::vector<double> p;
  for (const double v : vs) {
    e.apply_voltage(v);
    p.push_back(e.polarization());
  }
  return p;
}

inline Outcome boundedness(int cases, std::uint64_t seed = 101) {
  Gen g(seed);
  Outcome out{cases, 0, {}};
  for (int c = 0; c < cases; ++c) {
    auto e = g.ensemble(50);
    for (const double v : g.voltages(200, 6.0)) {
      e.apply_voltage(v);
      if (std::abs(e.polarization()) > e.p_sat()) {
        out.fail(c, "|P| exceeds p_sat");
        break;
      }
    }
  }
  return out;
}

inline Outcome wiping_out(int cases, std::uint64_t seed = 202) {
  Gen g(seed);
  Outcome out{cases, 0, {}};
  for (int c = 0; c < cases; ++c) {
    const auto base = g.ensemble(50);
    const double sign = g.coin() ? 1.0 : -1.0;
    // History ends on a trough m; then +a, back to -b >= m, then +c >= a.
    auto history = g.voltages(10);
    const double m = -g.uniform(0.5, 4.0);
    history.push_back(m);
    const double a = g.uniform(-0.5, 3.5);
    const double b_level = g.uniform(m, std::min(a, 0.0));
    const double cpk = g.uniform(a, 4.5);
    const auto tail = g.voltages(30);

    auto with = base;
    auto without = base;
    for (const double v : history) {
      with.apply_voltage(sign * v);
      without.apply_voltage(sign * v);
    }
    with.apply_voltage(sign * a);
    with.apply_voltage(sign * b_level);
    with.apply_voltage(sign * cpk);
    without.apply_voltage(sign * cpk);
    std::vector<double> signed_tail;
    for (const double v : tail) signed_tail.push_back(sign * v);
    if (with.states() != without.states() ||
        apply_all(with, signed_tail) != apply_all(without, signed_tail)) {
      out.fail(c, "dominated extremum left a trace");
    }
  }
  return out;
}

inline Outcome return_point_memory(int cases, std::uint64_t seed = 303) {
  Gen g(seed);
  Outcome out{cases, 0, {}};
  for (int c = 0; c < cases; ++c) {
    auto e = g.ensemble(50);
    const double sign = g.coin() ? 1.0 : -1.0;
    for (const double v : g.voltages(10)) e.apply_voltage(sign * v);
    const double big = g.uniform(0.0, 4.0);
    const double start = -g.uniform(0.0, 4.0);
    e.apply_voltage(sign * big);
    e.apply_voltage(sign * start);
    const auto states0 = e.states();
    const double p0 = e.polarization();

    const double a = g.uniform(start, big);
    for (const double v : ramp(start, a)) e.apply_voltage(sign * v);
    for (const double v : ramp(a, start)) e.apply_voltage(sign * v);
    if (e.polarization() != p0 || e.states() != states0) out.fail(c, "minor loop did not close");
  }
  return out;
}

inline Outcome saturation_idempotence(int cases, std::uint64_t seed = 404) {
  Gen g(seed);
  Outcome out{cases, 0, {}};
  for (int c = 0; c < cases; ++c) {
    auto e = g.ensemble(50);
    for (const double v : g.voltages(5)) e.apply_voltage(v);
    double max_up = -1e9, min_down = 1e9;
    for (const auto& h : e.hysterons()) {
      max_up = std::max(max_up, h.v_up());
      min_down = std::min(min_down, h.v_down());
    }
    const double v = g.coin() ? max_up + g.uniform(0.0, 1.0) : min_down - g.uniform(0.0, 1.0);
    auto once = e;
    once.apply_voltage(v);
    auto twice = once;
    if (twice.apply_voltage(v) != 0u || !(twice == once)) out.fail(c, "second saturating pulse changed state");
  }
  return out;
}

// Independent relay-by-relay evaluation of small ensembles.
inline Outcome brute_force_oracle(int cases, std::uint64_t seed = 505) {
  Gen g(seed);
  Outcome out{cases, 0, {}};
  for (int c = 0; c < cases; ++c) {
    auto e = g.ensemble(10);
    const auto wf = g.waveform(g.integer(1, 6));

    struct Plain {
      double up, down, w;
      int s;
      bool active;
    };
    std::vector<Plain> oracle;
    double total = 0.0;
    for (const auto& h : e.hysterons()) {
      oracle.push_back({h.v_up(), h.v_down(), h.weight(), h.state(), h.active()});
      total += h.weight();
    }
    const double p_sat = e.p_sat();
    const auto trace = run_waveform(e, wf);
    const auto samples = wf.sample();
    if (trace.size() != samples.size()) {
      out.fail(c, "trace length differs from waveform samples");
      continue;
    }
    bool ok = true;
    for (std::size_t i = 0; i < samples.size() && ok; ++i) {
      double sum = 0.0;
      for (auto& h : oracle) {
        if (h.active && samples[i].v >= h.up) h.s = 1;
        if (h.active && samples[i].v <= h.down) h.s = -1;
        sum += h.active ? h.w * h.s : 0.0;
      }
      if (std::abs(trace[i].value - p_sat * sum / total) > 1e-12 * p_sat) {
        out.fail(c, "sample " + std::to_string(i) + " disagrees with the oracle");
        ok = false;
      }
    }
    if (!ok) continue;
    std::vector<int> final_states;
    for (const auto& h : oracle) final_states.push_back(h.s);
    if (e.states() != final_states) out.fail(c, "final states disagree with the oracle");
  }
  return out;
}

inline Outcome monotone_on_rising_ramp(int cases, std::uint64_t seed = 606) {
  Gen g(seed);
  Outcome out{cases, 0, {}};
  for (int c = 0; c < cases; ++c) {
    auto e = g.ensemble(50);
    for (const double v : g.voltages(5)) e.apply_voltage(v);
    const double lo = g.uniform(-4.0, 0.0);
    double prev = -1e300;
    for (const double v : ramp(lo, lo + g.uniform(0.0, 8.0), 60)) {
      e.apply_voltage(v);
      if (e.polarization() < prev) {
        out.fail(c, "P fell on a rising ramp");
        break;
      }
      prev = e.polarization();
    }
  }
  return out;
}

}  // namespace preisach_checks

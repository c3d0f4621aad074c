#include "ferrosim/domains.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ferrosim::domains {

Hysteron::Hysteron(double v_up, double v_down, double weight, int state, bool active)
    : v_up_(v_up), v_down_(v_down), weight_(weight), state_(state), active_(active) {
  if (!(v_up > v_down)) throw std::invalid_argument("hysteron: v_up must exceed v_down");
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("hysteron: weight must be finite and non-negative");
  }
  if (state != 1 && state != -1) throw std::invalid_argument("hysteron: state must be +1 or -1");
}

std::vector<std::string> EnsembleConfig::violations() const {
  std::vector<std::string> out;
  if (n_hysterons < 1) out.emplace_back("EnsembleConfig.n_hysterons must be >= 1");
  if (!(sigma_c >= 0.0) || !std::isfinite(sigma_c)) {
    out.emplace_back("EnsembleConfig.sigma_c must be >= 0");
  }
  if (!(mean_v_up > mean_v_down)) {
    out.emplace_back("EnsembleConfig ordering: mean_v_up must exceed mean_v_down");
  }
  if (!(p_sat >= 0.0) || !std::isfinite(p_sat)) {
    out.emplace_back("EnsembleConfig.p_sat must be >= 0");
  }
  return out;
}

DomainEnsemble::DomainEnsemble(std::vector<Hysteron> hysterons, double p_sat,
                               std::uint64_t seed, std::vector<double> activation_keys)
    : hysterons_(std::move(hysterons)),
      activation_keys_(std::move(activation_keys)),
      p_sat_(p_sat),
      seed_(seed) {
  if (hysterons_.empty()) throw std::invalid_argument("ensemble: no hysterons");
  if (!(p_sat_ >= 0.0)) throw std::invalid_argument("ensemble: p_sat must be >= 0");
  if (activation_keys_.empty()) activation_keys_.assign(hysterons_.size(), 0.0);
  if (activation_keys_.size() != hysterons_.size()) {
    throw std::invalid_argument("ensemble: activation key count mismatch");
  }
  for (const auto& h : hysterons_) total_weight_ += h.weight();
  // Derive the fraction from the flags so explicit constructions stay consistent.
  std::size_t n_active = 0;
  for (const auto& h : hysterons_) n_active += h.active() ? 1 : 0;
  active_fraction_ = static_cast<double>(n_active) / static_cast<double>(hysterons_.size());
}

std::size_t DomainEnsemble::apply_voltage(double v) {
  std::size_t flipped = 0;
  for (auto& h : hysterons_) flipped += h.apply(v) ? 1 : 0;
  return flipped;
}

bool DomainEnsemble::has_active() const {
  for (const auto& h : hysterons_) {
    if (h.active()) return true;
  }
  return false;
}

double DomainEnsemble::polarization() const {
  if (!has_active()) throw std::domain_error("no active domains");
  if (!(total_weight_ > 0.0)) throw std::domain_error("ensemble has zero total weight");
  double sum = 0.0;
  for (const auto& h : hysterons_) {
    if (h.active()) sum += h.weight() * h.state();
  }
  const double p = p_sat_ * sum / total_weight_;
  return std::clamp(p, -p_sat_, p_sat_);
}

void DomainEnsemble::set_active_fraction(double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("ensemble: active fraction must lie in [0, 1]");
  }
  active_fraction_ = fraction;
  for (std::size_t i = 0; i < hysterons_.size(); ++i) {
    hysterons_[i].set_active(activation_keys_[i] < fraction);
  }
}

std::vector<int> DomainEnsemble::states() const {
  std::vector<int> out;
  out.reserve(hysterons_.size());
  for (const auto& h : hysterons_) out.push_back(h.state());
  return out;
}

DomainEnsemble build_ensemble(const EnsembleConfig& config) {
  if (const auto bad = config.violations(); !bad.empty()) {
    std::string msg = bad.front();
    for (std::size_t i = 1; i < bad.size(); ++i) msg += "; " + bad[i];
    throw std::invalid_argument(msg);
  }
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> up(config.mean_v_up, config.sigma_c);
  std::normal_distribution<double> down(config.mean_v_down, config.sigma_c);
  std::uniform_real_distribution<double> key(0.0, 1.0);

  const auto n = static_cast<std::size_t>(config.n_hysterons);
  const double weight = 1.0 / static_cast<double>(n);
  std::vector<Hysteron> hysterons;
  std::vector<double> keys;
  hysterons.reserve(n);
  keys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double a = up(rng);
    double b = down(rng);
    while (!(a > b)) {
      a = up(rng);
      b = down(rng);
    }
    hysterons.emplace_back(a, b, weight, (i % 2 == 0) ? 1 : -1, true);
    keys.push_back(key(rng));
  }
  return DomainEnsemble(std::move(hysterons), config.p_sat, config.seed, std::move(keys));
}

Trace run_waveform(DomainEnsemble& ensemble, const Waveform& waveform) {
  Trace trace(TraceKind::Polarization);
  for (const auto& s : waveform.sample()) {
    ensemble.apply_voltage(s.v);
    trace.append(s.t, s.v, ensemble.polarization());
  }
  return trace;
}

double wakeup_fraction(double n_cycles, const WakeupParams& params) {
  if (!(n_cycles >= 0.0)) throw std::invalid_argument("wake-up: cycle count must be >= 0");
  if (!(params.n_w > 0.0)) throw std::invalid_argument("wake-up: n_w must be positive");
  if (!(params.a_min >= 0.0 && params.a_min <= 1.0)) {
    throw std::invalid_argument("wake-up: a_min must lie in [0, 1]");
  }
  return params.a_min + (1.0 - params.a_min) * -std::expm1(-n_cycles / params.n_w);
}

double set_wakeup(DomainEnsemble& ensemble, double n_cycles, const WakeupParams& params) {
  const double fraction = wakeup_fraction(n_cycles, params);
  ensemble.set_active_fraction(fraction);
  return fraction;
}

namespace {

using nlohmann::json;

constexpr int kSnapshotVersion = 1;

}  // namespace

std::string to_snapshot(const DomainEnsemble& ensemble) {
  json j;
  j["format"] = "ferrosim-ensemble";
  j["version"] = kSnapshotVersion;
  j["seed"] = ensemble.seed();
  j["p_sat"] = ensemble.p_sat();
  j["active_fraction"] = ensemble.active_fraction();
  json hs = json::array();
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const auto& h = ensemble.hysterons()[i];
    hs.push_back({h.v_up(), h.v_down(), h.weight(), h.state(), h.active(),
                  ensemble.activation_keys()[i]});
  }
  j["hysteron_fields"] = {"v_up", "v_down", "weight", "state", "active", "activation_key"};
  j["hysterons"] = std::move(hs);
  return j.dump(1);
}

DomainEnsemble from_snapshot(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("format", "") != "ferrosim-ensemble") {
    throw std::invalid_argument("snapshot: not a ferrosim ensemble file");
  }
  if (j.at("version").get<int>() != kSnapshotVersion) {
    throw std::invalid_argument("snapshot: unsupported version");
  }
  std::vector<Hysteron> hysterons;
  std::vector<double> keys;
  for (const auto& row : j.at("hysterons")) {
    hysterons.emplace_back(row.at(0).get<double>(), row.at(1).get<double>(),
                           row.at(2).get<double>(), row.at(3).get<int>(), row.at(4).get<bool>());
    keys.push_back(row.at(5).get<double>());
  }
  DomainEnsemble ensemble(std::move(hysterons), j.at("p_sat").get<double>(),
                          j.at("seed").get<std::uint64_t>(), std::move(keys));
  // Restore the stored fraction without touching the per-hysteron flags.
  const double fraction = j.at("active_fraction").get<double>();
  DomainEnsemble restored = ensemble;
  restored.set_active_fraction(fraction);
  if (restored.states() != ensemble.states()) {
    throw std::invalid_argument("snapshot: inconsistent state vector");
  }
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (restored.hysterons()[i].active() != ensemble.hysterons()[i].active()) {
      throw std::invalid_argument("snapshot: active flags disagree with activation keys");
    }
  }
  return restored;
}

void save_snapshot(const DomainEnsemble& ensemble, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("snapshot: cannot open " + path.string());
  out << to_snapshot(ensemble) << '\n';
}

DomainEnsemble load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_snapshot(buf.str());
}

}  // namespace ferrosim::domains

// Copyright 2026 The polsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "polsim/harness.h"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace polsim {

namespace {

constexpr double kSecondsPer10h = 36000.0;
constexpr double kClassicalLimit = 2.0 / 3.0;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <typename T>
T parse_field(std::string_view text, std::string_view what) {
  T out{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("csv: bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

double expected_events(const DeviceConfig& cfg) { return cfg.rep_rate_hz * cfg.integration_time_s; }

struct Fringe {
  double peak = 0.0;
  double dip = 0.0;
  double visibility() const { return peak + dip > 0 ? (peak - dip) / (peak + dip) : 0.0; }
};

// Which photon-count pipeline a fringe scan uses and which delay it moves.
struct FringeSetup {
  int n;
  double DeviceConfig::*delay;
};

constexpr FringeSetup kFourPhotonDelay1{4, &DeviceConfig::delay1_um};
constexpr FringeSetup kThreePhotonDelay2{3, &DeviceConfig::delay2_um};
constexpr FringeSetup kFivePhotonDelay1{5, &DeviceConfig::delay1_um};

OutcomeTable plus_table(const FringeSetup& setup, const DeviceConfig& cfg, double delay_um) {
  DeviceConfig c = cfg;
  c.*setup.delay = delay_um;
  const auto modes = ghz_outputs(setup.n);
  const std::vector<AnalysisBasis> bases(modes.size(), AnalysisBasis::PM);
  return coincidence_table(ghz_network_state(setup.n, c), modes, bases, c.detector);
}

// Outcome 0 is all '+', outcome 1 flips the last mode.
Fringe fringe_at(const FringeSetup& setup, const DeviceConfig& cfg, double delay_um) {
  OutcomeTable t = plus_table(setup, cfg, delay_um);
  return {t.probability[0], t.probability[1]};
}

RunReport fringe_scan(std::string name, const FringeSetup& setup, const Scan& scan,
                      const DeviceConfig& cfg) {
  cfg.validate();
  scan.validate();
  const auto positions = scan.positions();
  RunReport r{std::move(name), cfg, {}, {}, {}, {}};
  r.scan = parallel_map(positions.size(), [&](std::size_t i) {
    OutcomeTable t = plus_table(setup, cfg, positions[i]);
    OutcomeTable sampled =
        sample_counts(t, {expected_events(cfg), derive_seed(cfg.seed, i)});
    return ScanPoint{positions[i], t.probability[0], t.probability[1], (*sampled.counts)[0],
                     (*sampled.counts)[1]};
  });

  const double lc_um = cfg.filter().coherence_length_m() * 1e6;
  const Fringe zero = fringe_at(setup, cfg, 0.0);
  const Fringe far = fringe_at(setup, cfg, 5.0 * lc_um);
  // Nearest scan point to zero delay, from sampled counts.
  const auto nearest = std::min_element(r.scan.begin(), r.scan.end(), [](auto& a, auto& b) {
    return std::abs(a.delay_um) < std::abs(b.delay_um);
  });
  const double v_counts = nearest->count_peak + nearest->count_dip > 0
                              ? visibility(static_cast<double>(nearest->count_peak),
                                           static_cast<double>(nearest->count_dip))
                              : 0.0;
  r.stats = {
      {"visibility_zero_delay", zero.visibility()},
      {"visibility_5lc", far.visibility()},
      {"visibility_counts_nearest_zero", v_counts},
      {"nearest_zero_delay_um", nearest->delay_um},
      {"coherence_length_um", lc_um},
      {"expected_peak_count_zero_delay", expected_events(cfg) * zero.peak},
      {"expected_dip_count_zero_delay", expected_events(cfg) * zero.dip},
  };
  return r;
}

TeleportCell make_cell(std::string name, int destination, const PolState& input,
                       const Teleported& t, double samples, std::uint64_t seed) {
  TeleportCell cell{std::move(name), destination, t.fidelity, t.fidelity, 0.0, t.chain_prob,
                    t.fidelity > kClassicalLimit};
  const auto n = static_cast<std::int64_t>(std::llround(samples));
  if (n <= 0) return cell;
  const Eigen::Vector3d s = t.output.bloch_vector();
  const Eigen::Vector3d target = input.bloch_vector();
  // One analyzer setting per Bloch axis, n trials each, binomial over its two outcomes.
  double f = 0.5, var = 0.0;
  for (int k = 0; k < 3; ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    const double p0 = std::clamp((1.0 + s[k]) / 2.0, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> dist(n, p0);
    const double est = 2.0 * static_cast<double>(dist(rng)) / static_cast<double>(n) - 1.0;
    f += 0.5 * target[k] * est;
    var += target[k] * target[k] * (1.0 - est * est) / static_cast<double>(n);
  }
  cell.fidelity_mc = f;
  cell.error = 0.5 * std::sqrt(var);
  return cell;
}

nlohmann::ordered_json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Rates rate_model(const DeviceConfig& cfg) {
  cfg.validate();
  const DeviceConfig ideal = DeviceConfig::ideal();
  const double p3 = build_ghz(3, ideal).prob;
  const GhzResult ghz5 = build_ghz(5, ideal);
  const auto modes = ghz_outputs(5);
  const std::vector<AnalysisBasis> pm(5, AnalysisBasis::PM);
  const OutcomeTable t = outcome_distribution(ghz5.state, modes, pm);
  const double max_share = *std::max_element(t.probability.begin(), t.probability.end());

  const double rep = cfg.rep_rate_hz, p = cfg.pair_probability, mu = cfg.mean_photon_number;
  const double eta = cfg.detector.efficiency;
  Rates r;
  r.twofold_hz = rep * p * eta * eta;
  r.threefold_hz = rep * p * mu * std::pow(eta, 3) * p3;
  r.fivefold_hz = rep * p * p * mu * std::pow(eta, 5) * ghz5.prob;
  r.fivefold_max_per_10h = r.fivefold_hz * max_share * kSecondsPer10h;
  return r;
}

void Scan::validate() const {
  if (!std::isfinite(min_um) || !std::isfinite(max_um) || min_um > max_um) {
    throw std::invalid_argument("scan: need finite min_um <= max_um");
  }
  if (points < 1 || (points == 1 && min_um != max_um)) {
    throw std::invalid_argument("scan: need at least two points for a nonempty range");
  }
}

std::vector<double> Scan::positions() const {
  validate();
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) {
    out[i] = points == 1 ? min_um : min_um + (max_um - min_um) * i / (points - 1);
  }
  return out;
}

double RunReport::stat(std::string_view key) const {
  for (const auto& [k, v] : stats) {
    if (k == key) return v;
  }
  throw std::out_of_range("no statistic '" + std::string(key) + "'");
}

bool RunReport::has_stat(std::string_view key) const {
  return std::any_of(stats.begin(), stats.end(), [&](auto& kv) { return kv.first == key; });
}

PolState parse_pol_state(std::string_view name) {
  if (name == "H") return PolState::H();
  if (name == "V") return PolState::V();
  if (name == "+") return PolState::plus();
  if (name == "-") return PolState::minus();
  if (name == "R") return PolState::R();
  if (name == "L") return PolState::L();
  throw std::invalid_argument("unknown polarization state '" + std::string(name) +
                              "' (expected H, V, +, -, R or L)");
}

RunReport run_ghz(int n, AnalysisBasis basis, const DeviceConfig& cfg) {
  cfg.validate();
  const auto modes = ghz_outputs(n);
  const std::vector<AnalysisBasis> bases(modes.size(), basis);
  OutcomeTable t = coincidence_table(ghz_network_state(n, cfg), modes, bases, cfg.detector);
  t = sample_counts(t, {expected_events(cfg), derive_seed(cfg.seed, 0)});
  RunReport r{"ghz" + std::to_string(n), cfg, {}, {}, {}, {}};
  r.stats = {
      {"post_selection_probability", build_ghz(n, cfg).prob},
      {"coincidence_probability", t.total()},
  };
  r.tables.push_back(std::move(t));
  return r;
}

RunReport run_teleport(std::string_view input, int destination, std::array<Sign, 2> outcomes,
                       const DeviceConfig& cfg) {
  cfg.validate();
  const PolState in = parse_pol_state(input);
  const Teleported t = open_destination_teleport(in, Destination::at(destination), cfg, outcomes);
  RunReport r{"teleport", cfg, {}, {}, {}, {}};
  r.cells.push_back(make_cell(std::string(input), destination, in, t, cfg.samples_per_setting,
                              derive_seed(cfg.seed, 0)));
  r.stats = {{"fidelity", t.fidelity},
             {"fidelity_mc", r.cells[0].fidelity_mc},
             {"fidelity_error", r.cells[0].error},
             {"chain_probability", t.chain_prob}};
  return r;
}

RunReport run_fig3(char which, const Scan& scan, const DeviceConfig& cfg) {
  if (which == 'a') return fringe_scan("fig3a", kFourPhotonDelay1, scan, cfg);
  if (which == 'b') return fringe_scan("fig3b", kThreePhotonDelay2, scan, cfg);
  throw std::invalid_argument("fig3: expected 'a' or 'b'");
}

RunReport run_fig4(char which, const Scan& scan, const DeviceConfig& cfg) {
  if (which == 'b') {
    RunReport r = fringe_scan("fig4b", kFivePhotonDelay1, scan, cfg);
    const double v = r.stat("visibility_zero_delay");
    r.stats.emplace_back("critical_visibility", critical_visibility(5));
    r.stats.emplace_back("violates_local_realism", violates_local_realism(v, 5) ? 1.0 : 0.0);
    return r;
  }
  if (which != 'a') throw std::invalid_argument("fig4: expected 'a' or 'b'");
  cfg.validate();
  const auto modes = ghz_outputs(5);
  const std::vector<AnalysisBasis> hv(5, AnalysisBasis::HV);
  const OutcomeTable exact = coincidence_table(ghz_network_state(5, cfg), modes, hv, cfg.detector);
  OutcomeTable sampled = sample_counts(exact, {expected_events(cfg), derive_seed(cfg.seed, 0)});
  const std::set<std::string> desired{"HHHHH", "VVVVV"};
  RunReport r{"fig4a", cfg, {}, {}, {}, {}};
  r.stats = {
      {"snr", snr(exact, desired)},
      {"snr_counts", snr(sampled, desired)},
      {"snr_min_max_counts", snr_min_max(sampled, desired)},
      {"coincidence_probability", exact.total()},
  };
  r.tables.push_back(std::move(sampled));
  return r;
}

RunReport run_table1(const DeviceConfig& cfg) {
  cfg.validate();
  const std::array<std::string, 4> inputs{"+", "-", "R", "L"};
  const std::array<int, 2> destinations{4, 5};
  RunReport r{"table1", cfg, {}, {}, {}, {}};
  r.cells = parallel_map(inputs.size() * destinations.size(), [&](std::size_t i) {
    const std::string& name = inputs[i / 2];
    const int dest = destinations[i % 2];
    const PolState in = parse_pol_state(name);
    const Teleported t = open_destination_teleport(in, Destination::at(dest), cfg);
    return make_cell(name, dest, in, t, cfg.samples_per_setting, derive_seed(cfg.seed, i));
  });
  double lo = 1.0, sum = 0.0;
  bool all_above = true;
  for (const auto& c : r.cells) {
    lo = std::min(lo, c.fidelity);
    sum += c.fidelity;
    all_above = all_above && c.above_classical;
  }
  r.stats = {{"min_fidelity", lo},
             {"mean_fidelity", sum / static_cast<double>(r.cells.size())},
             {"classical_limit", kClassicalLimit},
             {"all_above_classical", all_above ? 1.0 : 0.0}};
  return r;
}

RunReport run_rates(const DeviceConfig& cfg) {
  const Rates rates = rate_model(cfg);
  RunReport r{"rates", cfg, {}, {}, {}, {}};
  r.stats = {{"twofold_hz", rates.twofold_hz},
             {"threefold_hz", rates.threefold_hz},
             {"fivefold_hz", rates.fivefold_hz},
             {"fivefold_max_per_10h", rates.fivefold_max_per_10h}};
  return r;
}

nlohmann::ordered_json to_json(const OutcomeTable& t) {
  nlohmann::ordered_json modes = nlohmann::ordered_json::array(), bases = nlohmann::ordered_json::array();
  for (Spatial m : t.modes) modes.push_back(m.id);
  for (AnalysisBasis b : t.bases) bases.push_back(std::string(basis_name(b)));
  nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    nlohmann::ordered_json o{{"outcome", t.outcome_label(i)}, {"probability", t.probability[i]}};
    if (t.counts) o["count"] = (*t.counts)[i];
    outcomes.push_back(std::move(o));
  }
  return {{"modes", modes}, {"bases", bases}, {"outcomes", outcomes}};
}

nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config_entries(r.config)) config[k] = v;
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.stats) stats[k] = number_or_string(v);
  nlohmann::ordered_json tables = nlohmann::ordered_json::array();
  for (const auto& t : r.tables) tables.push_back(to_json(t));
  nlohmann::ordered_json scan = nlohmann::ordered_json::array();
  for (const auto& p : r.scan) {
    scan.push_back({{"delay_um", p.delay_um},
                    {"prob_peak", p.prob_peak},
                    {"prob_dip", p.prob_dip},
                    {"count_peak", p.count_peak},
                    {"count_dip", p.count_dip}});
  }
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"input", c.input},
                     {"destination", c.destination},
                     {"fidelity", c.fidelity},
                     {"fidelity_mc", c.fidelity_mc},
                     {"error", c.error},
                     {"chain_probability", c.chain_prob},
                     {"above_classical", c.above_classical}});
  }
  return {{"schema_version", 1}, {"experiment", r.experiment}, {"config", config},
          {"stats", stats},      {"tables", tables},           {"scan", scan},
          {"cells", cells}};
}

std::string scan_to_csv(const std::vector<ScanPoint>& scan) {
  std::string out = "delay_um,prob_peak,prob_dip,count_peak,count_dip\n";
  for (const auto& p : scan) {
    out += fmt(p.delay_um) + "," + fmt(p.prob_peak) + "," + fmt(p.prob_dip) + "," +
           std::to_string(p.count_peak) + "," + std::to_string(p.count_dip) + "\n";
  }
  return out;
}

std::vector<ScanPoint> scan_from_csv(std::string_view csv) {
  const auto lines = lines_of(csv);
  if (lines.empty() || lines[0] != "delay_um,prob_peak,prob_dip,count_peak,count_dip") {
    throw std::invalid_argument("csv: missing scan header");
  }
  std::vector<ScanPoint> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 5) throw std::invalid_argument("csv: scan rows need 5 fields");
    out.push_back({parse_field<double>(f[0], "delay_um"), parse_field<double>(f[1], "prob_peak"),
                   parse_field<double>(f[2], "prob_dip"),
                   parse_field<std::int64_t>(f[3], "count_peak"),
                   parse_field<std::int64_t>(f[4], "count_dip")});
  }
  return out;
}

std::string cells_to_csv(const std::vector<TeleportCell>& cells) {
  std::string out = "input,destination,fidelity,fidelity_mc,error,chain_probability,above_classical\n";
  for (const auto& c : cells) {
    out += c.input + "," + std::to_string(c.destination) + "," + fmt(c.fidelity) + "," +
           fmt(c.fidelity_mc) + "," + fmt(c.error) + "," + fmt(c.chain_prob) + "," +
           (c.above_classical ? "true" : "false") + "\n";
  }
  return out;
}

std::string stats_to_csv(const std::vector<std::pair<std::string, double>>& stats) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : stats) out += k + "," + fmt(v) + "\n";
  return out;
}

std::string report_csv(const RunReport& r) {
  if (!r.scan.empty()) return scan_to_csv(r.scan);
  if (!r.cells.empty()) return cells_to_csv(r.cells);
  if (!r.tables.empty()) return to_csv(r.tables.front());
  return stats_to_csv(r.stats);
}

}  // namespace polsim

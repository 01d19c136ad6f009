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

#ifndef POLSIM_HARNESS_H
#define POLSIM_HARNESS_H

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "polsim/config.h"
#include "polsim/measurement.h"
#include "polsim/protocols.h"

namespace polsim {

/// Mixes a stream index into a base seed (splitmix64 finalizer), so every sweep point and
/// table cell draws from its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Evaluates f(0), ..., f(n - 1) on a small thread pool. Results are stored by index, so the
/// output does not depend on scheduling. The first exception (by index) is rethrown.
template <typename F>
auto parallel_map(std::size_t n, F f) -> std::vector<decltype(f(std::size_t{0}))> {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

struct Rates {
  double twofold_hz = 0.0;
  double threefold_hz = 0.0;
  double fivefold_hz = 0.0;
  /// Expected counts of the most likely +/- five-fold outcome over 10 hours.
  double fivefold_max_per_10h = 0.0;
};

/// Closed-form coincidence rates:
///   twofold   = rep * p * eta^2
///   threefold = rep * p * mu * eta^3 * P3
///   fivefold  = rep * p^2 * mu * eta^5 * P5
/// where P3 and P5 are the ideal heralding probabilities of the three- and five-photon
/// pipelines. The efficiency is cfg.detector.efficiency.
Rates rate_model(const DeviceConfig& cfg);

/// Delay positions in micrometres, inclusive of both ends.
struct Scan {
  double min_um = -1200.0;
  double max_um = 1200.0;
  int points = 49;

  void validate() const;
  std::vector<double> positions() const;
};

/// One scan position with the two analyzer settings compared in a fringe measurement.
struct ScanPoint {
  double delay_um = 0.0;
  double prob_peak = 0.0;
  double prob_dip = 0.0;
  std::int64_t count_peak = 0;
  std::int64_t count_dip = 0;

  friend bool operator==(const ScanPoint&, const ScanPoint&) = default;
};

struct TeleportCell {
  std::string input;  // "+", "-", "R", "L", "H" or "V"
  int destination = 0;
  double fidelity = 0.0;     // exact model value
  double fidelity_mc = 0.0;  // estimate from sampled analyzer outcomes
  double error = 0.0;        // one standard deviation of fidelity_mc
  double chain_prob = 0.0;
  bool above_classical = false;  // fidelity > 2/3

  friend bool operator==(const TeleportCell&, const TeleportCell&) = default;
};

struct RunReport {
  std::string experiment;
  DeviceConfig config;
  std::vector<std::pair<std::string, double>> stats;
  std::vector<OutcomeTable> tables;
  std::vector<ScanPoint> scan;
  std::vector<TeleportCell> cells;

  /// Throws std::out_of_range for an unknown key.
  double stat(std::string_view key) const;
  bool has_stat(std::string_view key) const;
};

/// Named single-photon polarization states accepted by the CLI.
PolState parse_pol_state(std::string_view name);

/// Coincidence table of the n-photon GHZ pipeline in one analysis basis.
RunReport run_ghz(int n, AnalysisBasis basis, const DeviceConfig& cfg);

RunReport run_teleport(std::string_view input, int destination, std::array<Sign, 2> outcomes,
                       const DeviceConfig& cfg);

/// Fringe scans. 'a': four-photon pipeline, Delay 1, settings ++++ / +++- on outputs 2..5.
/// 'b': three-photon pipeline, Delay 2, settings +++ / ++- on outputs 1..3.
RunReport run_fig3(char which, const Scan& scan, const DeviceConfig& cfg);

/// 'a': 32-outcome H/V table of the five-photon pipeline with its signal-to-noise ratio.
/// 'b': Delay 1 scan of +++++ / ++++- with Delay 2 held at its configured position.
RunReport run_fig4(char which, const Scan& scan, const DeviceConfig& cfg);

/// Teleports +, -, R, L to destinations 4 and 5.
RunReport run_table1(const DeviceConfig& cfg);

RunReport run_rates(const DeviceConfig& cfg);

nlohmann::ordered_json to_json(const OutcomeTable& t);
nlohmann::ordered_json to_json(const RunReport& r);

std::string scan_to_csv(const std::vector<ScanPoint>& scan);
std::vector<ScanPoint> scan_from_csv(std::string_view csv);

std::string cells_to_csv(const std::vector<TeleportCell>& cells);
std::string stats_to_csv(const std::vector<std::pair<std::string, double>>& stats);

/// The report's primary data as CSV: the scan, the teleportation cells, the first outcome
/// table, or the statistics, whichever applies first.
std::string report_csv(const RunReport& r);

}  // namespace polsim

#endif  // POLSIM_HARNESS_H

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

// Acceptance report: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   polsim_acceptance [path/to/default.cfg]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>

#include "oracle.h"
#include "polsim/harness.h"
#include "property_checks.h"
#include "test_util.h"

namespace {

using namespace polsim;
using Clock = std::chrono::steady_clock;

struct Criterion {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& why) {
    if (!cond && ok) detail = why;
    ok = ok && cond;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Criterion exact_state_oracle() {
  Criterion c;
  const auto t0 = Clock::now();
  const auto cfg = DeviceConfig::ideal();
  for (int n : {4, 5}) {
    const GhzResult g = build_ghz(n, cfg);
    const oracle::Pipeline ref = oracle::ghz_pipeline(n);
    std::vector<int> ids;
    for (Spatial s : ghz_outputs(n)) ids.push_back(s.id);
    const auto dense = testing::to_dense(g.state, ids);
    double err = 0;
    for (std::size_t x = 0; x < dense.size(); ++x) {
      err = std::max(err, std::abs(dense[x] - ref.amps[x] / std::sqrt(ref.prob)));
    }
    c.require(err < 1e-12, fmt("n=%d amplitude error %.3g", n, err));
    c.require(std::abs(g.prob - (n == 4 ? 0.5 : 0.25)) < 1e-12,
              fmt("n=%d heralding probability %.15g", n, g.prob));
    c.require(std::abs(ref.prob - (n == 4 ? 0.5 : 0.25)) < 1e-12, "oracle probability mismatch");
  }
  const double dt = seconds_since(t0);
  c.require(dt < 1.0, fmt("runtime %.3f s", dt));
  if (c.ok) c.detail = fmt("amplitudes within 1e-12, P4 = 1/2, P5 = 1/4, %.3f s", dt);
  return c;
}

PureState encoded(oracle::cd a, oracle::cd b) {
  return PureState::from_terms({{testing::pol_ket({3, 4, 5}, "HHH"), a},
                                {testing::pol_ket({3, 4, 5}, "VVV"), b}});
}

double amplitude_error(const PureState& got, const PureState& want) {
  double err = std::abs(got.squared_norm() - want.squared_norm());
  for (const auto& t : want.terms()) err = std::max(err, std::abs(got.amplitude(t.ket) - t.amp));
  return err;
}

Criterion bell_oracle() {
  Criterion c;
  std::mt19937_64 rng(2004);
  const auto cfg = DeviceConfig::ideal();
  const PureState ghz4 = build_ghz(4, cfg).state;
  double worst = 0, worst_herald = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto [a, b] = oracle::random_qubit(rng);
    const PolState in = PolState::pure(a, b);
    const PureState joint =
        tensor(single_photon(output_port(1), in), ghz4);  // photon 2 of the GHZ sits in output 2
    const auto br = bell_decompose(joint, output_port(1), output_port(2));
    const std::array<PureState, 4> want{encoded(a, b), encoded(a, -b), encoded(b, a),
                                        encoded(-b, a)};
    for (int k = 0; k < 4; ++k) {
      worst = std::max(worst, amplitude_error(br[k].branch_state, want[k]));
      worst = std::max(worst, std::abs(br[k].prob - 0.25));
    }
    const PureState herald_in =
        tensor(single_photon(input_port(1), in), relabel(ghz4, output_port(2), input_port(2)));
    const Heralded h = herald_phi_plus(herald_in, cfg);
    worst_herald = std::max(worst_herald, std::abs(h.success_prob - 0.25));
    const PureState rest = normalize(project_out(project_out(h.state, output_port(1), Axis::Plus),
                                                 output_port(2), Axis::Plus))
                               .state.with_weight(1.0);
    worst = std::max(worst, amplitude_error(rest, encoded(a, b)));
  }
  c.require(worst < 1e-12, fmt("branch error %.3g", worst));
  c.require(worst_herald < 1e-12, fmt("herald success off by %.3g", worst_herald));
  if (c.ok) c.detail = "50 random inputs, branches within 1e-12, herald success 25%";
  return c;
}

Criterion parity_structure() {
  Criterion c;
  const GhzResult g = build_ghz(5, DeviceConfig::ideal());
  const std::vector<AnalysisBasis> pm(5, AnalysisBasis::PM);
  const OutcomeTable t = outcome_distribution(g.state, ghz_outputs(5), pm);
  int nonzero = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::string label = t.outcome_label(i);
    const long plus = std::count(label.begin(), label.end(), '+');
    if (t.probability[i] > 1e-12) {
      ++nonzero;
      c.require(std::abs(t.probability[i] - 1.0 / 16) < 1e-12, label + " is not 1/16");
      c.require(plus % 2 == 1, label + " has an even number of +");
    }
  }
  c.require(nonzero == 16, fmt("%d nonzero outcomes", nonzero));
  if (c.ok) c.detail = "16 outcomes of 1/16, each with an odd number of +";
  return c;
}

Criterion teleport_identity() {
  Criterion c;
  const auto cfg = DeviceConfig::ideal();
  double worst = 1.0;
  int runs = 0;
  for (const PolState& in : {PolState::plus(), PolState::minus(), PolState::R(), PolState::L()}) {
    for (int dest : {3, 4, 5}) {
      for (Sign o1 : {Sign::Plus, Sign::Minus}) {
        for (Sign o2 : {Sign::Plus, Sign::Minus}) {
          worst = std::min(worst,
                           open_destination_teleport(in, Destination::at(dest), cfg, {o1, o2})
                               .fidelity);
          ++runs;
        }
      }
    }
  }
  c.require(worst >= 1.0 - 1e-12, fmt("worst fidelity %.15g", worst));
  if (c.ok) c.detail = fmt("%d runs, worst fidelity 1 - %.2g", runs, 1.0 - worst);
  return c;
}

Criterion fitted_figures(const DeviceConfig& cfg) {
  Criterion c;
  const auto t0 = Clock::now();
  const Scan zero{0.0, 0.0, 1};
  const RunReport f3a = run_fig3('a', zero, cfg);
  const RunReport f3b = run_fig3('b', zero, cfg);
  const RunReport f4a = run_fig4('a', zero, cfg);
  const RunReport f4b = run_fig4('b', zero, cfg);
  const RunReport t1 = run_table1(cfg);
  const double dt = seconds_since(t0);

  const double v3a = f3a.stat("visibility_zero_delay"), v3b = f3b.stat("visibility_zero_delay");
  const double far3a = f3a.stat("visibility_5lc"), far3b = f3b.stat("visibility_5lc");
  const double v4b = f4b.stat("visibility_zero_delay"), s4a = f4a.stat("snr");
  c.require(std::abs(v3a - 0.82) <= 0.01, fmt("fig3a visibility %.4f", v3a));
  c.require(std::abs(v3b - 0.68) <= 0.01, fmt("fig3b visibility %.4f", v3b));
  c.require(std::abs(far3a) <= 0.01 && std::abs(far3b) <= 0.01,
            fmt("visibility at 5 Lc %.4f / %.4f", far3a, far3b));
  c.require(std::abs(v4b - 0.59) <= 0.07, fmt("fig4b visibility %.4f", v4b));
  c.require(s4a >= 20 && s4a <= 80, fmt("fig4a snr %.2f", s4a));

  const std::map<std::pair<std::string, int>, double> reported{
      {{"+", 4}, 0.79}, {{"+", 5}, 0.80}, {{"-", 4}, 0.81}, {{"-", 5}, 0.77},
      {{"R", 4}, 0.75}, {{"R", 5}, 0.79}, {{"L", 4}, 0.79}, {{"L", 5}, 0.82}};
  std::string cells;
  double margin = 1.0;
  for (const TeleportCell& cell : t1.cells) {
    const double want = reported.at({cell.input, cell.destination});
    const double diff = std::abs(cell.fidelity - want);
    margin = std::min(margin, 0.05 - diff);
    c.require(diff <= 0.05, fmt("table1 %s@%d fidelity %.4f vs %.2f", cell.input.c_str(),
                                cell.destination, cell.fidelity, want));
    c.require(cell.fidelity > 2.0 / 3.0, "table1 cell at or below 2/3");
    cells += fmt(" %s@%d=%.3f(mc %.3f)", cell.input.c_str(), cell.destination, cell.fidelity,
                 cell.fidelity_mc);
  }
  c.require(cfg.samples_per_setting >= 1e5, "fewer than 1e5 samples per setting");
  c.require(dt < 60.0, fmt("runtime %.1f s", dt));
  const std::string summary =
      fmt("V3a=%.4f V3b=%.4f V(5Lc)=%.1e/%.1e V4b=%.4f SNR=%.2f (sampled counts %.2f) "
          "table1 margin %.4f; %.1f s;",
          v3a, v3b, far3a, far3b, v4b, s4a, f4a.stat("snr_counts"), margin, dt) +
      cells;
  c.detail = c.ok ? summary : c.detail + " | " + summary;
  return c;
}

Criterion bell_violation(const DeviceConfig& cfg) {
  Criterion c;
  const double vc = critical_visibility(5);
  c.require(vc == 0.25, fmt("critical visibility %.17g", vc));
  c.require(violates_local_realism(0.59, 5), "0.59 does not violate");
  c.require(!violates_local_realism(vc, 5), "boundary counted as violation");
  const double v4b = run_fig4('b', Scan{0.0, 0.0, 1}, cfg).stat("visibility_zero_delay");
  c.require(violates_local_realism(v4b, 5), fmt("simulated visibility %.4f", v4b));
  if (c.ok) c.detail = fmt("Vcrit(5) = 0.25; 0.59 and simulated %.4f violate", v4b);
  return c;
}

Criterion rate_sanity(const DeviceConfig& cfg) {
  Criterion c;
  const Rates r = rate_model(cfg);
  c.require(std::abs(r.twofold_hz / 2.4e4 - 1) <= 0.30, fmt("twofold %.1f /s", r.twofold_hz));
  c.require(std::abs(r.threefold_hz / 500 - 1) <= 0.50, fmt("threefold %.1f /s", r.threefold_hz));
  c.require(r.fivefold_max_per_10h >= 100.0 / 3 && r.fivefold_max_per_10h <= 300.0,
            fmt("five-fold maximum %.1f per 10 h", r.fivefold_max_per_10h));
  const std::string summary = fmt("twofold %.0f /s, threefold %.0f /s, five-fold max %.1f per 10 h",
                                  r.twofold_hz, r.threefold_hz, r.fivefold_max_per_10h);
  c.detail = c.ok ? summary : c.detail + " | " + summary;
  return c;
}

Criterion property_suites(const DeviceConfig& cfg) {
  Criterion c;
  for (const auto& [name, r] :
       std::vector<std::pair<std::string, testing::CheckResult>>{
           {"norm", testing::check_norm_conservation()},
           {"no-signalling", testing::check_no_signalling()},
           {"monotonicity", testing::check_noise_monotonicity(cfg)},
           {"determinism", testing::check_seed_determinism(cfg)}}) {
    c.require(r.ok, name + ": " + r.detail);
    if (r.ok) c.detail += (c.detail.empty() ? "" : "; ") + name + " (" + r.detail + ")";
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string path =
      argc > 1 ? argv[1] : std::string(POLSIM_SOURCE_DIR) + "/config/default.cfg";
  const DeviceConfig cfg = load_config(path);
  const std::vector<std::pair<int, std::function<Criterion()>>> criteria{
      {1, exact_state_oracle},
      {2, bell_oracle},
      {3, parity_structure},
      {4, teleport_identity},
      {5, [&] { return fitted_figures(cfg); }},
      {6, [&] { return bell_violation(cfg); }},
      {7, [&] { return rate_sanity(cfg); }},
      {8, [&] { return property_suites(cfg); }},
  };
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Criterion c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    failed += !c.ok;
    std::printf("criterion %d: %s  %s\n", id, c.ok ? "PASS" : "FAIL", c.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

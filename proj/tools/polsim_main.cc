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

// Command-line front end: one subcommand per reproduced experiment.
//
//   polsim [--config FILE] [--seed N] [--out-dir DIR] [--format csv|json] <subcommand> ...
//
// Without --out-dir the report goes to stdout. Errors are reported on stderr as a single
// JSON object {"error": {"kind": ..., "message": ...}} with exit code 2 for invalid input
// and 1 for anything else.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "polsim/config.h"
#include "polsim/harness.h"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitFailure = 1;

int report_error(std::string_view kind, std::string_view message, int code) {
  nlohmann::json j{{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
  return code;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

std::array<polsim::Sign, 2> parse_outcomes(const std::string& s) {
  if (s.size() != 2) throw std::invalid_argument("--outcomes expects two signs, e.g. +-");
  std::array<polsim::Sign, 2> out{};
  for (int i = 0; i < 2; ++i) {
    if (s[i] == '+') {
      out[i] = polsim::Sign::Plus;
    } else if (s[i] == '-') {
      out[i] = polsim::Sign::Minus;
    } else {
      throw std::invalid_argument("--outcomes expects only '+' or '-'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Five-photon GHZ and open-destination teleportation simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "json";
  app.add_option("--config", config_path, "Device configuration file (key = value)");
  app.add_option("--seed", seed, "Override the configured RNG seed");
  app.add_option("--out-dir", out_dir, "Write the report into this directory");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));

  int ghz_n = 5;
  std::string ghz_basis = "PM";
  auto* ghz = app.add_subcommand("ghz", "Coincidence table of the n-photon GHZ pipeline");
  ghz->add_option("--n", ghz_n, "Number of photons")->check(CLI::Range(3, 5));
  ghz->add_option("--basis", ghz_basis, "Analysis basis for every photon")
      ->check(CLI::IsMember({"HV", "PM", "RL"}));

  std::string tele_input = "+";
  int tele_dest = 5;
  std::string tele_outcomes = "++";
  auto* tele = app.add_subcommand("teleport", "Open-destination teleportation of one state");
  tele->add_option("--input", tele_input, "Input state: H, V, +, -, R or L");
  tele->add_option("--dest", tele_dest, "Destination photon")->check(CLI::Range(3, 5));
  tele->add_option("--outcomes", tele_outcomes, "Readout outcomes on the other two photons");

  polsim::Scan scan;
  auto add_scan = [&](CLI::App* sub) {
    sub->add_option("--scan-min-um", scan.min_um, "First delay position (um)");
    sub->add_option("--scan-max-um", scan.max_um, "Last delay position (um)");
    sub->add_option("--scan-points", scan.points, "Number of delay positions");
  };
  auto* fig3a = app.add_subcommand("fig3a", "Four-photon fringe versus Delay 1");
  auto* fig3b = app.add_subcommand("fig3b", "Three-photon fringe versus Delay 2");
  auto* fig4a = app.add_subcommand("fig4a", "Five-photon H/V table and signal-to-noise");
  auto* fig4b = app.add_subcommand("fig4b", "Five-photon fringe versus Delay 1");
  auto* table1 = app.add_subcommand("table1", "Teleportation fidelities at destinations 4, 5");
  auto* rates = app.add_subcommand("rates", "Closed-form coincidence rates");
  add_scan(fig3a);
  add_scan(fig3b);
  add_scan(fig4b);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kExitInvalid);
  }

  try {
    polsim::DeviceConfig cfg =
        config_path.empty() ? polsim::DeviceConfig::ideal() : polsim::load_config(config_path);
    if (seed) cfg.seed = *seed;
    cfg.validate();

    polsim::RunReport report;
    if (ghz->parsed()) {
      report = polsim::run_ghz(ghz_n, polsim::parse_basis(ghz_basis), cfg);
    } else if (tele->parsed()) {
      report = polsim::run_teleport(tele_input, tele_dest, parse_outcomes(tele_outcomes), cfg);
    } else if (fig3a->parsed()) {
      report = polsim::run_fig3('a', scan, cfg);
    } else if (fig3b->parsed()) {
      report = polsim::run_fig3('b', scan, cfg);
    } else if (fig4a->parsed()) {
      report = polsim::run_fig4('a', scan, cfg);
    } else if (fig4b->parsed()) {
      report = polsim::run_fig4('b', scan, cfg);
    } else if (table1->parsed()) {
      report = polsim::run_table1(cfg);
    } else if (rates->parsed()) {
      report = polsim::run_rates(cfg);
    }

    const std::string body =
        format == "json" ? polsim::to_json(report).dump(2) + "\n" : polsim::report_csv(report);
    if (out_dir.empty()) {
      std::cout << body;
    } else {
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      write_text(dir / (report.experiment + "." + format), body);
      if (format == "csv") {
        write_text(dir / (report.experiment + "_stats.csv"), polsim::stats_to_csv(report.stats));
      }
      std::cout << (dir / (report.experiment + "." + format)).string() << "\n";
    }
  } catch (const polsim::ConfigError& e) {
    return report_error("config", e.what(), kExitInvalid);
  } catch (const polsim::StateError& e) {
    return report_error("state", e.what(), kExitInvalid);
  } catch (const std::invalid_argument& e) {
    return report_error("argument", e.what(), kExitInvalid);
  } catch (const std::exception& e) {
    return report_error("runtime", e.what(), kExitFailure);
  }
  return 0;
}

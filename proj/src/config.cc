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

#include "polsim/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace polsim {

DeviceConfig DeviceConfig::ideal() {
  DeviceConfig c;
  c.source_model = SourceModel::kIdeal;
  c.pair_probability = 0.0;
  c.detector = DetectorModel::resolving();
  return c;
}

SourceConfig DeviceConfig::source_config() const {
  return {pair_probability, mean_photon_number, spdc_truncation_order};
}

double DeviceConfig::gamma34() const {
  return overlap34 * overlap(DelaySetting{delay1_um * 1e-6}, filter());
}

double DeviceConfig::gamma12() const {
  return overlap12 * overlap(DelaySetting{delay2_um * 1e-6}, filter());
}

void DeviceConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid config: ") + what);
  };
  require(config_version == 1, "config_version must be 1");
  require(rep_rate_hz > 0 && std::isfinite(rep_rate_hz), "rep_rate_hz must be positive");
  require(pair_probability >= 0 && pair_probability < 1, "pair_probability must lie in [0, 1)");
  require(mean_photon_number >= 0 && std::isfinite(mean_photon_number),
          "mean_photon_number must be non-negative");
  require(spdc_truncation_order == 1 || spdc_truncation_order == 2,
          "spdc_truncation_order must be 1 or 2");
  require(max_photons >= 3 && max_photons <= kMaxPhotons, "max_photons must lie in [3, 10]");
  require(filter_center_nm > 0 && std::isfinite(filter_center_nm),
          "filter_center_nm must be positive");
  require(filter_fwhm_nm > 0 && std::isfinite(filter_fwhm_nm), "filter_fwhm_nm must be positive");
  require(std::isfinite(delay1_um) && std::isfinite(delay2_um), "delays must be finite");
  require(delay1_mode == 3 || delay1_mode == 4, "delay1_mode must be 3 or 4");
  require(delay2_mode == 1 || delay2_mode == 2, "delay2_mode must be 1 or 2");
  require(overlap34 >= 0 && overlap34 <= 1, "overlap34 must lie in [0, 1]");
  require(overlap12 >= 0 && overlap12 <= 1, "overlap12 must lie in [0, 1]");
  require(pbs_extinction >= 0 && pbs_extinction < 1, "pbs_extinction must lie in [0, 1)");
  require(detector.efficiency > 0 && detector.efficiency <= 1,
          "detector_efficiency must lie in (0, 1]");
  require(integration_time_s >= 0 && std::isfinite(integration_time_s),
          "integration_time_s must be non-negative");
  require(samples_per_setting >= 0 && std::isfinite(samples_per_setting),
          "samples_per_setting must be non-negative");
  require(coincidence_window_ns >= 0, "coincidence_window_ns must be non-negative");
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Field {
  std::function<std::string(const DeviceConfig&)> get;
  std::function<void(DeviceConfig&, const std::string& key, const std::string&)> set;
};

template <typename T>
Field number(T DeviceConfig::*member) {
  return {[member](const DeviceConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          },
          [member](DeviceConfig& c, const std::string& key, const std::string& v) {
            if constexpr (std::is_floating_point_v<T>) {
              c.*member = parse_double(key, v);
            } else {
              c.*member = static_cast<T>(parse_int(key, v));
            }
          }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> f = {
      {"config_version", number(&DeviceConfig::config_version)},
      {"source_model",
       {[](const DeviceConfig& c) {
          return std::string(c.source_model == SourceModel::kIdeal ? "ideal" : "physical");
        },
        [](DeviceConfig& c, const std::string& key, const std::string& v) {
          if (v == "ideal") {
            c.source_model = SourceModel::kIdeal;
          } else if (v == "physical") {
            c.source_model = SourceModel::kPhysical;
          } else {
            throw ConfigError("config key '" + key + "': expected ideal|physical");
          }
        }}},
      {"rep_rate_hz", number(&DeviceConfig::rep_rate_hz)},
      {"pair_probability", number(&DeviceConfig::pair_probability)},
      {"mean_photon_number", number(&DeviceConfig::mean_photon_number)},
      {"spdc_truncation_order", number(&DeviceConfig::spdc_truncation_order)},
      {"max_photons", number(&DeviceConfig::max_photons)},
      {"filter_center_nm", number(&DeviceConfig::filter_center_nm)},
      {"filter_fwhm_nm", number(&DeviceConfig::filter_fwhm_nm)},
      {"delay1_um", number(&DeviceConfig::delay1_um)},
      {"delay2_um", number(&DeviceConfig::delay2_um)},
      {"delay1_mode", number(&DeviceConfig::delay1_mode)},
      {"delay2_mode", number(&DeviceConfig::delay2_mode)},
      {"overlap34", number(&DeviceConfig::overlap34)},
      {"overlap12", number(&DeviceConfig::overlap12)},
      {"pbs_extinction", number(&DeviceConfig::pbs_extinction)},
      {"pbs_leak",
       {[](const DeviceConfig& c) {
          return std::string(c.pbs_leak == PbsLeak::kIncoherent ? "incoherent" : "coherent");
        },
        [](DeviceConfig& c, const std::string& key, const std::string& v) {
          if (v == "coherent") {
            c.pbs_leak = PbsLeak::kCoherent;
          } else if (v == "incoherent") {
            c.pbs_leak = PbsLeak::kIncoherent;
          } else {
            throw ConfigError("config key '" + key + "': expected coherent|incoherent");
          }
        }}},
      {"detector_model",
       {[](const DeviceConfig& c) {
          return std::string(c.detector.kind == DetectorModel::Kind::kThreshold ? "threshold"
                                                                                 : "resolving");
        },
        [](DeviceConfig& c, const std::string& key, const std::string& v) {
          if (v == "threshold") {
            c.detector.kind = DetectorModel::Kind::kThreshold;
          } else if (v == "resolving") {
            c.detector.kind = DetectorModel::Kind::kResolving;
          } else {
            throw ConfigError("config key '" + key + "': expected threshold|resolving");
          }
        }}},
      {"detector_efficiency",
       {[](const DeviceConfig& c) { return format_double(c.detector.efficiency); },
        [](DeviceConfig& c, const std::string& key, const std::string& v) {
          c.detector.efficiency = parse_double(key, v);
        }}},
      {"integration_time_s", number(&DeviceConfig::integration_time_s)},
      {"samples_per_setting", number(&DeviceConfig::samples_per_setting)},
      {"seed",
       {[](const DeviceConfig& c) { return std::to_string(c.seed); },
        [](DeviceConfig& c, const std::string& key, const std::string& v) {
          std::uint64_t out = 0;
          auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
          if (ec != std::errc() || ptr != v.data() + v.size()) {
            throw ConfigError("config key '" + key + "': expected an unsigned integer");
          }
          c.seed = out;
        }}},
      {"coincidence_window_ns", number(&DeviceConfig::coincidence_window_ns)},
      {"pump_power_mw", number(&DeviceConfig::pump_power_mw)},
      {"pulse_duration_fs", number(&DeviceConfig::pulse_duration_fs)},
  };
  return f;
}

}  // namespace

DeviceConfig parse_config(std::string_view text, DeviceConfig base) {
  std::map<std::string, const Field*> by_name;
  for (const auto& [name, field] : fields()) by_name[name] = &field;

  std::istringstream in{std::string(text)};
  std::string line;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    auto it = by_name.find(key);
    if (it == by_name.end()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    it->second->set(base, key, value);
  }
  base.validate();
  return base;
}

DeviceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const DeviceConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, field] : fields()) out.emplace_back(name, field.get(cfg));
  return out;
}

std::string emit_config(const DeviceConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : config_entries(cfg)) out += k + " = " + v + "\n";
  return out;
}

}  // namespace polsim

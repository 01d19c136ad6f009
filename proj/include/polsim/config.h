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

#ifndef POLSIM_CONFIG_H
#define POLSIM_CONFIG_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polsim/elements.h"
#include "polsim/measurement.h"
#include "polsim/sources.h"

namespace polsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SourceModel {
  /// Exactly one Phi+ pair per down-conversion pass and exactly one photon in mode 1.
  kIdeal,
  /// Truncated SPDC and weak coherent states, including vacuum and multi-pair terms.
  kPhysical,
};

/// Everything the optical table parameterizes.
///
/// Overlaps are amplitude overlaps of the two wavepackets meeting at a PBS when its delay is
/// zero; the delay line multiplies them by exp(-(d/L_c)^2). Fields marked "recorded" are kept
/// for provenance and do not enter the simulation.
struct DeviceConfig {
  int config_version = 1;
  SourceModel source_model = SourceModel::kPhysical;
  double rep_rate_hz = 76e6;
  double pair_probability = 0.0;
  double mean_photon_number = 0.05;
  int spdc_truncation_order = 2;
  int max_photons = kMaxPhotons;
  double filter_center_nm = 788.0;
  double filter_fwhm_nm = 3.0;
  double delay1_um = 0.0;
  double delay2_um = 0.0;
  /// Which input photon Delay 1 (PBS34 arm) and Delay 2 (PBS12 arm) shift.
  int delay1_mode = 4;
  int delay2_mode = 1;
  double overlap34 = 1.0;
  double overlap12 = 1.0;
  double pbs_extinction = 0.0;
  PbsLeak pbs_leak = PbsLeak::kCoherent;
  DetectorModel detector = DetectorModel::resolving();
  double integration_time_s = 36000.0;
  double samples_per_setting = 1e5;
  std::uint64_t seed = 1;
  double coincidence_window_ns = 4.0;  // recorded
  double pump_power_mw = 480.0;        // recorded
  double pulse_duration_fs = 200.0;    // recorded

  /// Perfect sources, optics, and number-resolving detectors.
  static DeviceConfig ideal();

  SourceConfig source_config() const;
  FilterSpec filter() const { return {filter_center_nm * 1e-9, filter_fwhm_nm * 1e-9}; }
  /// Amplitude overlap at PBS34 including the current Delay 1 setting.
  double gamma34() const;
  double gamma12() const;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  friend bool operator==(const DeviceConfig&, const DeviceConfig&) = default;
};

/// Flat `key = value` text, one entry per line, `#` comments. Units live in key names.
/// Unknown keys and malformed values are rejected.
DeviceConfig parse_config(std::string_view text, DeviceConfig base = DeviceConfig::ideal());
DeviceConfig load_config(const std::string& path);

/// Emits every key; parse_config(emit_config(c)) == c.
std::string emit_config(const DeviceConfig& cfg);

/// Ordered (key, value) snapshot, used for reports.
std::vector<std::pair<std::string, std::string>> config_entries(const DeviceConfig& cfg);

}  // namespace polsim

#endif  // POLSIM_CONFIG_H

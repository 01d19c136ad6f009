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

#ifndef POLSIM_PROTOCOLS_H
#define POLSIM_PROTOCOLS_H

#include <array>
#include <vector>

#include "polsim/config.h"
#include "polsim/elements.h"
#include "polsim/fock.h"
#include "polsim/measurement.h"
#include "polsim/sources.h"

namespace polsim {

/// Detector-side spatial labels 1..5.
constexpr Spatial output_port(int k) { return Spatial{k}; }
/// Source-side labels feeding the beam splitters; photon k is emitted into input_port(k).
constexpr Spatial input_port(int k) { return Spatial{10 + k}; }

/// Temporal bins handed out to the delay lines.
inline constexpr int kTbinDelay1 = 1;
inline constexpr int kTbinDelay2 = 2;

enum class Sign { Plus, Minus };

Axis sign_axis(Sign s);

/// The output labels a GHZ pipeline of size n post-selects on.
std::vector<Spatial> ghz_outputs(int n);

/// The optical network before detection: sources, delays, PBS34 (n = 4, 5), PBS12 (n = 3, 5).
/// Photon 1 is prepared in `photon1` (defaults to |+>). Unconditioned and normalized.
PureState ghz_network_state(int n, const DeviceConfig& cfg,
                            const PolState& photon1 = PolState::plus());

struct GhzResult {
  PureState state;
  double prob = 0.0;
};

/// ghz_network_state followed by one-photon-per-output post-selection.
GhzResult build_ghz(int n, const DeviceConfig& cfg);

struct BellBranch {
  BellKind bell_kind;
  PureState branch_state;  // normalized, on the remaining modes
  double prob = 0.0;
};

/// Projects (m1, m2) onto each Bell state and removes them. The measured photons must sit in
/// a single temporal bin.
std::array<BellBranch, 4> bell_decompose(const PureState& joint, Spatial m1, Spatial m2);

struct Heralded {
  /// Conditional state; photons 1 and 2 stay in their output modes, polarized along the
  /// registered axes, so any which-path (tbin) information they carry is retained.
  PureState state;
  double success_prob = 0.0;
};

/// Routes input photons 1 and 2 through PBS12 (with cfg's Delay 2, overlap and extinction),
/// post-selects one photon per output and registers the given +/- outcomes.
Heralded herald_outcome(const PureState& s, const DeviceConfig& cfg, Sign o1, Sign o2);

/// Phi+ identification: success_prob sums the (+,+) and (-,-) coincidences; the returned
/// state is the (+,+) branch (identical to the (-,-) branch).
Heralded herald_phi_plus(const PureState& s, const DeviceConfig& cfg);

struct Destination {
  Spatial output;
  std::array<Spatial, 2> readout_pair;

  /// Output k in {3, 4, 5}; the other two are read out.
  static Destination at(int k);
};

enum class Correction { I, Z };

struct Decoded {
  PolState raw;            // before the correction
  Correction correction;   // Z iff the two readout outcomes differ
  PolState output;         // after the correction
  double prob = 0.0;       // probability of the readout outcomes
};

/// Measures the readout pair in the +/- basis and returns the remaining photon.
Decoded decode(const PureState& s345, const Destination& dest, std::array<Sign, 2> outcomes);

struct Teleported {
  PolState output;
  double fidelity = 0.0;
  double chain_prob = 0.0;
};

/// Encodes `input` onto photons 3, 4, 5 via a (+,+) herald on photons 1 and 2, then decodes
/// at `dest` with the given readout outcomes.
///
/// Number-resolving detectors use exact state conditioning. Threshold detectors reconstruct
/// the output by tomography of five-fold coincidence probabilities in the HV, PM and RL bases.
Teleported open_destination_teleport(const PolState& input, const Destination& dest,
                                     const DeviceConfig& cfg,
                                     std::array<Sign, 2> outcomes = {Sign::Plus, Sign::Plus});

/// Visibility an N-party GHZ correlation must exceed to violate local realism: 2^((1-n)/2).
double critical_visibility(int n);

/// Strict: v == critical_visibility(n) is not a violation.
bool violates_local_realism(double v, int n);

}  // namespace polsim

#endif  // POLSIM_PROTOCOLS_H

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

#ifndef POLSIM_ELEMENTS_H
#define POLSIM_ELEMENTS_H

#include <array>
#include <string_view>

#include "polsim/fock.h"

namespace polsim {

/// Interference filter in front of each detector.
struct FilterSpec {
  double center_wavelength_m = 788e-9;
  double fwhm_bandwidth_m = 3e-9;

  /// lambda0^2 / dlambda.
  double coherence_length_m() const;
  void validate() const;
};

/// Signed path-length offset of a delay line; zero means perfect temporal overlap.
struct DelaySetting {
  double path_offset_m = 0.0;
};

/// Polarization projection axes available to polarizers and analyzers.
enum class Axis { H, V, Plus, Minus, R, L };

/// Unit Jones vector (H, V) of an axis.
std::array<Amplitude, 2> axis_vector(Axis axis);
Axis orthogonal(Axis axis);
std::string_view axis_name(Axis axis);

using Jones = std::array<Amplitude, 4>;  // row-major 2x2

/// Half-wave plate with fast axis at `angle` from H: [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
Jones hwp_matrix(double angle);
/// Quarter-wave plate R(-t) diag(1, -i) R(t); maps H to R at t = pi/4.
Jones qwp_matrix(double angle);

/// Applies a 2x2 Jones matrix to every photon (all temporal bins) in `spatial`.
PureState apply_jones(const PureState& s, Spatial spatial, const Jones& m);

/// How light leaking into the wrong PBS port relates to the transmitted light.
enum class PbsLeak {
  /// Fixed-phase amplitude leak; interferes with everything else at first order.
  kCoherent,
  /// Leak with a random phase. Leaked photons carry the kLeakTbinBit marker, which makes
  /// branches with different numbers of leaks mutually incoherent, exactly as averaging the
  /// leak phase would.
  kIncoherent,
};

inline constexpr int kLeakTbinBit = 0x40;

/// Polarizing beam splitter: transmits H, reflects V.
///
/// a(H) -> c(H), a(V) -> d(V), b(H) -> d(H), b(V) -> c(V). A nonzero extinction `epsilon`
/// leaks amplitude sqrt(epsilon) into the wrong port; the leak from input b carries a minus
/// sign so the element stays unitary.
PureState apply_pbs(const PureState& s, Spatial in_a, Spatial in_b, Spatial out_c, Spatial out_d,
                    double extinction = 0.0, PbsLeak leak = PbsLeak::kCoherent);

PureState apply_hwp(const PureState& s, Spatial spatial, double angle);
PureState apply_qwp(const PureState& s, Spatial spatial, double angle);

struct Projected {
  PureState state;
  double prob = 0.0;
};

/// Passes the photons in `spatial` through a polarizer along `axis`.
///
/// Terms with no photon in the mode are dropped (the analyzer only matters when a photon
/// arrives), so `prob` is the probability that the mode is occupied and every photon in it
/// is transmitted. The returned state is renormalized; a fully blocked input yields the zero
/// state with prob 0.
Projected apply_polarizer(const PureState& s, Spatial spatial, Axis axis);

/// Amplitude overlap exp(-(d / L_c)^2) of a delayed wavepacket with the reference one.
double overlap(const DelaySetting& d, const FilterSpec& f);

/// Rewrites a^dagger(t0) -> gamma a^dagger(t0) + sqrt(1 - gamma^2) a^dagger(fresh) for every
/// tbin-0 photon in `spatial`. `fresh_tbin` must not appear anywhere in the state.
PureState apply_distinguishability(const PureState& s, Spatial spatial, double gamma,
                                   int fresh_tbin);

/// A delay line: distinguishability with gamma = overlap(d, f).
PureState apply_delay(const PureState& s, Spatial spatial, const DelaySetting& d,
                      const FilterSpec& f, int fresh_tbin);

/// Partial inner product <axis|_spatial s>: the photon in `spatial` is measured along `axis`
/// and removed. Needs exactly one photon there, all in one temporal bin (otherwise the
/// conditional state is mixed and cannot be returned as a PureState). Unnormalized.
PureState project_out(const PureState& s, Spatial spatial, Axis axis);

}  // namespace polsim

#endif  // POLSIM_ELEMENTS_H

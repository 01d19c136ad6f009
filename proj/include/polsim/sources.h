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

#ifndef POLSIM_SOURCES_H
#define POLSIM_SOURCES_H

#include <string>
#include <string_view>
#include <vector>

#include "polsim/fock.h"

namespace polsim {

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

std::string_view bell_name(BellKind kind);

struct SourceConfig {
  /// Pair-emission probability per pulse for one down-conversion pass.
  double p = 0.0;
  /// Mean photon number of the attenuated laser pulse.
  double mu = 0.05;
  /// Highest retained number of pairs (SPDC) or photons (weak coherent): 1 or 2.
  int truncation_order = 2;

  /// Empty when fine; otherwise human-readable warnings about truncation error.
  std::vector<std::string> warnings() const;
};

/// One of the four Bell states on spatial labels i, j (tbin 0).
PureState bell_pair(BellKind kind, Spatial i, Spatial j);

/// Truncated two-mode squeezed Phi+ emission sum_k (tau K^dagger)^k / k! |vac>, with
/// K^dagger = a^dagger_iH a^dagger_jH + a^dagger_iV a^dagger_jV and p = 2 tau^2, renormalized.
/// The two-pair weight relative to the one-pair weight is 3p/4.
PureState spdc_state(const SourceConfig& cfg, Spatial i, Spatial j);

/// Truncated coherent state with amplitudes mu^(n/2) / sqrt(n!) on n photons in `pol`.
PureState weak_coherent(const SourceConfig& cfg, Spatial i, const PolState& pol);

/// A single photon in `pol` (the mu -> 0 conditional limit of `weak_coherent`).
PureState single_photon(Spatial i, const PolState& pol);

}  // namespace polsim

#endif  // POLSIM_SOURCES_H

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

#include "polsim/sources.h"

#include <cmath>

namespace polsim {

std::string_view bell_name(BellKind kind) {
  switch (kind) {
    case BellKind::PhiPlus: return "Phi+";
    case BellKind::PhiMinus: return "Phi-";
    case BellKind::PsiPlus: return "Psi+";
    case BellKind::PsiMinus: return "Psi-";
  }
  return "?";
}

std::vector<std::string> SourceConfig::warnings() const {
  std::vector<std::string> w;
  if (p * p >= 0.01) w.push_back("pair probability too large for two-pair truncation");
  if (mu * mu >= 0.01) w.push_back("mean photon number too large for two-photon truncation");
  return w;
}

PureState bell_pair(BellKind kind, Spatial i, Spatial j) {
  if (i == j) throw StateError("bell_pair: modes must differ");
  const bool phi = kind == BellKind::PhiPlus || kind == BellKind::PhiMinus;
  const double sign = (kind == BellKind::PhiPlus || kind == BellKind::PsiPlus) ? 1.0 : -1.0;
  const Pol second_h = phi ? Pol::H : Pol::V;
  const Pol second_v = phi ? Pol::V : Pol::H;
  auto ket = [](ModeId a, ModeId b) {
    std::array<ModeId, 2> m{a, b};
    return BasisKet(m);
  };
  return PureState::from_terms({
      {ket(ModeId(i, Pol::H), ModeId(j, second_h)), M_SQRT1_2},
      {ket(ModeId(i, Pol::V), ModeId(j, second_v)), sign * M_SQRT1_2},
  });
}

namespace {

PureState apply_pair_creation(const PureState& s, Spatial i, Spatial j) {
  const std::array<std::pair<ModeId, Amplitude>, 1> ih{{{ModeId(i, Pol::H), 1.0}}};
  const std::array<std::pair<ModeId, Amplitude>, 1> jh{{{ModeId(j, Pol::H), 1.0}}};
  const std::array<std::pair<ModeId, Amplitude>, 1> iv{{{ModeId(i, Pol::V), 1.0}}};
  const std::array<std::pair<ModeId, Amplitude>, 1> jv{{{ModeId(j, Pol::V), 1.0}}};
  return add(create(create(s, ih), jh), create(create(s, iv), jv));
}

}  // namespace

PureState spdc_state(const SourceConfig& cfg, Spatial i, Spatial j) {
  if (i == j) throw StateError("spdc_state: modes must differ");
  if (cfg.truncation_order != 1 && cfg.truncation_order != 2) {
    throw StateError("spdc_state: unsupported truncation order " +
                     std::to_string(cfg.truncation_order));
  }
  if (!(cfg.p >= 0.0 && cfg.p < 1.0)) throw StateError("spdc_state: p must lie in [0, 1)");
  const double tau = std::sqrt(cfg.p / 2.0);
  PureState sum = PureState::vacuum();
  PureState power = PureState::vacuum();
  double coeff = 1.0;
  for (int k = 1; k <= cfg.truncation_order; ++k) {
    power = apply_pair_creation(power, i, j);
    coeff *= tau / k;
    sum = add(sum, scale(power, coeff));
  }
  return normalize(sum).state.with_weight(1.0);
}

PureState weak_coherent(const SourceConfig& cfg, Spatial i, const PolState& pol) {
  if (!(cfg.mu >= 0.0)) throw StateError("weak_coherent: mu must be non-negative");
  if (!pol.is_pure()) throw StateError("weak_coherent: polarization must be pure");
  if (cfg.truncation_order != 1 && cfg.truncation_order != 2) {
    throw StateError("weak_coherent: unsupported truncation order");
  }
  const Eigen::Vector2cd& v = *pol.ket();
  const std::array<std::pair<ModeId, Amplitude>, 2> op{
      {{ModeId(i, Pol::H), v(0)}, {ModeId(i, Pol::V), v(1)}}};
  const double amp = std::sqrt(cfg.mu);
  PureState sum = PureState::vacuum();
  PureState power = PureState::vacuum();
  double coeff = 1.0;
  for (int n = 1; n <= cfg.truncation_order; ++n) {
    power = create(power, op);
    coeff *= amp / n;
    sum = add(sum, scale(power, coeff));
  }
  return normalize(sum).state.with_weight(1.0);
}

PureState single_photon(Spatial i, const PolState& pol) {
  if (!pol.is_pure()) throw StateError("single_photon: polarization must be pure");
  const Eigen::Vector2cd& v = *pol.ket();
  const std::array<std::pair<ModeId, Amplitude>, 2> op{
      {{ModeId(i, Pol::H), v(0)}, {ModeId(i, Pol::V), v(1)}}};
  return create(PureState::vacuum(), op);
}

}  // namespace polsim

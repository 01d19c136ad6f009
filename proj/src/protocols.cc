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

#include "polsim/protocols.h"

#include <cmath>

namespace polsim {

Axis sign_axis(Sign s) { return s == Sign::Plus ? Axis::Plus : Axis::Minus; }

std::vector<Spatial> ghz_outputs(int n) {
  switch (n) {
    case 3: return {output_port(1), output_port(2), output_port(3)};
    case 4: return {output_port(2), output_port(3), output_port(4), output_port(5)};
    case 5: return {output_port(1), output_port(2), output_port(3), output_port(4), output_port(5)};
  }
  throw StateError("GHZ size must be 3, 4 or 5, got " + std::to_string(n));
}

namespace {

PureState pair_source(const DeviceConfig& cfg, int i, int j) {
  if (cfg.source_model == SourceModel::kIdeal) {
    return bell_pair(BellKind::PhiPlus, input_port(i), input_port(j));
  }
  return spdc_state(cfg.source_config(), input_port(i), input_port(j));
}

PureState photon1_source(const DeviceConfig& cfg, const PolState& pol) {
  if (cfg.source_model == SourceModel::kIdeal) return single_photon(input_port(1), pol);
  return weak_coherent(cfg.source_config(), input_port(1), pol);
}

PureState through_pbs12(const PureState& s, const DeviceConfig& cfg) {
  PureState out = apply_distinguishability(s, input_port(cfg.delay2_mode), cfg.gamma12(),
                                           kTbinDelay2);
  return apply_pbs(out, input_port(1), input_port(2), output_port(1), output_port(2),
                   cfg.pbs_extinction, cfg.pbs_leak);
}

PureState through_pbs34(const PureState& s, const DeviceConfig& cfg) {
  PureState out = apply_distinguishability(s, input_port(cfg.delay1_mode), cfg.gamma34(),
                                           kTbinDelay1);
  return apply_pbs(out, input_port(3), input_port(4), output_port(3), output_port(4),
                   cfg.pbs_extinction, cfg.pbs_leak);
}

Eigen::Matrix2cd apply_z(const Eigen::Matrix2cd& rho) {
  Eigen::Matrix2cd z;
  z << 1, 0, 0, -1;
  return z * rho * z;
}

}  // namespace

PureState ghz_network_state(int n, const DeviceConfig& cfg, const PolState& photon1) {
  ghz_outputs(n);
  cfg.validate();
  PureState s = pair_source(cfg, 2, 3);
  if (n >= 4) s = truncate_photon_number(tensor(s, pair_source(cfg, 4, 5)), cfg.max_photons);
  if (n != 4) {
    s = truncate_photon_number(tensor(photon1_source(cfg, photon1), s), cfg.max_photons);
  }
  if (n >= 4) {
    s = through_pbs34(s, cfg);
    s = relabel(s, input_port(5), output_port(5));
  } else {
    s = relabel(s, input_port(3), output_port(3));
  }
  if (n != 4) {
    s = through_pbs12(s, cfg);
  } else {
    s = relabel(s, input_port(2), output_port(2));
  }
  return s;
}

GhzResult build_ghz(int n, const DeviceConfig& cfg) {
  auto outputs = ghz_outputs(n);
  auto [state, prob] = post_select_one_per_mode(ghz_network_state(n, cfg), outputs);
  return {std::move(state), prob};
}

std::array<BellBranch, 4> bell_decompose(const PureState& joint, Spatial m1, Spatial m2) {
  if (m1 == m2) throw StateError("bell_decompose: modes must differ");
  // Components <a|_m1 <b|_m2 joint for a, b in {H, V}.
  std::array<PureState, 4> comp;
  const std::array<Axis, 2> hv{Axis::H, Axis::V};
  for (int a = 0; a < 2; ++a) {
    PureState first = project_out(joint, m1, hv[a]);
    for (int b = 0; b < 2; ++b) comp[2 * a + b] = project_out(first, m2, hv[b]);
  }
  const double total = joint.squared_norm();
  if (total <= 0) throw StateError("bell_decompose: zero state");
  const double r = M_SQRT1_2;
  // Bell coefficients on (HH, HV, VH, VV); all real.
  const std::array<std::pair<BellKind, std::array<double, 4>>, 4> bells{{
      {BellKind::PhiPlus, {r, 0, 0, r}},
      {BellKind::PhiMinus, {r, 0, 0, -r}},
      {BellKind::PsiPlus, {0, r, r, 0}},
      {BellKind::PsiMinus, {0, r, -r, 0}},
  }};
  std::array<BellBranch, 4> out{};
  for (int k = 0; k < 4; ++k) {
    PureState branch;
    for (int c = 0; c < 4; ++c) {
      if (bells[k].second[c] != 0.0) {
        branch = add(branch, scale(comp[c], bells[k].second[c]));
      }
    }
    const double p = branch.squared_norm() / total;
    out[k].bell_kind = bells[k].first;
    out[k].prob = p;
    if (p > 0) out[k].branch_state = normalize(branch).state.with_weight(joint.weight() * p);
  }
  return out;
}

Heralded herald_outcome(const PureState& s, const DeviceConfig& cfg, Sign o1, Sign o2) {
  const std::array<Spatial, 2> outs{output_port(1), output_port(2)};
  for (const auto& t : s.terms()) {
    if (t.ket.count_in(input_port(1)) == 0 || t.ket.count_in(input_port(2)) == 0) {
      throw StateError("herald: photons 1 and 2 must both be present");
    }
  }
  auto [post, p_post] = post_select_one_per_mode(through_pbs12(s, cfg), outs);
  if (p_post == 0) return {PureState{}, 0.0};
  auto [a, p1] = apply_polarizer(post, outs[0], sign_axis(o1));
  if (p1 == 0) return {PureState{}, 0.0};
  auto [b, p2] = apply_polarizer(a, outs[1], sign_axis(o2));
  if (p2 == 0) return {PureState{}, 0.0};
  return {std::move(b), p_post * p1 * p2};
}

Heralded herald_phi_plus(const PureState& s, const DeviceConfig& cfg) {
  Heralded pp = herald_outcome(s, cfg, Sign::Plus, Sign::Plus);
  Heralded mm = herald_outcome(s, cfg, Sign::Minus, Sign::Minus);
  return {std::move(pp.state), pp.success_prob + mm.success_prob};
}

Destination Destination::at(int k) {
  switch (k) {
    case 3: return {output_port(3), {output_port(4), output_port(5)}};
    case 4: return {output_port(4), {output_port(3), output_port(5)}};
    case 5: return {output_port(5), {output_port(3), output_port(4)}};
  }
  throw StateError("destination must be 3, 4 or 5, got " + std::to_string(k));
}

Decoded decode(const PureState& s345, const Destination& dest, std::array<Sign, 2> outcomes) {
  for (const auto& t : s345.terms()) {
    for (Spatial m : {dest.output, dest.readout_pair[0], dest.readout_pair[1]}) {
      if (t.ket.count_in(m) != 1) {
        throw StateError("decode: expected one photon in mode " + std::to_string(m.id));
      }
    }
  }
  auto [a, p1] = apply_polarizer(s345, dest.readout_pair[0], sign_axis(outcomes[0]));
  if (p1 == 0) throw StateError("decode: readout outcome has zero probability");
  auto [b, p2] = apply_polarizer(a, dest.readout_pair[1], sign_axis(outcomes[1]));
  if (p2 == 0) throw StateError("decode: readout outcome has zero probability");
  PolState raw = extract_pol_qubit(b, dest.output);
  const Correction corr = outcomes[0] == outcomes[1] ? Correction::I : Correction::Z;
  PolState output = corr == Correction::Z ? PolState::mixed(apply_z(raw.density())) : raw;
  return {raw, corr, output, p1 * p2};
}

namespace {

Teleported teleport_by_tomography(const PolState& input, const Destination& dest,
                                  const DeviceConfig& cfg, std::array<Sign, 2> outcomes) {
  const PureState network = ghz_network_state(5, cfg, input);
  const std::vector<Spatial> modes{output_port(1), output_port(2), dest.readout_pair[0],
                                   dest.readout_pair[1], dest.output};
  const std::size_t prefix = (static_cast<std::size_t>(outcomes[0] == Sign::Minus) << 2) |
                             (static_cast<std::size_t>(outcomes[1] == Sign::Minus) << 1);
  // Stokes components (x, y, z) from the PM, RL and HV analyses of the output photon.
  const std::array<AnalysisBasis, 3> bases{AnalysisBasis::PM, AnalysisBasis::RL,
                                           AnalysisBasis::HV};
  std::array<double, 3> stokes{};
  double detected = 0;
  for (int k = 0; k < 3; ++k) {
    const std::vector<AnalysisBasis> b{AnalysisBasis::PM, AnalysisBasis::PM, AnalysisBasis::PM,
                                       AnalysisBasis::PM, bases[k]};
    OutcomeTable t = coincidence_table(network, modes, b, cfg.detector);
    const double p0 = t.probability[prefix], p1 = t.probability[prefix | 1u];
    if (p0 + p1 <= 0) throw StateError("teleport: five-fold coincidence never occurs");
    stokes[k] = (p0 - p1) / (p0 + p1);
    detected += (p0 + p1) / 3.0;
  }
  if (outcomes[0] != outcomes[1]) {
    stokes[0] = -stokes[0];
    stokes[1] = -stokes[1];
  }
  const double len = std::sqrt(stokes[0] * stokes[0] + stokes[1] * stokes[1] +
                               stokes[2] * stokes[2]);
  if (len > 1.0) {
    for (double& x : stokes) x /= len;
  }
  const Amplitude i(0, 1);
  Eigen::Matrix2cd rho;
  rho << 1.0 + stokes[2], stokes[0] - i * stokes[1], stokes[0] + i * stokes[1], 1.0 - stokes[2];
  rho *= 0.5;
  PolState out = PolState::mixed(rho);
  return {out, fidelity(out, input), detected};
}

}  // namespace

Teleported open_destination_teleport(const PolState& input, const Destination& dest,
                                     const DeviceConfig& cfg, std::array<Sign, 2> outcomes) {
  if (!input.is_pure()) throw StateError("teleport: input must be pure");
  cfg.validate();
  if (cfg.detector.kind == DetectorModel::Kind::kThreshold) {
    return teleport_by_tomography(input, dest, cfg, outcomes);
  }
  PureState encoded;
  double prob = 1.0;
  if (cfg.source_model == SourceModel::kIdeal) {
    // Photon 1 joins the four-photon GHZ resource at PBS12.
    GhzResult ghz4 = build_ghz(4, cfg);
    PureState resource = relabel(ghz4.state, output_port(2), input_port(2));
    PureState joint = tensor(single_photon(input_port(1), input), resource);
    Heralded h = herald_outcome(joint, cfg, Sign::Plus, Sign::Plus);
    if (h.success_prob == 0) throw StateError("teleport: herald never fires");
    encoded = std::move(h.state);
    prob = ghz4.prob * h.success_prob;
  } else {
    auto [post, p_post] =
        post_select_one_per_mode(ghz_network_state(5, cfg, input), ghz_outputs(5));
    if (p_post == 0) throw StateError("teleport: five-fold coincidence never occurs");
    auto [a, p1] = apply_polarizer(post, output_port(1), Axis::Plus);
    auto [b, p2] = apply_polarizer(a, output_port(2), Axis::Plus);
    if (p1 * p2 == 0) throw StateError("teleport: herald never fires");
    encoded = std::move(b);
    prob = p_post * p1 * p2;
  }
  Decoded d = decode(encoded, dest, outcomes);
  return {d.output, fidelity(d.output, input), prob * d.prob};
}

double critical_visibility(int n) {
  if (n < 2) throw StateError("critical_visibility: need at least two parties");
  return std::pow(2.0, (1.0 - n) / 2.0);
}

bool violates_local_realism(double v, int n) { return v > critical_visibility(n); }

}  // namespace polsim

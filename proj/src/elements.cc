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

#include "polsim/elements.h"

#include <cmath>
#include <set>

namespace polsim {

double FilterSpec::coherence_length_m() const {
  return center_wavelength_m * center_wavelength_m / fwhm_bandwidth_m;
}

void FilterSpec::validate() const {
  if (!(center_wavelength_m > 0) || !(fwhm_bandwidth_m > 0)) {
    throw StateError("filter wavelength and bandwidth must be positive");
  }
}

std::array<Amplitude, 2> axis_vector(Axis axis) {
  const double r = M_SQRT1_2;
  switch (axis) {
    case Axis::H: return {1.0, 0.0};
    case Axis::V: return {0.0, 1.0};
    case Axis::Plus: return {r, r};
    case Axis::Minus: return {r, -r};
    case Axis::R: return {r, Amplitude(0, r)};
    case Axis::L: return {r, Amplitude(0, -r)};
  }
  throw StateError("unknown axis");
}

Axis orthogonal(Axis axis) {
  switch (axis) {
    case Axis::H: return Axis::V;
    case Axis::V: return Axis::H;
    case Axis::Plus: return Axis::Minus;
    case Axis::Minus: return Axis::Plus;
    case Axis::R: return Axis::L;
    case Axis::L: return Axis::R;
  }
  throw StateError("unknown axis");
}

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::H: return "H";
    case Axis::V: return "V";
    case Axis::Plus: return "+";
    case Axis::Minus: return "-";
    case Axis::R: return "R";
    case Axis::L: return "L";
  }
  return "?";
}

Jones hwp_matrix(double angle) {
  const double c = std::cos(2 * angle), s = std::sin(2 * angle);
  return {c, s, s, -c};
}

Jones qwp_matrix(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  const Amplitude i(0, 1);
  return {c * c - i * s * s, c * s * (1.0 + i), c * s * (1.0 + i), s * s - i * c * c};
}

PureState apply_jones(const PureState& s, Spatial spatial, const Jones& m) {
  return transform_modes(s, [&](ModeId mode) {
    if (mode.spatial() != spatial) return ModeImage::identity(mode);
    // Column of the Jones matrix for the input polarization.
    const int col = static_cast<int>(mode.pol());
    ModeImage img;
    img.add(mode.with_pol(Pol::H), m[col]);
    img.add(mode.with_pol(Pol::V), m[2 + col]);
    return img;
  });
}

PureState apply_pbs(const PureState& s, Spatial in_a, Spatial in_b, Spatial out_c, Spatial out_d,
                    double extinction, PbsLeak leak_model) {
  if (in_a == in_b) throw StateError("apply_pbs: inputs must differ");
  if (out_c == out_d) throw StateError("apply_pbs: outputs must differ");
  if (!(extinction >= 0.0 && extinction < 1.0)) {
    throw StateError("apply_pbs: extinction must lie in [0, 1)");
  }
  const std::set<Spatial> inputs{in_a, in_b};
  for (const auto& t : s.terms()) {
    for (ModeId m : t.ket.photons()) {
      if ((m.spatial() == out_c || m.spatial() == out_d) && !inputs.contains(m.spatial())) {
        throw StateError("apply_pbs: output label already occupied");
      }
    }
  }
  const double pass = std::sqrt(1.0 - extinction);
  const double leak = std::sqrt(extinction);
  return transform_modes(s, [&](ModeId m) {
    ModeImage img;
    const bool from_a = m.spatial() == in_a;
    const bool from_b = m.spatial() == in_b;
    if (!from_a && !from_b) return ModeImage::identity(m);
    const bool horizontal = m.pol() == Pol::H;
    // Right port: transmitted H, reflected V.
    Spatial right, wrong;
    if (from_a) {
      right = horizontal ? out_c : out_d;
      wrong = horizontal ? out_d : out_c;
    } else {
      right = horizontal ? out_d : out_c;
      wrong = horizontal ? out_c : out_d;
    }
    img.add(m.with_spatial(right), pass);
    ModeId leaked = m.with_spatial(wrong);
    if (leak_model == PbsLeak::kIncoherent) {
      if (m.tbin() & kLeakTbinBit) throw StateError("apply_pbs: photon already carries a leak marker");
      leaked = ModeId(wrong, m.pol(), m.tbin() | kLeakTbinBit);
    }
    img.add(leaked, from_a ? leak : -leak);
    return img;
  });
}

PureState apply_hwp(const PureState& s, Spatial spatial, double angle) {
  return apply_jones(s, spatial, hwp_matrix(angle));
}

PureState apply_qwp(const PureState& s, Spatial spatial, double angle) {
  return apply_jones(s, spatial, qwp_matrix(angle));
}

Projected apply_polarizer(const PureState& s, Spatial spatial, Axis axis) {
  const auto v = axis_vector(axis);
  // Rotate so the axis becomes H, keep only H photons, rotate back.
  const Jones to_axis = {std::conj(v[0]), std::conj(v[1]), -v[1], v[0]};
  const Jones from_axis = {v[0], -std::conj(v[1]), v[1], std::conj(v[0])};

  StateBuilder occupied(s.size());
  double occupied_norm = 0;
  for (const auto& t : s.terms()) {
    if (t.ket.count_in(spatial) > 0) {
      occupied.add(t.ket, t.amp);
      occupied_norm += std::norm(t.amp);
    }
  }
  const double total = s.squared_norm();
  if (total <= 0 || occupied_norm <= 0) return {PureState{}, 0.0};

  PureState rotated = apply_jones(std::move(occupied).build(s.weight()), spatial, to_axis);
  PureState filtered = transform_modes(rotated, [&](ModeId m) {
    if (m.spatial() == spatial && m.pol() == Pol::V) return ModeImage{};
    return ModeImage::identity(m);
  });
  const double passed = filtered.squared_norm();
  if (passed <= 0) return {PureState{}, 0.0};
  const double prob = passed / total;
  PureState state = normalize(apply_jones(filtered, spatial, from_axis)).state;
  return {state.with_weight(s.weight() * prob), prob};
}

double overlap(const DelaySetting& d, const FilterSpec& f) {
  const double x = d.path_offset_m / f.coherence_length_m();
  return std::exp(-x * x);
}

PureState apply_distinguishability(const PureState& s, Spatial spatial, double gamma,
                                   int fresh_tbin) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw StateError("distinguishability: overlap must lie in [0, 1]");
  }
  for (const auto& t : s.terms()) {
    for (ModeId m : t.ket.photons()) {
      if (m.tbin() == fresh_tbin) {
        throw StateError("delay: temporal bin " + std::to_string(fresh_tbin) + " already in use");
      }
    }
  }
  if (gamma == 1.0) return s;
  const double other = std::sqrt(1.0 - gamma * gamma);
  return transform_modes(s, [&](ModeId m) {
    if (m.spatial() != spatial || m.tbin() != 0) return ModeImage::identity(m);
    ModeImage img;
    img.add(m, gamma);
    img.add(ModeId(m.spatial(), m.pol(), fresh_tbin), other);
    return img;
  });
}

PureState apply_delay(const PureState& s, Spatial spatial, const DelaySetting& d,
                      const FilterSpec& f, int fresh_tbin) {
  if (!std::isfinite(d.path_offset_m)) throw StateError("delay: offset must be finite");
  f.validate();
  return apply_distinguishability(s, spatial, overlap(d, f), fresh_tbin);
}

PureState project_out(const PureState& s, Spatial spatial, Axis axis) {
  const auto v = axis_vector(axis);
  StateBuilder out(s.size());
  std::optional<int> tbin;
  std::array<ModeId, kMaxPhotons> rest{};
  for (const auto& t : s.terms()) {
    if (t.ket.count_in(spatial) != 1) {
      throw StateError("project_out: expected exactly one photon in mode " +
                       std::to_string(spatial.id));
    }
    int n = 0;
    ModeId photon;
    for (ModeId m : t.ket.photons()) {
      if (m.spatial() == spatial) {
        photon = m;
      } else {
        rest[n++] = m;
      }
    }
    if (tbin && *tbin != photon.tbin()) {
      throw StateError("project_out: measured photon spans several temporal bins");
    }
    tbin = photon.tbin();
    out.add(BasisKet(std::span<const ModeId>(rest.data(), n)),
            std::conj(v[static_cast<int>(photon.pol())]) * t.amp);
  }
  return std::move(out).build(s.weight());
}

}  // namespace polsim

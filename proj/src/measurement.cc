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

#include "polsim/measurement.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace polsim {

std::string_view basis_name(AnalysisBasis b) {
  switch (b) {
    case AnalysisBasis::HV: return "HV";
    case AnalysisBasis::PM: return "PM";
    case AnalysisBasis::RL: return "RL";
  }
  return "?";
}

AnalysisBasis parse_basis(std::string_view name) {
  if (name == "HV") return AnalysisBasis::HV;
  if (name == "PM") return AnalysisBasis::PM;
  if (name == "RL") return AnalysisBasis::RL;
  throw StateError("unknown analysis basis '" + std::string(name) + "'");
}

Axis outcome_axis(AnalysisBasis b, int bit) {
  switch (b) {
    case AnalysisBasis::HV: return bit ? Axis::V : Axis::H;
    case AnalysisBasis::PM: return bit ? Axis::Minus : Axis::Plus;
    case AnalysisBasis::RL: return bit ? Axis::L : Axis::R;
  }
  throw StateError("unknown analysis basis");
}

namespace {

void check_modes(std::span<const Spatial> modes, std::span<const AnalysisBasis> bases) {
  if (modes.size() != bases.size()) throw StateError("one analysis basis per mode required");
  if (modes.empty() || modes.size() > 16) throw StateError("between 1 and 16 analyzed modes");
  std::set<Spatial> seen(modes.begin(), modes.end());
  if (seen.size() != modes.size()) throw StateError("analyzed modes must be distinct");
}

int outcome_bit_of(char c) {
  switch (c) {
    case 'H': case '+': case 'R': return 0;
    case 'V': case '-': case 'L': return 1;
  }
  throw StateError(std::string("bad outcome symbol '") + c + "'");
}

}  // namespace

std::string OutcomeTable::outcome_label(std::size_t index) const {
  std::string s;
  const std::size_t n = modes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int bit = static_cast<int>((index >> (n - 1 - i)) & 1u);
    s += axis_name(outcome_axis(bases[i], bit));
  }
  return s;
}

std::string OutcomeTable::basis_label() const {
  std::string s;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i) s += "/";
    s += std::string(basis_name(bases[i])) + "@" + std::to_string(modes[i].id);
  }
  return s;
}

std::optional<std::size_t> OutcomeTable::find(std::string_view outcome) const {
  if (outcome.size() != modes.size()) return std::nullopt;
  std::size_t index = 0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    int bit;
    try {
      bit = outcome_bit_of(outcome[i]);
    } catch (const StateError&) {
      return std::nullopt;
    }
    if (axis_name(outcome_axis(bases[i], bit)) != std::string_view(&outcome[i], 1)) {
      return std::nullopt;
    }
    index = (index << 1) | static_cast<std::size_t>(bit);
  }
  return index;
}

double OutcomeTable::total() const {
  double t = 0;
  for (double p : probability) t += p;
  return t;
}

PostSelected post_select_one_per_mode(const PureState& s, std::span<const Spatial> modes) {
  std::set<Spatial> seen(modes.begin(), modes.end());
  if (seen.size() != modes.size()) throw StateError("post-selection modes must be distinct");
  const double total = s.squared_norm();
  StateBuilder kept(s.size());
  double kept_norm = 0;
  for (const auto& t : s.terms()) {
    bool ok = true;
    for (Spatial m : modes) {
      if (t.ket.count_in(m) != 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      kept.add(t.ket, t.amp);
      kept_norm += std::norm(t.amp);
    }
  }
  if (total <= 0 || kept_norm <= 0) return {PureState{}, 0.0};
  const double prob = kept_norm / total;
  PureState state = normalize(std::move(kept).build(s.weight())).state;
  return {state.with_weight(s.weight() * prob), prob};
}

PureState rotate_to_analysis(const PureState& s, std::span<const Spatial> modes,
                             std::span<const AnalysisBasis> bases) {
  check_modes(modes, bases);
  const Jones to_pm = hwp_matrix(std::numbers::pi / 8);
  const Jones rl_to_pm = qwp_matrix(0.0);
  // Compose per mode into one Jones matrix so the state is re-expanded only once.
  std::map<int, Jones> per_mode;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    switch (bases[i]) {
      case AnalysisBasis::HV: break;
      case AnalysisBasis::PM: per_mode[modes[i].id] = to_pm; break;
      case AnalysisBasis::RL: {
        Jones m{};
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
            m[2 * r + c] = to_pm[2 * r] * rl_to_pm[c] + to_pm[2 * r + 1] * rl_to_pm[2 + c];
        per_mode[modes[i].id] = m;
        break;
      }
    }
  }
  if (per_mode.empty()) return s;
  return transform_modes(s, [&](ModeId mode) {
    auto it = per_mode.find(mode.spatial().id);
    if (it == per_mode.end()) return ModeImage::identity(mode);
    const Jones& m = it->second;
    const int col = static_cast<int>(mode.pol());
    ModeImage img;
    img.add(mode.with_pol(Pol::H), m[col]);
    img.add(mode.with_pol(Pol::V), m[2 + col]);
    return img;
  });
}

OutcomeTable outcome_distribution(const PureState& s, std::span<const Spatial> modes,
                                  std::span<const AnalysisBasis> bases) {
  check_modes(modes, bases);
  for (const auto& t : s.terms()) {
    for (Spatial m : modes) {
      if (t.ket.count_in(m) != 1) {
        throw StateError("outcome_distribution: expected one photon in mode " +
                         std::to_string(m.id));
      }
    }
  }
  const double total = s.squared_norm();
  if (total <= 0) throw StateError("outcome_distribution: zero state");
  PureState rotated = rotate_to_analysis(s, modes, bases);

  OutcomeTable table{{modes.begin(), modes.end()}, {bases.begin(), bases.end()},
                     std::vector<double>(std::size_t{1} << modes.size(), 0.0), std::nullopt};
  const std::size_t n = modes.size();
  for (const auto& t : rotated.terms()) {
    std::size_t index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      int bit = 0;
      for (ModeId m : t.ket.photons()) {
        if (m.spatial() == modes[i]) bit = static_cast<int>(m.pol());
      }
      index = (index << 1) | static_cast<std::size_t>(bit);
    }
    table.probability[index] += std::norm(t.amp) / total;
  }
  return table;
}

OutcomeTable coincidence_table(const PureState& s, std::span<const Spatial> modes,
                               std::span<const AnalysisBasis> bases, const DetectorModel& det) {
  check_modes(modes, bases);
  if (det.kind == DetectorModel::Kind::kThreshold &&
      !(det.efficiency > 0.0 && det.efficiency <= 1.0)) {
    throw StateError("detector efficiency must lie in (0, 1]");
  }
  const double total = s.squared_norm();
  if (total <= 0) throw StateError("coincidence_table: zero state");
  const std::size_t n = modes.size();

  // Only terms with a photon in every analyzed mode can produce a coincidence; the wave
  // plates are local, so filter before rotating.
  StateBuilder occupied(s.size());
  for (const auto& t : s.terms()) {
    bool ok = true;
    for (Spatial m : modes) {
      if (t.ket.count_in(m) == 0) {
        ok = false;
        break;
      }
    }
    if (ok) occupied.add(t.ket, t.amp);
  }
  PureState rotated = rotate_to_analysis(std::move(occupied).build(), modes, bases);

  // Collapse the state to per-mode (H count, V count) signatures; the detector POVM only
  // depends on those numbers.
  std::map<std::vector<std::uint8_t>, double> signatures;
  std::vector<std::uint8_t> sig(2 * n);
  for (const auto& t : rotated.terms()) {
    std::fill(sig.begin(), sig.end(), 0);
    for (ModeId m : t.ket.photons()) {
      for (std::size_t i = 0; i < n; ++i) {
        if (m.spatial() == modes[i]) ++sig[2 * i + static_cast<int>(m.pol())];
      }
    }
    signatures[sig] += std::norm(t.amp);
  }

  OutcomeTable table{{modes.begin(), modes.end()}, {bases.begin(), bases.end()},
                     std::vector<double>(std::size_t{1} << n, 0.0), std::nullopt};
  const bool resolving = det.kind == DetectorModel::Kind::kResolving;
  const double miss = 1.0 - det.efficiency;
  std::vector<double> click(2 * n);
  for (const auto& [signature, w] : signatures) {
    for (std::size_t i = 0; i < n; ++i) {
      const int h = signature[2 * i], v = signature[2 * i + 1];
      if (resolving) {
        click[2 * i] = (h == 1 && v == 0) ? 1.0 : 0.0;
        click[2 * i + 1] = (h == 0 && v == 1) ? 1.0 : 0.0;
      } else {
        click[2 * i] = 1.0 - std::pow(miss, h);
        click[2 * i + 1] = 1.0 - std::pow(miss, v);
      }
    }
    for (std::size_t index = 0; index < table.size(); ++index) {
      double p = w;
      for (std::size_t i = 0; i < n && p != 0.0; ++i) {
        const std::size_t bit = (index >> (n - 1 - i)) & 1u;
        p *= click[2 * i + bit];
      }
      table.probability[index] += p / total;
    }
  }
  return table;
}

OutcomeTable sample_counts(const OutcomeTable& t, const CountModel& cm) {
  if (!(cm.expected_total >= 0.0) || !std::isfinite(cm.expected_total)) {
    throw StateError("sample_counts: expected_total must be finite and non-negative");
  }
  OutcomeTable out = t;
  std::vector<std::int64_t> counts(t.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double mean = cm.expected_total * t.probability[i];
    if (mean <= 0.0) continue;
    std::seed_seq seq{static_cast<std::uint32_t>(cm.rng_seed),
                      static_cast<std::uint32_t>(cm.rng_seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    std::poisson_distribution<std::int64_t> dist(mean);
    counts[i] = dist(rng);
  }
  out.counts = std::move(counts);
  return out;
}

double visibility(double n_max, double n_min) {
  const double sum = n_max + n_min;
  if (!(sum > 0.0)) throw StateError("visibility: both counts are zero");
  return (n_max - n_min) / sum;
}

namespace {

std::vector<double> table_values(const OutcomeTable& t) {
  if (t.counts) return {t.counts->begin(), t.counts->end()};
  return t.probability;
}

void split(const OutcomeTable& t, const std::set<std::string>& desired, std::vector<double>& in,
           std::vector<double>& out) {
  const auto values = table_values(t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    (desired.contains(t.outcome_label(i)) ? in : out).push_back(values[i]);
  }
  if (in.empty() || out.empty()) {
    throw StateError("snr: desired set and its complement must both be nonempty");
  }
}

}  // namespace

double snr(const OutcomeTable& t, const std::set<std::string>& desired) {
  std::vector<double> in, out;
  split(t, desired, in, out);
  double a = 0, b = 0;
  for (double x : in) a += x;
  for (double x : out) b += x;
  a /= in.size();
  b /= out.size();
  if (b == 0.0) return kInfiniteSnr;
  return a / b;
}

double snr_min_max(const OutcomeTable& t, const std::set<std::string>& desired) {
  std::vector<double> in, out;
  split(t, desired, in, out);
  const double lo = *std::min_element(in.begin(), in.end());
  const double hi = *std::max_element(out.begin(), out.end());
  if (hi == 0.0) return kInfiniteSnr;
  return lo / hi;
}

std::string to_csv(const OutcomeTable& t) {
  std::ostringstream os;
  os.precision(17);
  os << "outcome,basis,probability,count\n";
  const std::string basis = t.basis_label();
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << t.outcome_label(i) << "," << basis << "," << t.probability[i] << ",";
    if (t.counts) os << (*t.counts)[i];
    os << "\n";
  }
  return os.str();
}

namespace {

std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

OutcomeTable outcome_table_from_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "outcome,basis,probability,count") {
    throw StateError("outcome CSV: missing header");
  }
  OutcomeTable t;
  std::vector<std::int64_t> counts;
  bool has_counts = false, first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_fields(line, ',');
    if (f.size() != 4) throw StateError("outcome CSV: expected four columns");
    if (first) {
      for (const auto& part : split_fields(f[1], '/')) {
        auto at = part.find('@');
        if (at == std::string::npos) throw StateError("outcome CSV: bad basis column");
        t.bases.push_back(parse_basis(part.substr(0, at)));
        t.modes.push_back(Spatial{std::stoi(part.substr(at + 1))});
      }
      t.probability.assign(std::size_t{1} << t.modes.size(), 0.0);
      counts.assign(t.probability.size(), 0);
      has_counts = !f[3].empty();
      first = false;
    }
    auto index = t.find(f[0]);
    if (!index) throw StateError("outcome CSV: bad outcome '" + f[0] + "'");
    t.probability[*index] = std::stod(f[2]);
    if (has_counts) counts[*index] = std::stoll(f[3]);
  }
  if (first) throw StateError("outcome CSV: no rows");
  if (has_counts) t.counts = std::move(counts);
  return t;
}

}  // namespace polsim

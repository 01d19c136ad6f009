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

#ifndef POLSIM_MEASUREMENT_H
#define POLSIM_MEASUREMENT_H

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "polsim/elements.h"
#include "polsim/fock.h"

namespace polsim {

/// Per-mode polarization analysis. RL is realized as a quarter-wave plate followed by PM.
enum class AnalysisBasis { HV, PM, RL };

std::string_view basis_name(AnalysisBasis b);
AnalysisBasis parse_basis(std::string_view name);

/// The axis registered for outcome bit 0 or 1 of a basis (HV: H/V, PM: +/-, RL: R/L).
Axis outcome_axis(AnalysisBasis b, int bit);

/// How a detector behind a polarizer turns photons into clicks.
struct DetectorModel {
  enum class Kind {
    /// Unit efficiency, number resolving: a coincidence needs exactly one photon in the mode,
    /// transmitted by the analyzer. Matches one-photon-per-mode post-selection.
    kResolving,
    /// Bucket detector with efficiency eta: clicks with probability 1 - (1 - eta)^m for m
    /// transmitted photons.
    kThreshold,
  };
  Kind kind = Kind::kResolving;
  double efficiency = 1.0;

  static DetectorModel resolving() { return {}; }
  static DetectorModel threshold(double eta) { return {Kind::kThreshold, eta}; }

  friend bool operator==(const DetectorModel&, const DetectorModel&) = default;
};

/// Outcome probabilities (and optionally sampled counts) over named spatial modes.
///
/// Outcome `k` is the bitstring whose bit i (most significant first, i.e. modes[0]) selects
/// outcome_axis(bases[i], bit). Probabilities may sum to less than one for conditioned tables.
struct OutcomeTable {
  std::vector<Spatial> modes;
  std::vector<AnalysisBasis> bases;
  std::vector<double> probability;
  std::optional<std::vector<std::int64_t>> counts;

  std::size_t size() const { return probability.size(); }
  std::string outcome_label(std::size_t index) const;
  std::string basis_label() const;
  std::optional<std::size_t> find(std::string_view outcome) const;
  double total() const;

  friend bool operator==(const OutcomeTable&, const OutcomeTable&) = default;
};

struct CountModel {
  double expected_total = 0.0;
  std::uint64_t rng_seed = 0;
};

struct PostSelected {
  PureState state;
  double prob = 0.0;
};

/// Keeps terms with exactly one photon in each listed mode; renormalizes.
/// `prob` is the surviving squared norm relative to the input.
PostSelected post_select_one_per_mode(const PureState& s, std::span<const Spatial> modes);

/// Rotates every listed mode so outcome bit 0 of its basis maps to H and bit 1 to V.
PureState rotate_to_analysis(const PureState& s, std::span<const Spatial> modes,
                             std::span<const AnalysisBasis> bases);

/// Joint outcome distribution of a state with one photon per listed mode; temporal bins
/// are summed incoherently. Throws on photon-number violations.
OutcomeTable outcome_distribution(const PureState& s, std::span<const Spatial> modes,
                                  std::span<const AnalysisBasis> bases);

/// Coincidence probability of every analyzer setting for an unconditioned state, given a
/// detector model. Unlike outcome_distribution this accepts any photon-number content.
OutcomeTable coincidence_table(const PureState& s, std::span<const Spatial> modes,
                               std::span<const AnalysisBasis> bases, const DetectorModel& det);

/// Poisson counts with mean expected_total * probability; each outcome draws from its own
/// stream seeded by (rng_seed, outcome index).
OutcomeTable sample_counts(const OutcomeTable& t, const CountModel& cm);

/// (n_max - n_min) / (n_max + n_min).
double visibility(double n_max, double n_min);

inline constexpr double kInfiniteSnr = std::numeric_limits<double>::infinity();

/// Mean of the desired entries over the mean of all others (counts when present).
/// Returns kInfiniteSnr when the noise floor is exactly zero.
double snr(const OutcomeTable& t, const std::set<std::string>& desired);

/// Secondary statistic: smallest desired entry over largest undesired entry.
double snr_min_max(const OutcomeTable& t, const std::set<std::string>& desired);

std::string to_csv(const OutcomeTable& t);
OutcomeTable outcome_table_from_csv(std::string_view csv);

}  // namespace polsim

#endif  // POLSIM_MEASUREMENT_H

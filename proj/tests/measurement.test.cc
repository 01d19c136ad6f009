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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracle.h"
#include "polsim/sources.h"
#include "test_util.h"

namespace polsim {
namespace {

using testing::pol_ket;

PureState ghz_state(int n) {
  std::vector<int> modes;
  for (int i = 1; i <= n; ++i) modes.push_back(i);
  return PureState::from_terms({{pol_ket(modes, std::string(n, 'H')), M_SQRT1_2},
                                {pol_ket(modes, std::string(n, 'V')), M_SQRT1_2}});
}

std::vector<Spatial> spatials(int n) {
  std::vector<Spatial> out;
  for (int i = 1; i <= n; ++i) out.push_back(Spatial{i});
  return out;
}

TEST(outcome_table, labels_and_lookup) {
  OutcomeTable t{{Spatial{1}, Spatial{2}}, {AnalysisBasis::PM, AnalysisBasis::RL},
                 {0.1, 0.2, 0.3, 0.4}, std::nullopt};
  EXPECT_EQ(t.outcome_label(0), "+R");
  EXPECT_EQ(t.outcome_label(3), "-L");
  EXPECT_EQ(t.find("-R"), 2u);
  EXPECT_FALSE(t.find("HH").has_value());
  EXPECT_NEAR(t.total(), 1.0, 1e-15);
}

TEST(post_select_one_per_mode, bunched_state_has_zero_probability) {
  auto s = PureState::from_terms(
      {{BasisKet(std::vector<ModeId>{ModeId(Spatial{3}, Pol::H), ModeId(Spatial{3}, Pol::V)}),
        1.0}});
  const Spatial m[] = {Spatial{3}, Spatial{4}};
  EXPECT_EQ(post_select_one_per_mode(s, m).prob, 0.0);
}

TEST(outcome_distribution, five_photon_ghz_hv) {
  auto modes = spatials(5);
  std::vector<AnalysisBasis> hv(5, AnalysisBasis::HV);
  auto t = outcome_distribution(ghz_state(5), modes, hv);
  ASSERT_EQ(t.size(), 32u);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto label = t.outcome_label(i);
    const double expected = (label == "HHHHH" || label == "VVVVV") ? 0.5 : 0.0;
    EXPECT_NEAR(t.probability[i], expected, 1e-14) << label;
  }
}

TEST(outcome_distribution, five_photon_ghz_pm_has_sixteen_odd_plus_outcomes) {
  auto modes = spatials(5);
  std::vector<AnalysisBasis> pm(5, AnalysisBasis::PM);
  auto t = outcome_distribution(ghz_state(5), modes, pm);
  int nonzero = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto label = t.outcome_label(i);
    const auto plus = std::count(label.begin(), label.end(), '+');
    if (t.probability[i] > 1e-12) {
      ++nonzero;
      EXPECT_EQ(plus % 2, 1) << label;
      EXPECT_NEAR(t.probability[i], 1.0 / 16, 1e-12) << label;
    }
  }
  EXPECT_EQ(nonzero, 16);
}

TEST(outcome_distribution, parity_law_matches_oracle) {
  for (int n = 2; n <= 5; ++n) {
    auto modes = spatials(n);
    std::vector<AnalysisBasis> pm(n, AnalysisBasis::PM);
    auto t = outcome_distribution(ghz_state(n), modes, pm);
    oracle::Dense psi(std::size_t{1} << n);
    psi.front() = M_SQRT1_2;
    psi.back() = M_SQRT1_2;
    auto ref = oracle::distribution(psi, std::vector<int>(n, 1));
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto label = t.outcome_label(i);
      const auto minus = std::count(label.begin(), label.end(), '-');
      EXPECT_NEAR(t.probability[i], ref[i], 1e-12);
      EXPECT_NEAR(t.probability[i], minus % 2 == 0 ? 1.0 / (1 << (n - 1)) : 0.0, 1e-12);
    }
  }
}

TEST(outcome_distribution, phi_plus_pm_correlations) {
  auto modes = spatials(2);
  const AnalysisBasis pm[] = {AnalysisBasis::PM, AnalysisBasis::PM};
  auto t = outcome_distribution(bell_pair(BellKind::PhiPlus, Spatial{1}, Spatial{2}), modes, pm);
  EXPECT_NEAR(t.probability[*t.find("++")], 0.5, 1e-14);
  EXPECT_NEAR(t.probability[*t.find("--")], 0.5, 1e-14);
}

TEST(outcome_distribution, random_states_match_oracle_in_every_basis) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<int> ids{1, 2, 3};
    auto s = testing::random_pol_state(rng, ids);
    auto psi = testing::to_dense(s, ids);
    auto modes = spatials(3);
    for (int code = 0; code < 27; ++code) {
      std::vector<int> b{code % 3, (code / 3) % 3, code / 9};
      std::vector<AnalysisBasis> bases;
      for (int x : b) bases.push_back(static_cast<AnalysisBasis>(x));
      auto t = outcome_distribution(s, modes, bases);
      auto ref = oracle::distribution(psi, b);
      EXPECT_NEAR(t.total(), 1.0, 1e-9);
      for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t.probability[i], ref[i], 1e-12);
    }
  }
}

TEST(outcome_distribution, rejects_photon_number_violation) {
  auto s = single_photon(Spatial{1}, PolState::H());
  const Spatial m[] = {Spatial{1}, Spatial{2}};
  const AnalysisBasis b[] = {AnalysisBasis::HV, AnalysisBasis::HV};
  EXPECT_THROW(outcome_distribution(s, m, b), StateError);
}

TEST(coincidence_table, resolving_matches_outcome_distribution_on_post_selected_state) {
  auto s = ghz_state(3);
  auto modes = spatials(3);
  std::vector<AnalysisBasis> rl(3, AnalysisBasis::RL);
  auto a = coincidence_table(s, modes, rl, DetectorModel::resolving());
  auto b = outcome_distribution(s, modes, rl);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.probability[i], b.probability[i], 1e-14);
}

TEST(coincidence_table, threshold_click_probability) {
  // Two H photons in one mode: a threshold detector fires with 1 - (1 - eta)^2.
  const double eta = 0.6;
  auto s = PureState::from_terms(
      {{BasisKet(std::vector<ModeId>{ModeId(Spatial{1}, Pol::H), ModeId(Spatial{1}, Pol::H)}),
        1.0}});
  const Spatial m[] = {Spatial{1}};
  const AnalysisBasis hv[] = {AnalysisBasis::HV};
  auto t = coincidence_table(s, m, hv, DetectorModel::threshold(eta));
  EXPECT_NEAR(t.probability[0], 1 - (1 - eta) * (1 - eta), 1e-14);
  EXPECT_EQ(t.probability[1], 0.0);
  auto r = coincidence_table(s, m, hv, DetectorModel::resolving());
  EXPECT_EQ(r.probability[0], 0.0);
  EXPECT_THROW(coincidence_table(s, m, hv, DetectorModel::threshold(0.0)), StateError);
}

TEST(sample_counts, zero_total_gives_zero_counts) {
  auto t = outcome_distribution(ghz_state(3), spatials(3), std::vector<AnalysisBasis>(3));
  auto c = sample_counts(t, {0.0, 1});
  for (auto x : *c.counts) EXPECT_EQ(x, 0);
}

TEST(sample_counts, poisson_mean) {
  OutcomeTable t{{Spatial{1}}, {AnalysisBasis::HV}, {1.0, 0.0}, std::nullopt};
  double sum = 0;
  const int seeds = 400;
  for (int seed = 0; seed < seeds; ++seed) {
    auto c = sample_counts(t, {100.0, static_cast<std::uint64_t>(seed)});
    EXPECT_EQ((*c.counts)[1], 0);
    sum += (*c.counts)[0];
  }
  // Standard error of the mean is 10 / sqrt(400) = 0.5.
  EXPECT_NEAR(sum / seeds, 100.0, 3 * 0.5);
}

TEST(sample_counts, reproducible) {
  auto t = outcome_distribution(ghz_state(5), spatials(5),
                                std::vector<AnalysisBasis>(5, AnalysisBasis::PM));
  auto a = sample_counts(t, {1000.0, 42});
  auto b = sample_counts(t, {1000.0, 42});
  auto c = sample_counts(t, {1000.0, 43});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(visibility, examples) {
  EXPECT_DOUBLE_EQ(visibility(100, 0), 1.0);
  EXPECT_DOUBLE_EQ(visibility(100, 100), 0.0);
  EXPECT_NEAR(visibility(100, 25.8), 0.59, 0.005);
  EXPECT_THROW(visibility(0, 0), StateError);
}

TEST(snr, examples) {
  auto t = outcome_distribution(ghz_state(5), spatials(5), std::vector<AnalysisBasis>(5));
  const std::set<std::string> desired{"HHHHH", "VVVVV"};
  EXPECT_EQ(snr(t, desired), kInfiniteSnr);
  EXPECT_EQ(snr_min_max(t, desired), kInfiniteSnr);

  OutcomeTable uniform{spatials(2), std::vector<AnalysisBasis>(2),
                       std::vector<double>(4, 0.25), std::nullopt};
  EXPECT_DOUBLE_EQ(snr(uniform, {"HH"}), 1.0);

  OutcomeTable skew{spatials(2), std::vector<AnalysisBasis>(2), {0.4, 0.1, 0.2, 0.3},
                    std::nullopt};
  EXPECT_DOUBLE_EQ(snr(skew, {"HH", "VV"}), 0.35 / 0.15);
  EXPECT_DOUBLE_EQ(snr_min_max(skew, {"HH", "VV"}), 0.3 / 0.2);
  EXPECT_THROW(snr(skew, {}), StateError);
}

TEST(snr, uses_counts_when_present) {
  OutcomeTable t{spatials(1), {AnalysisBasis::HV}, {0.5, 0.5}, std::vector<std::int64_t>{40, 1}};
  EXPECT_DOUBLE_EQ(snr(t, {"H"}), 40.0);
}

TEST(outcome_table_csv, round_trip) {
  auto t = outcome_distribution(bell_pair(BellKind::PsiMinus, Spatial{1}, Spatial{2}),
                                spatials(2), std::vector<AnalysisBasis>{AnalysisBasis::RL,
                                                                        AnalysisBasis::PM});
  EXPECT_EQ(outcome_table_from_csv(to_csv(t)), t);
  auto c = sample_counts(t, {500.0, 9});
  EXPECT_EQ(outcome_table_from_csv(to_csv(c)), c);
  EXPECT_THROW(outcome_table_from_csv("nope\n"), StateError);
}

TEST(parse_basis, names) {
  EXPECT_EQ(parse_basis("RL"), AnalysisBasis::RL);
  EXPECT_EQ(basis_name(AnalysisBasis::PM), "PM");
  EXPECT_ANY_THROW(parse_basis("XY"));
}

}  // namespace
}  // namespace polsim

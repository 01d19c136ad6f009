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

#ifndef POLSIM_FOCK_H
#define POLSIM_FOCK_H

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace polsim {

using Amplitude = std::complex<double>;

/// Amplitudes smaller than this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-14;

/// Hard capacity of a basis ket. Sources and creation operators refuse to go past it.
inline constexpr int kMaxPhotons = 10;

/// Raised whenever a state operation's preconditions are violated.
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spatial mode label. Detector outputs are 1..5; sources emit into internal labels.
struct Spatial {
  int id = 0;
  friend constexpr auto operator<=>(Spatial, Spatial) = default;
};

enum class Pol : std::uint8_t { H = 0, V = 1 };

/// One optical mode: spatial label x polarization x temporal bin.
///
/// Packed into 16 bits so kets stay small; the packing order (spatial, tbin, pol) is the
/// canonical total order on modes.
class ModeId {
 public:
  static constexpr int kMaxSpatial = 255;
  static constexpr int kMaxTbin = 127;

  constexpr ModeId() = default;
  ModeId(Spatial spatial, Pol pol, int tbin = 0);

  static constexpr ModeId from_key(std::uint16_t key) {
    ModeId m;
    m.key_ = key;
    return m;
  }

  Spatial spatial() const { return Spatial{key_ >> 8}; }
  Pol pol() const { return static_cast<Pol>(key_ & 1u); }
  int tbin() const { return (key_ >> 1) & 0x7f; }
  std::uint16_t key() const { return key_; }

  ModeId with_pol(Pol p) const { return ModeId(spatial(), p, tbin()); }
  ModeId with_spatial(Spatial s) const { return ModeId(s, pol(), tbin()); }

  friend constexpr auto operator<=>(ModeId, ModeId) = default;

  std::string to_string() const;

 private:
  std::uint16_t key_ = 0;
};

/// One Fock basis vector: a multiset of occupied modes kept as a sorted photon list.
class BasisKet {
 public:
  BasisKet() = default;
  explicit BasisKet(std::span<const ModeId> photons);

  int photon_count() const { return n_; }
  std::span<const ModeId> photons() const { return {modes_.data(), n_}; }

  int count(ModeId mode) const;
  int count_in(Spatial spatial) const;

  /// The ket with one more photon in `mode`. Throws when the capacity is exhausted.
  BasisKet with_photon(ModeId mode) const;

  /// Sorted (mode, count) pairs, counts >= 1.
  std::vector<std::pair<ModeId, int>> occupations() const;

  /// Product of occupation factorials; enters the bosonic normalization.
  double factorial_product() const;

  friend bool operator==(const BasisKet& a, const BasisKet& b) {
    return a.n_ == b.n_ && std::equal(a.modes_.begin(), a.modes_.begin() + a.n_, b.modes_.begin());
  }
  friend std::strong_ordering operator<=>(const BasisKet& a, const BasisKet& b);

  std::size_t hash() const;
  std::string to_string() const;

 private:
  std::array<ModeId, kMaxPhotons> modes_{};
  std::uint8_t n_ = 0;
};

struct BasisKetHash {
  std::size_t operator()(const BasisKet& k) const { return k.hash(); }
};

struct Term {
  BasisKet ket;
  Amplitude amp;
};

/// Sparse superposition over canonical kets.
///
/// Values are immutable once built; every operation returns a new state. `weight()` is the
/// cumulative heralding probability that produced this state: it starts at 1, multiplies
/// under tensor products, and picks up the discarded norm whenever a state is renormalized.
class StateBuilder;

class PureState {
 public:
  /// The zero vector.
  PureState() = default;

  static PureState vacuum();
  static PureState from_terms(std::vector<Term> terms, double weight = 1.0);

  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  double weight() const { return weight_; }
  PureState with_weight(double w) const {
    PureState c = *this;
    c.weight_ = w;
    return c;
  }

  Amplitude amplitude(const BasisKet& ket) const;
  double squared_norm() const;
  std::vector<Spatial> spatial_labels() const;
  int max_photon_number() const;

  std::string to_string() const;

 private:
  friend class StateBuilder;
  std::vector<Term> terms_;
  double weight_ = 1.0;
};

/// Accumulates amplitudes for arbitrary kets; `build()` merges, prunes, and sorts.
class StateBuilder {
 public:
  explicit StateBuilder(std::size_t reserve = 0);
  void add(const BasisKet& ket, Amplitude amp);
  PureState build(double weight = 1.0) &&;

 private:
  std::vector<Term> pending_;
};

/// Where a single creation operator goes under a linear-optical map (at most two images).
struct ModeImage {
  int size = 0;
  std::array<ModeId, 2> modes{};
  std::array<Amplitude, 2> coeffs{};

  static ModeImage identity(ModeId m) { return {1, {m, m}, {Amplitude{1.0}, Amplitude{}}}; }
  void add(ModeId m, Amplitude c);
};

using ModeMap = std::function<ModeImage(ModeId)>;

/// Rewrites every creation operator a^dagger(m) as sum_k c_k a^dagger(m_k) and re-expands the
/// product on the vacuum with bosonic factors. This is the single kernel behind every element.
PureState transform_modes(const PureState& s, const ModeMap& map);

/// Applies sum_k c_k a^dagger(m_k) to the state (sqrt(n+1) per occupied mode).
PureState create(const PureState& s, std::span<const std::pair<ModeId, Amplitude>> op);

/// Scales every amplitude by `c`.
PureState scale(const PureState& s, Amplitude c);

/// a + b (weight taken from `a`).
PureState add(const PureState& a, const PureState& b);

/// Product state. Operands must occupy disjoint spatial labels.
PureState tensor(const PureState& a, const PureState& b);

/// <a|b>, antilinear in the first argument.
Amplitude inner(const PureState& a, const PureState& b);

struct Normalized {
  PureState state;
  double weight;
};

/// Rescales to unit norm. `weight` is the input squared norm. Throws on the zero state.
Normalized normalize(const PureState& s);

/// Drops every term with more than `max_photons` photons (no renormalization).
PureState truncate_photon_number(const PureState& s, int max_photons);

/// Moves every photon in `from` to `to`. `to` must be empty.
PureState relabel(const PureState& s, Spatial from, Spatial to);

/// Single-qubit polarization state held as a 2x2 density matrix over (H, V).
class PolState {
 public:
  static constexpr double kPureTolerance = 1e-10;

  PolState() : PolState(pure(1.0, 0.0)) {}

  /// Throws unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
  static PolState pure(Amplitude alpha, Amplitude beta);
  /// Throws unless rho is Hermitian, PSD, and trace one (all within 1e-12).
  static PolState mixed(const Eigen::Matrix2cd& rho);

  static PolState H() { return pure(1.0, 0.0); }
  static PolState V() { return pure(0.0, 1.0); }
  static PolState plus();
  static PolState minus();
  static PolState R();
  static PolState L();

  const Eigen::Matrix2cd& density() const { return rho_; }
  bool is_pure() const { return ket_.has_value(); }
  /// Pure states only; phase fixed so the first nonzero component is real and positive.
  const std::optional<Eigen::Vector2cd>& ket() const { return ket_; }
  double purity() const;
  Eigen::Vector2d eigenvalues() const;
  /// (x, y, z) with rho = (I + xX + yY + zZ) / 2; +x is |+>, +y is |R>, +z is |H>.
  Eigen::Vector3d bloch_vector() const;

 private:
  PolState(const Eigen::Matrix2cd& rho, std::optional<Eigen::Vector2cd> ket)
      : rho_(rho), ket_(std::move(ket)) {}

  Eigen::Matrix2cd rho_;
  std::optional<Eigen::Vector2cd> ket_;
};

/// Reduced polarization state of the single photon in `spatial`, tracing everything else
/// including its own temporal bin. Requires exactly one photon there in every term.
PolState extract_pol_qubit(const PureState& s, Spatial spatial);

/// <target|rho|target>. Throws if `target` is mixed.
double fidelity(const PolState& s, const PolState& target);

}  // namespace polsim

#endif  // POLSIM_FOCK_H

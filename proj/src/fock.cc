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

#include "polsim/fock.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace polsim {

namespace {

constexpr std::array<double, kMaxPhotons + 1> kFactorial = [] {
  std::array<double, kMaxPhotons + 1> f{};
  f[0] = 1.0;
  for (int i = 1; i <= kMaxPhotons; ++i) f[i] = f[i - 1] * i;
  return f;
}();

}  // namespace

ModeId::ModeId(Spatial spatial, Pol pol, int tbin) {
  if (spatial.id < 0 || spatial.id > kMaxSpatial) {
    throw StateError("spatial label out of range: " + std::to_string(spatial.id));
  }
  if (tbin < 0 || tbin > kMaxTbin) {
    throw StateError("temporal bin out of range: " + std::to_string(tbin));
  }
  key_ = static_cast<std::uint16_t>((spatial.id << 8) | (tbin << 1) | static_cast<int>(pol));
}

std::string ModeId::to_string() const {
  std::string s = (pol() == Pol::H ? "H" : "V");
  s += std::to_string(spatial().id);
  if (tbin() != 0) s += "@" + std::to_string(tbin());
  return s;
}

BasisKet::BasisKet(std::span<const ModeId> photons) {
  if (photons.size() > static_cast<std::size_t>(kMaxPhotons)) {
    throw StateError("photon number exceeds capacity of " + std::to_string(kMaxPhotons));
  }
  std::copy(photons.begin(), photons.end(), modes_.begin());
  n_ = static_cast<std::uint8_t>(photons.size());
  std::sort(modes_.begin(), modes_.begin() + n_);
}

int BasisKet::count(ModeId mode) const {
  auto [lo, hi] = std::equal_range(modes_.begin(), modes_.begin() + n_, mode);
  return static_cast<int>(hi - lo);
}

int BasisKet::count_in(Spatial spatial) const {
  int c = 0;
  for (int i = 0; i < n_; ++i) c += (modes_[i].spatial() == spatial);
  return c;
}

BasisKet BasisKet::with_photon(ModeId mode) const {
  if (n_ >= kMaxPhotons) {
    throw StateError("photon number exceeds capacity of " + std::to_string(kMaxPhotons));
  }
  BasisKet out;
  auto pos = std::upper_bound(modes_.begin(), modes_.begin() + n_, mode);
  auto it = std::copy(modes_.begin(), pos, out.modes_.begin());
  *it++ = mode;
  std::copy(pos, modes_.begin() + n_, it);
  out.n_ = static_cast<std::uint8_t>(n_ + 1);
  return out;
}

std::vector<std::pair<ModeId, int>> BasisKet::occupations() const {
  std::vector<std::pair<ModeId, int>> occ;
  for (int i = 0; i < n_; ++i) {
    if (!occ.empty() && occ.back().first == modes_[i]) {
      ++occ.back().second;
    } else {
      occ.emplace_back(modes_[i], 1);
    }
  }
  return occ;
}

double BasisKet::factorial_product() const {
  double f = 1.0;
  int run = 1;
  for (int i = 1; i <= n_; ++i) {
    if (i < n_ && modes_[i] == modes_[i - 1]) {
      ++run;
    } else {
      f *= kFactorial[run];
      run = 1;
    }
  }
  return f;
}

std::strong_ordering operator<=>(const BasisKet& a, const BasisKet& b) {
  return std::lexicographical_compare_three_way(a.modes_.begin(), a.modes_.begin() + a.n_,
                                                b.modes_.begin(), b.modes_.begin() + b.n_);
}

std::size_t BasisKet::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (int i = 0; i < n_; ++i) {
    h ^= modes_[i].key();
    h *= 1099511628211ULL;
  }
  h ^= n_;
  return static_cast<std::size_t>(h);
}

std::string BasisKet::to_string() const {
  if (n_ == 0) return "|vac>";
  std::string s = "|";
  for (auto [mode, c] : occupations()) {
    if (s.size() > 1) s += ",";
    if (c > 1) s += std::to_string(c);
    s += mode.to_string();
  }
  return s + ">";
}

PureState PureState::vacuum() { return from_terms({Term{BasisKet{}, Amplitude{1.0}}}); }

PureState PureState::from_terms(std::vector<Term> terms, double weight) {
  StateBuilder b;
  for (const auto& t : terms) b.add(t.ket, t.amp);
  return std::move(b).build(weight);
}

Amplitude PureState::amplitude(const BasisKet& ket) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), ket,
                             [](const Term& t, const BasisKet& k) { return t.ket < k; });
  if (it != terms_.end() && it->ket == ket) return it->amp;
  return {};
}

double PureState::squared_norm() const {
  double n = 0;
  for (const auto& t : terms_) n += std::norm(t.amp);
  return n;
}

std::vector<Spatial> PureState::spatial_labels() const {
  std::set<Spatial> labels;
  for (const auto& t : terms_) {
    for (ModeId m : t.ket.photons()) labels.insert(m.spatial());
  }
  return {labels.begin(), labels.end()};
}

int PureState::max_photon_number() const {
  int n = 0;
  for (const auto& t : terms_) n = std::max(n, t.ket.photon_count());
  return n;
}

std::string PureState::to_string() const {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << t.amp.real() << (t.amp.imag() < 0 ? "-" : "+") << std::abs(t.amp.imag()) << "i)"
       << t.ket.to_string();
  }
  if (first) os << "0";
  return os.str();
}

StateBuilder::StateBuilder(std::size_t reserve) { pending_.reserve(reserve); }

void StateBuilder::add(const BasisKet& ket, Amplitude amp) { pending_.push_back({ket, amp}); }

PureState StateBuilder::build(double weight) && {
  std::sort(pending_.begin(), pending_.end(),
            [](const Term& a, const Term& b) { return a.ket < b.ket; });
  PureState s;
  s.weight_ = weight;
  std::size_t i = 0;
  while (i < pending_.size()) {
    Amplitude sum{};
    std::size_t j = i;
    for (; j < pending_.size() && pending_[j].ket == pending_[i].ket; ++j) sum += pending_[j].amp;
    if (std::abs(sum) >= kPruneThreshold) s.terms_.push_back({pending_[i].ket, sum});
    i = j;
  }
  return s;
}

void ModeImage::add(ModeId m, Amplitude c) {
  if (c == Amplitude{}) return;
  for (int i = 0; i < size; ++i) {
    if (modes[i] == m) {
      coeffs[i] += c;
      return;
    }
  }
  if (size == 2) throw StateError("mode image supports at most two targets");
  modes[size] = m;
  coeffs[size] = c;
  ++size;
}

PureState transform_modes(const PureState& s, const ModeMap& map) {
  std::unordered_map<std::uint16_t, ModeImage> cache;
  auto image_of = [&](ModeId m) -> const ModeImage& {
    auto it = cache.find(m.key());
    if (it == cache.end()) it = cache.emplace(m.key(), map(m)).first;
    return it->second;
  };

  StateBuilder out(s.size() * 2);
  std::array<const ModeImage*, kMaxPhotons> images{};
  std::array<ModeId, kMaxPhotons> chosen{};
  for (const auto& term : s.terms()) {
    auto photons = term.ket.photons();
    const int n = static_cast<int>(photons.size());
    bool annihilated = false;
    for (int i = 0; i < n; ++i) {
      images[i] = &image_of(photons[i]);
      if (images[i]->size == 0) annihilated = true;
    }
    if (annihilated) continue;
    const Amplitude base = term.amp / std::sqrt(term.ket.factorial_product());

    // Mixed-radix walk over the image choice of each photon.
    std::array<int, kMaxPhotons> digit{};
    while (true) {
      Amplitude a = base;
      for (int i = 0; i < n; ++i) {
        chosen[i] = images[i]->modes[digit[i]];
        a *= images[i]->coeffs[digit[i]];
      }
      if (a != Amplitude{}) {
        BasisKet ket(std::span<const ModeId>(chosen.data(), n));
        out.add(ket, a * std::sqrt(ket.factorial_product()));
      }
      int i = 0;
      for (; i < n; ++i) {
        if (++digit[i] < images[i]->size) break;
        digit[i] = 0;
      }
      if (i == n) break;
    }
  }
  return std::move(out).build(s.weight());
}

PureState create(const PureState& s, std::span<const std::pair<ModeId, Amplitude>> op) {
  StateBuilder out(s.size() * op.size());
  for (const auto& term : s.terms()) {
    for (const auto& [mode, c] : op) {
      BasisKet next = term.ket.with_photon(mode);
      out.add(next, term.amp * c * std::sqrt(static_cast<double>(next.count(mode))));
    }
  }
  return std::move(out).build(s.weight());
}

PureState scale(const PureState& s, Amplitude c) {
  StateBuilder out(s.size());
  for (const auto& t : s.terms()) out.add(t.ket, t.amp * c);
  return std::move(out).build(s.weight());
}

PureState add(const PureState& a, const PureState& b) {
  StateBuilder out(a.size() + b.size());
  for (const auto& t : a.terms()) out.add(t.ket, t.amp);
  for (const auto& t : b.terms()) out.add(t.ket, t.amp);
  return std::move(out).build(a.weight());
}

PureState tensor(const PureState& a, const PureState& b) {
  auto la = a.spatial_labels();
  auto lb = b.spatial_labels();
  std::vector<Spatial> common;
  std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(common));
  if (!common.empty()) {
    throw StateError("tensor: operands share spatial label " + std::to_string(common[0].id));
  }
  StateBuilder out(a.size() * b.size());
  std::array<ModeId, kMaxPhotons> buf{};
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      const auto pa = ta.ket.photons();
      const auto pb = tb.ket.photons();
      if (pa.size() + pb.size() > static_cast<std::size_t>(kMaxPhotons)) {
        throw StateError("tensor: photon number exceeds capacity of " +
                         std::to_string(kMaxPhotons));
      }
      auto it = std::copy(pa.begin(), pa.end(), buf.begin());
      std::copy(pb.begin(), pb.end(), it);
      // Disjoint modes, so the bosonic factors simply multiply through.
      out.add(BasisKet(std::span<const ModeId>(buf.data(), pa.size() + pb.size())),
              ta.amp * tb.amp);
    }
  }
  return std::move(out).build(a.weight() * b.weight());
}

Amplitude inner(const PureState& a, const PureState& b) {
  Amplitude sum{};
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() && ib != b.terms().end()) {
    auto c = ia->ket <=> ib->ket;
    if (c < 0) {
      ++ia;
    } else if (c > 0) {
      ++ib;
    } else {
      sum += std::conj(ia->amp) * ib->amp;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

Normalized normalize(const PureState& s) {
  const double n2 = s.squared_norm();
  if (s.empty() || n2 <= 0.0) throw StateError("post-selection annihilated state");
  StateBuilder out(s.size());
  const double inv = 1.0 / std::sqrt(n2);
  for (const auto& t : s.terms()) out.add(t.ket, t.amp * inv);
  return {std::move(out).build(s.weight() * n2), n2};
}

PureState truncate_photon_number(const PureState& s, int max_photons) {
  StateBuilder out(s.size());
  for (const auto& t : s.terms()) {
    if (t.ket.photon_count() <= max_photons) out.add(t.ket, t.amp);
  }
  return std::move(out).build(s.weight());
}

PureState relabel(const PureState& s, Spatial from, Spatial to) {
  if (from == to) return s;
  for (const auto& t : s.terms()) {
    if (t.ket.count_in(to) != 0) {
      throw StateError("relabel: target label " + std::to_string(to.id) + " is occupied");
    }
  }
  return transform_modes(s, [&](ModeId m) {
    return m.spatial() == from ? ModeImage::identity(m.with_spatial(to)) : ModeImage::identity(m);
  });
}

PolState PolState::pure(Amplitude alpha, Amplitude beta) {
  const double n = std::norm(alpha) + std::norm(beta);
  if (std::abs(n - 1.0) > 1e-12) {
    throw StateError("pure polarization state must be normalized");
  }
  Eigen::Vector2cd k(alpha, beta);
  // Fix the global phase: first nonzero component real and positive.
  const Amplitude lead = std::abs(alpha) > 1e-15 ? alpha : beta;
  k *= std::conj(lead) / std::abs(lead);
  return PolState(k * k.adjoint(), k);
}

PolState PolState::plus() { return pure(M_SQRT1_2, M_SQRT1_2); }
PolState PolState::minus() { return pure(M_SQRT1_2, -M_SQRT1_2); }
PolState PolState::R() { return pure(M_SQRT1_2, Amplitude(0, M_SQRT1_2)); }
PolState PolState::L() { return pure(M_SQRT1_2, Amplitude(0, -M_SQRT1_2)); }

PolState PolState::mixed(const Eigen::Matrix2cd& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw StateError("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - Amplitude(1.0)) > 1e-12) {
    throw StateError("density matrix trace differs from one");
  }
  Eigen::Matrix2cd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(herm);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw StateError("density matrix is not positive semidefinite");
  }
  const double purity = (herm * herm).trace().real();
  if (purity > 1.0 - kPureTolerance) {
    Eigen::Vector2cd k = es.eigenvectors().col(1);
    k.normalize();
    const Amplitude lead = std::abs(k(0)) > 1e-15 ? k(0) : k(1);
    k *= std::conj(lead) / std::abs(lead);
    return PolState(herm, k);
  }
  return PolState(herm, std::nullopt);
}

Eigen::Vector3d PolState::bloch_vector() const {
  return {2.0 * rho_(1, 0).real(), 2.0 * rho_(1, 0).imag(), (rho_(0, 0) - rho_(1, 1)).real()};
}

double PolState::purity() const { return (rho_ * rho_).trace().real(); }

Eigen::Vector2d PolState::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho_);
  return es.eigenvalues();
}

PolState extract_pol_qubit(const PureState& s, Spatial spatial) {
  // Group amplitudes by everything except the photon's polarization: the "environment" is
  // the rest of the ket plus the photon's own temporal bin.
  std::map<BasisKet, std::array<Amplitude, 2>> by_env;
  double total = 0;
  std::array<ModeId, kMaxPhotons> rest{};
  for (const auto& t : s.terms()) {
    if (t.ket.count_in(spatial) != 1) {
      throw StateError("extract_pol_qubit: expected exactly one photon in mode " +
                       std::to_string(spatial.id));
    }
    int n = 0;
    ModeId photon;
    for (ModeId m : t.ket.photons()) {
      if (m.spatial() == spatial) {
        photon = m;
        rest[n++] = m.with_pol(Pol::H);  // keeps the tbin in the environment key
      } else {
        rest[n++] = m;
      }
    }
    by_env[BasisKet(std::span<const ModeId>(rest.data(), n))][static_cast<int>(photon.pol())] +=
        t.amp;
    total += std::norm(t.amp);
  }
  if (total <= 0) throw StateError("extract_pol_qubit: zero state");
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (const auto& [env, v] : by_env) {
    Eigen::Vector2cd a(v[0], v[1]);
    rho += a * a.adjoint();
  }
  rho /= total;
  return PolState::mixed(rho);
}

double fidelity(const PolState& s, const PolState& target) {
  if (!target.is_pure()) throw StateError("fidelity: target must be pure");
  const Eigen::Vector2cd& t = *target.ket();
  const double f = (t.adjoint() * s.density() * t)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace polsim

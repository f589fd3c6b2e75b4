// Copyright 2026 The ZWM Coherence Toolkit Authors
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

/**
 * @file
 * Sparse multimode bosonic Fock states.
 *
 * A FockState is a map from occupation vectors to complex amplitudes over a
 * shared ModeRegistry. The registry fixes the mode set, the truncation
 * (maximum total photon number) and the pruning threshold. All operations are
 * pure: they return new states and never mutate their inputs.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "zwm/errors.hpp"

namespace zwm {

using Complex = std::complex<double>;

inline constexpr int kDefaultMaxPhotons = 6;
inline constexpr double kDefaultPruneThreshold = 1e-14;

/// Handle to a registered optical mode.
struct ModeId {
  std::size_t index = 0;
  std::string label;
  std::optional<double> wavelength_nm;

  friend bool operator==(const ModeId& a, const ModeId& b) {
    return a.index == b.index && a.label == b.label && a.wavelength_nm == b.wavelength_nm;
  }
};

/// Input record used to declare a mode.
struct ModeSpec {
  std::string label;
  std::optional<double> wavelength_nm;

  ModeSpec(std::string l, std::optional<double> wl = std::nullopt) : label(std::move(l)), wavelength_nm(wl) {}
  ModeSpec(const char* l, std::optional<double> wl = std::nullopt) : label(l), wavelength_nm(wl) {}
};

/// Ordered set of named modes plus truncation settings.
class ModeRegistry {
 public:
  explicit ModeRegistry(std::vector<ModeSpec> specs, int max_photons = kDefaultMaxPhotons,
                        double prune_threshold = kDefaultPruneThreshold)
      : max_photons_(max_photons), prune_threshold_(prune_threshold) {
    if (max_photons_ < 0) throw ConfigError("max photon number must be non-negative");
    if (!(prune_threshold_ >= 0.0)) throw ConfigError("prune threshold must be non-negative");
    std::unordered_set<std::string> seen;
    for (auto& spec : specs) {
      if (spec.label.empty()) throw ConfigError("mode label must be non-empty");
      if (!seen.insert(spec.label).second)
        throw ConfigError("duplicate mode label '" + spec.label + "'");
      if (spec.wavelength_nm && !(*spec.wavelength_nm > 0.0 && std::isfinite(*spec.wavelength_nm)))
        throw ConfigError("mode '" + spec.label + "' wavelength must be positive");
      modes_.push_back(ModeId{modes_.size(), std::move(spec.label), spec.wavelength_nm});
    }
  }

  static std::shared_ptr<const ModeRegistry> make(std::vector<ModeSpec> specs,
                                                  int max_photons = kDefaultMaxPhotons,
                                                  double prune_threshold = kDefaultPruneThreshold) {
    return std::make_shared<const ModeRegistry>(std::move(specs), max_photons, prune_threshold);
  }

  std::size_t size() const noexcept { return modes_.size(); }
  bool empty() const noexcept { return modes_.empty(); }
  int max_photons() const noexcept { return max_photons_; }
  double prune_threshold() const noexcept { return prune_threshold_; }
  const std::vector<ModeId>& modes() const noexcept { return modes_; }
  const ModeId& operator[](std::size_t i) const { return modes_.at(i); }

  /// Looks a mode up by label; throws ArgumentError when absent.
  const ModeId& mode(const std::string& label) const {
    for (const auto& m : modes_)
      if (m.label == label) return m;
    throw ArgumentError("unknown mode '" + label + "'");
  }

  bool contains(const ModeId& id) const noexcept {
    return id.index < modes_.size() && modes_[id.index].label == id.label;
  }

  /// Validates a handle against this registry and returns its index.
  std::size_t require(const ModeId& id) const {
    if (!contains(id)) throw ArgumentError("mode '" + id.label + "' is not registered");
    return id.index;
  }

  friend bool operator==(const ModeRegistry& a, const ModeRegistry& b) {
    return a.max_photons_ == b.max_photons_ && a.prune_threshold_ == b.prune_threshold_ &&
           a.modes_ == b.modes_;
  }

 private:
  std::vector<ModeId> modes_;
  int max_photons_;
  double prune_threshold_;
};

/// Photon counts, one entry per registered mode.
struct OccupationVector {
  std::vector<int> counts;

  OccupationVector() = default;
  explicit OccupationVector(std::vector<int> c) : counts(std::move(c)) {}
  OccupationVector(std::initializer_list<int> c) : counts(c) {}

  int total() const noexcept {
    int n = 0;
    for (int c : counts) n += c;
    return n;
  }
  std::size_t size() const noexcept { return counts.size(); }
  int operator[](std::size_t i) const { return counts[i]; }

  auto operator<=>(const OccupationVector&) const = default;
  bool operator==(const OccupationVector&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const OccupationVector& occ) {
  os << '|';
  for (std::size_t i = 0; i < occ.counts.size(); ++i) os << (i ? "," : "") << occ.counts[i];
  return os << "⟩";
}

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace detail

/// Sparse superposition of Fock basis states.
class FockState {
 public:
  using TermMap = std::map<OccupationVector, Complex>;

  explicit FockState(std::shared_ptr<const ModeRegistry> registry)
      : registry_(std::move(registry)) {
    if (!registry_) throw ConfigError("null mode registry");
  }

  /// Builds a state from explicit terms. Terms are validated against the
  /// registry's truncation and amplitudes below the prune threshold dropped.
  static FockState from_terms(std::shared_ptr<const ModeRegistry> registry, TermMap terms) {
    FockState s(std::move(registry));
    for (auto& [occ, amp] : terms) {
      s.check_occupation(occ);
      if (std::abs(amp) >= s.registry_->prune_threshold() && amp != Complex{})
        s.terms_.emplace(occ, amp);
    }
    return s;
  }

  const ModeRegistry& registry() const noexcept { return *registry_; }
  const std::shared_ptr<const ModeRegistry>& registry_ptr() const noexcept { return registry_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  Complex amplitude(const OccupationVector& occ) const {
    auto it = terms_.find(occ);
    return it == terms_.end() ? Complex{} : it->second;
  }

  double norm_squared() const noexcept {
    double n = 0.0;
    for (const auto& [occ, amp] : terms_) n += std::norm(amp);
    return n;
  }
  double norm() const noexcept { return std::sqrt(norm_squared()); }

  /// Returns the state rescaled to unit norm; zero states cannot be normalized.
  FockState normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw ArgumentError("cannot normalize the zero state");
    return scaled(Complex{1.0 / n, 0.0});
  }

  FockState scaled(Complex factor) const {
    TermMap out;
    for (const auto& [occ, amp] : terms_) out.emplace(occ, amp * factor);
    return from_terms(registry_, std::move(out));
  }

  /// Sum of two states over the same registry.
  FockState plus(const FockState& other) const {
    require_same_registry(other);
    TermMap out = terms_;
    for (const auto& [occ, amp] : other.terms_) out[occ] += amp;
    return from_terms(registry_, std::move(out));
  }

  bool same_registry(const FockState& other) const noexcept {
    return registry_ == other.registry_ || *registry_ == *other.registry_;
  }

  void require_same_registry(const FockState& other) const {
    if (!same_registry(other))
      throw RegistryMismatchError("states are defined over different mode registries");
  }

 private:
  void check_occupation(const OccupationVector& occ) const {
    if (occ.size() != registry_->size())
      throw ArgumentError("occupation vector length does not match registry size");
    for (int c : occ.counts)
      if (c < 0) throw ArgumentError("negative photon number in occupation vector");
    if (occ.total() > registry_->max_photons()) {
      std::ostringstream msg;
      msg << "total photon number " << occ.total() << " exceeds truncation "
          << registry_->max_photons();
      throw CapacityError(msg.str());
    }
  }

  std::shared_ptr<const ModeRegistry> registry_;
  TermMap terms_;
};

/// The all-modes-empty state.
inline FockState vacuum(std::shared_ptr<const ModeRegistry> registry) {
  if (!registry || registry->empty()) throw ConfigError("vacuum requires a non-empty registry");
  const std::size_t n = registry->size();
  return FockState::from_terms(std::move(registry),
                               {{OccupationVector(std::vector<int>(n, 0)), Complex{1.0, 0.0}}});
}

/// Single basis state with unit amplitude.
inline FockState basis_state(std::shared_ptr<const ModeRegistry> registry, OccupationVector occ) {
  return FockState::from_terms(std::move(registry), {{std::move(occ), Complex{1.0, 0.0}}});
}

/// Applies (a†)^power on one mode. Each |…n…⟩ picks up √((n+1)…(n+power)).
inline FockState apply_creation(const FockState& state, const ModeId& mode, int power = 1) {
  const std::size_t m = state.registry().require(mode);
  if (power < 1) throw ArgumentError("creation power must be positive");
  FockState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    if (occ.total() + power > state.registry().max_photons()) {
      std::ostringstream msg;
      msg << "applying a†^" << power << " on '" << mode.label << "' exceeds truncation "
          << state.registry().max_photons();
      throw CapacityError(msg.str());
    }
    OccupationVector next = occ;
    double factor = 1.0;
    for (int k = 1; k <= power; ++k) factor *= std::sqrt(static_cast<double>(occ[m] + k));
    next.counts[m] += power;
    out.emplace(std::move(next), amp * factor);
  }
  return FockState::from_terms(state.registry_ptr(), std::move(out));
}

/// ⟨a|b⟩, conjugate-linear in the first argument.
inline Complex inner_product(const FockState& a, const FockState& b) {
  a.require_same_registry(b);
  Complex acc{};
  const auto& small = a.size() <= b.size() ? a.terms() : b.terms();
  const auto& large = a.size() <= b.size() ? b.terms() : a.terms();
  const bool a_is_small = a.size() <= b.size();
  for (const auto& [occ, amp] : small) {
    auto it = large.find(occ);
    if (it == large.end()) continue;
    acc += a_is_small ? std::conj(amp) * it->second : std::conj(it->second) * amp;
  }
  return acc;
}

/// Detector outcome condition on one mode.
struct CountPredicate {
  enum class Kind { exactly, at_least };
  Kind kind = Kind::at_least;
  int count = 1;

  static CountPredicate exactly(int k) { return {Kind::exactly, k}; }
  static CountPredicate at_least(int k) { return {Kind::at_least, k}; }

  bool accepts(int n) const noexcept { return kind == Kind::exactly ? n == count : n >= count; }
};

struct DetectionRule {
  ModeId mode;
  CountPredicate predicate;
};

/// Probability that every detected mode satisfies its predicate, tracing
/// freely over the listed undetected modes (and any mode not mentioned).
///
/// The Fock basis is orthonormal, so the marginal over undetected modes is
/// the sum of |amplitude|² of all basis terms whose detected occupations pass.
/// The result is not renormalized: pass a normalized state to get a value in
/// [0, 1].
inline double detection_probability(const FockState& state, const std::vector<DetectionRule>& detected,
                                    const std::vector<ModeId>& undetected = {}) {
  const auto& reg = state.registry();
  std::vector<std::pair<std::size_t, CountPredicate>> rules;
  std::unordered_set<std::size_t> detected_idx;
  for (const auto& rule : detected) {
    const std::size_t i = reg.require(rule.mode);
    if (rule.predicate.count < 0) throw ArgumentError("detector predicate count must be non-negative");
    if (!detected_idx.insert(i).second)
      throw ArgumentError("mode '" + rule.mode.label + "' listed twice as detected");
    rules.emplace_back(i, rule.predicate);
  }
  for (const auto& m : undetected) {
    const std::size_t i = reg.require(m);
    if (detected_idx.count(i))
      throw ArgumentError("mode '" + m.label + "' is both detected and undetected");
  }
  double p = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    bool pass = true;
    for (const auto& [i, pred] : rules) {
      if (!pred.accepts(occ[i])) {
        pass = false;
        break;
      }
    }
    if (pass) p += std::norm(amp);
  }
  return p;
}

/// One output term of a linear creation-operator substitution.
struct ModeComponent {
  ModeId mode;
  Complex coefficient;
};

/// Creation-operator substitution for one input mode: a†_in → Σ c_j a†_j.
struct ModeSubstitution {
  ModeId input;
  std::vector<ModeComponent> outputs;
};

/// Rewrites creation operators of the listed input modes by linear
/// combinations of creation operators and re-expands every term exactly.
///
/// A term c|n⟩ is read as c/√(Πn!) Π(a†_m)^{n_m}|0⟩; substitutions are applied
/// simultaneously to all listed inputs, the polynomial is expanded and mapped
/// back to kets with √(Πm!) factors. Inputs not listed keep their photons.
/// The map is unitary whenever the substitution matrix is (beam splitters);
/// otherwise the output is generally unnormalized.
inline FockState substitute_modes(const FockState& state, const std::vector<ModeSubstitution>& subs) {
  const auto& reg = state.registry();
  const std::size_t n_modes = reg.size();
  std::vector<std::optional<std::vector<std::pair<std::size_t, Complex>>>> table(n_modes);
  for (const auto& sub : subs) {
    const std::size_t in = reg.require(sub.input);
    if (table[in]) throw ArgumentError("mode '" + sub.input.label + "' substituted twice");
    std::vector<std::pair<std::size_t, Complex>> outs;
    for (const auto& comp : sub.outputs) outs.emplace_back(reg.require(comp.mode), comp.coefficient);
    table[in] = std::move(outs);
  }

  // Polynomial in creation operators: monomial exponents → coefficient.
  using Poly = std::map<std::vector<int>, Complex>;
  FockState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    std::vector<int> base(n_modes, 0);
    double inv_norm = 1.0;
    for (std::size_t m = 0; m < n_modes; ++m) {
      inv_norm *= detail::factorial(occ[m]);
      if (!table[m]) base[m] = occ[m];
    }
    Poly poly{{base, amp / std::sqrt(inv_norm)}};
    for (std::size_t m = 0; m < n_modes; ++m) {
      if (!table[m]) continue;
      for (int rep = 0; rep < occ[m]; ++rep) {
        Poly next;
        for (const auto& [mono, coeff] : poly) {
          for (const auto& [target, c] : *table[m]) {
            if (c == Complex{}) continue;
            auto grown = mono;
            ++grown[target];
            next[grown] += coeff * c;
          }
        }
        poly = std::move(next);
      }
    }
    for (const auto& [mono, coeff] : poly) {
      double fact = 1.0;
      for (int e : mono) fact *= detail::factorial(e);
      OccupationVector key(mono);
      if (key.total() > reg.max_photons())
        throw CapacityError("mode substitution exceeds truncation");
      out[std::move(key)] += coeff * std::sqrt(fact);
    }
  }
  return FockState::from_terms(state.registry_ptr(), std::move(out));
}

}  // namespace zwm

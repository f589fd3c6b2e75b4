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
 * Linear-optical elements acting on FockStates: phase shifters, beam
 * splitters, the partial idler-overlap channel, and the first-order
 * stimulated-emission gain law.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "zwm/fock.hpp"

namespace zwm {

/// Multiplies every term by e^{i n φ}, n being the photon number in `mode`.
inline FockState apply_phase(const FockState& state, const ModeId& mode, double phi) {
  const std::size_t m = state.registry().require(mode);
  if (!std::isfinite(phi)) throw ArgumentError("phase must be finite");
  FockState::TermMap out;
  for (const auto& [occ, amp] : state.terms())
    out.emplace(occ, amp * std::polar(1.0, phi * occ[m]));
  return FockState::from_terms(state.registry_ptr(), std::move(out));
}

/// Lossless two-port beam splitter. The reflected arm picks up a factor i:
///   a† → t a† + i r b†,   b† → t b† + i r a†,   r = √(1 − t²).
struct BeamSplitterSpec {
  ModeId mode_a;
  ModeId mode_b;
  double transmission_amplitude = 1.0 / std::numbers::sqrt2;

  double reflection_amplitude() const {
    return std::sqrt(std::max(0.0, 1.0 - transmission_amplitude * transmission_amplitude));
  }
};

inline FockState apply_beam_splitter(const FockState& state, const BeamSplitterSpec& spec) {
  const auto& reg = state.registry();
  const std::size_t a = reg.require(spec.mode_a);
  const std::size_t b = reg.require(spec.mode_b);
  if (a == b) throw ArgumentError("beam splitter needs two distinct modes");
  const double t = spec.transmission_amplitude;
  if (!(t >= 0.0 && t <= 1.0)) throw ArgumentError("transmission amplitude must lie in [0, 1]");
  const Complex ir{0.0, spec.reflection_amplitude()};
  return substitute_modes(state, {{spec.mode_a, {{spec.mode_a, t}, {spec.mode_b, ir}}},
                                  {spec.mode_b, {{spec.mode_b, t}, {spec.mode_a, ir}}}});
}

/// Imperfect overlap of a source idler mode onto a target idler mode; the
/// unmatched fraction goes to an orthogonal ancilla.
struct OverlapSpec {
  ModeId source_mode;
  ModeId target_mode;
  double gamma = 1.0;
  ModeId ancilla_mode;
};

/// Rewrites a†_source → γ a†_target + √(1−γ²) a†_ancilla in every term.
///
/// This is an exact polynomial re-expansion. It preserves the norm when the
/// source and target contents live on orthogonal states of the remaining
/// modes (e.g. a single pair emitted by either crystal). When both idler
/// modes are populated coherently in one term the merged target mode carries
/// bosonic factors and the output must be renormalized by the caller.
inline FockState apply_overlap(const FockState& state, const OverlapSpec& spec) {
  const auto& reg = state.registry();
  const std::size_t src = reg.require(spec.source_mode);
  const std::size_t dst = reg.require(spec.target_mode);
  const std::size_t anc = reg.require(spec.ancilla_mode);
  if (!(spec.gamma >= 0.0 && spec.gamma <= 1.0)) throw ArgumentError("overlap gamma must lie in [0, 1]");
  if (anc == src || anc == dst) throw ArgumentError("ancilla must differ from source and target");
  if (src == dst) throw ArgumentError("overlap source and target must differ");
  for (const auto& [occ, amp] : state.terms())
    if (occ[anc] != 0)
      throw ArgumentError("ancilla mode '" + spec.ancilla_mode.label + "' is already occupied");
  const double leak = std::sqrt(std::max(0.0, 1.0 - spec.gamma * spec.gamma));
  return substitute_modes(
      state, {{spec.source_mode, {{spec.target_mode, spec.gamma}, {spec.ancilla_mode, leak}}}});
}

/// Unblocked/blocked pair-emission rate ratio when the idler mode is seeded
/// with mean photon number μ: first-order bosonic enhancement 1 + μ.
inline double stimulated_gain_ratio(double seed_mean_photons) {
  if (!(seed_mean_photons >= 0.0) || !std::isfinite(seed_mean_photons))
    throw ArgumentError("seed mean photon number must be finite and non-negative");
  return 1.0 + seed_mean_photons;
}

/// Same enhancement for emission of two pairs into the seeded idler mode:
/// ⟨(n+1)(n+2)⟩/2 over a Poissonian seed, i.e. 1 + 2μ + μ²/2.
inline double stimulated_pair_gain_ratio(double seed_mean_photons) {
  const double mu = seed_mean_photons;
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw ArgumentError("seed mean photon number must be finite and non-negative");
  return 1.0 + 2.0 * mu + 0.5 * mu * mu;
}

}  // namespace zwm

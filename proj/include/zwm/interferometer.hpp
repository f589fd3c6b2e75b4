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
 * Nonlinear (Zou-Wang-Mandel) interferometer scenarios.
 *
 * Topology: two crystals emit signal/idler pairs (S1,I1) and (S2,I2). The
 * idler I1 picks up the phase φ and is overlapped with I2 (overlap γ, the
 * rest leaking into ancilla A). The signals meet on a beam splitter whose
 * output ports are watched by D1 (port of S1) and D2 (port of S2). Idlers
 * and the ancilla are never detected.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "zwm/detail/parallel.hpp"
#include "zwm/fock.hpp"
#include "zwm/optics.hpp"

namespace zwm {

enum class PositionConvention { optical_path, mirror_displacement };
enum class DetectorSemantics { threshold, number_resolving };

inline constexpr double kSignalWavelengthNm = 632.8;
inline constexpr double kIdlerWavelengthNm = 1016.4;

struct ExperimentConfig {
  int pair_number = 2;
  double gamma = 1.0;
  double bs_transmission = 1.0 / std::numbers::sqrt2;
  double signal_wavelength_nm = kSignalWavelengthNm;
  double idler_wavelength_nm = kIdlerWavelengthNm;
  std::vector<double> scan_positions_nm;
  PositionConvention position_convention = PositionConvention::optical_path;
  DetectorSemantics detector_semantics = DetectorSemantics::threshold;

  void validate() const {
    if (pair_number != 1 && pair_number != 2) throw ArgumentError("pair_number must be 1 or 2");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ArgumentError("gamma must lie in [0, 1]");
    if (!(bs_transmission >= 0.0 && bs_transmission <= 1.0))
      throw ArgumentError("bs_transmission must lie in [0, 1]");
    if (!(signal_wavelength_nm > 0.0 && std::isfinite(signal_wavelength_nm)))
      throw ArgumentError("signal_wavelength must be positive");
    if (!(idler_wavelength_nm > 0.0 && std::isfinite(idler_wavelength_nm)))
      throw ArgumentError("idler_wavelength must be positive");
    for (double x : scan_positions_nm)
      if (!std::isfinite(x)) throw ArgumentError("scan positions must be finite");
  }

  /// Optical path difference Δ for a scan coordinate. A retro-reflecting
  /// mirror displaced by d changes the path by 2d.
  double optical_path_nm(double position_nm) const {
    return position_convention == PositionConvention::mirror_displacement ? 2.0 * position_nm
                                                                          : position_nm;
  }

  /// Idler phase φ_I = 2πΔ/λ_idler.
  double idler_phase(double position_nm) const {
    return 2.0 * std::numbers::pi * optical_path_nm(position_nm) / idler_wavelength_nm;
  }
};

/// Mode handles of the interferometer registry.
struct InterferometerModes {
  std::shared_ptr<const ModeRegistry> registry;
  ModeId s1, s2, i1, i2, ancilla;
};

inline InterferometerModes interferometer_modes(double signal_nm = kSignalWavelengthNm,
                                                double idler_nm = kIdlerWavelengthNm,
                                                int max_photons = kDefaultMaxPhotons) {
  auto reg = ModeRegistry::make({{"S1", signal_nm},
                                 {"S2", signal_nm},
                                 {"I1", idler_nm},
                                 {"I2", idler_nm},
                                 {"A1", idler_nm}},
                                max_photons);
  const auto& r = *reg;
  return {reg, r[0], r[1], r[2], r[3], r[4]};
}

inline InterferometerModes interferometer_modes(const ExperimentConfig& config) {
  return interferometer_modes(config.signal_wavelength_nm, config.idler_wavelength_nm);
}

/// One operator monomial of the pair source: weight · Π (a†_label)^power.
struct SourceMonomial {
  Complex weight;
  std::vector<std::pair<std::string, int>> creations;
};

/// Unnormalized operator expansion of the n-pair source at idler phase φ.
/// n = 1: e^{iφ} a†S1 a†I1 + a†S2 a†I2.
/// n = 2: ½e^{2iφ} a†²S1 a†²I1 + ½ a†²S2 a†²I2 + e^{iφ} a†S1 a†S2 a†I1 a†I2.
inline std::vector<SourceMonomial> pair_source_monomials(int n, double phi_i) {
  if (n == 1)
    return {{std::polar(1.0, phi_i), {{"S1", 1}, {"I1", 1}}}, {Complex{1.0}, {{"S2", 1}, {"I2", 1}}}};
  if (n == 2)
    return {{0.5 * std::polar(1.0, 2.0 * phi_i), {{"S1", 2}, {"I1", 2}}},
            {Complex{0.5}, {{"S2", 2}, {"I2", 2}}},
            {std::polar(1.0, phi_i), {{"S1", 1}, {"S2", 1}, {"I1", 1}, {"I2", 1}}}};
  throw ArgumentError("pair number must be 1 or 2");
}

inline FockState state_from_monomials(const std::shared_ptr<const ModeRegistry>& registry,
                                      const std::vector<SourceMonomial>& monomials) {
  FockState total(registry);
  for (const auto& mono : monomials) {
    FockState term = vacuum(registry);
    for (const auto& [label, power] : mono.creations)
      term = apply_creation(term, registry->mode(label), power);
    total = total.plus(term.scaled(mono.weight));
  }
  return total;
}

/// Normalized n-pair source state (n ∈ {1, 2}) with idler phase φ.
inline FockState build_pair_state(const InterferometerModes& modes, int n, double phi_i) {
  if (n != 1 && n != 2) throw ArgumentError("pair number must be 1 or 2");
  return state_from_monomials(modes.registry, pair_source_monomials(n, phi_i)).normalized();
}

inline FockState build_pair_state(int n, double phi_i) {
  return build_pair_state(interferometer_modes(), n, phi_i);
}

/// (e^{iNφ}|N⟩S1|N⟩I1 + |N⟩S2|N⟩I2)/√2 for any N within the truncation.
inline FockState build_n_pair_superposition(const InterferometerModes& modes, int n, double phi_i) {
  if (n < 1) throw ArgumentError("pair number must be positive");
  const auto& reg = *modes.registry;
  std::vector<int> first(reg.size(), 0), second(reg.size(), 0);
  first[modes.s1.index] = first[modes.i1.index] = n;
  second[modes.s2.index] = second[modes.i2.index] = n;
  const double h = 1.0 / std::numbers::sqrt2;
  return FockState::from_terms(modes.registry, {{OccupationVector(first), h * std::polar(1.0, n * phi_i)},
                                                {OccupationVector(second), Complex{h}}});
}

struct PointResult {
  double singles_d1 = 0.0;
  double singles_d2 = 0.0;
  double coincidence = 0.0;
};

struct ScanResult {
  std::vector<double> positions_nm;
  std::vector<double> singles_d1;
  std::vector<double> singles_d2;
  std::vector<double> coincidence;

  std::size_t size() const noexcept { return positions_nm.size(); }
};

/// Idler overlap, renormalization, and the signal beam splitter.
inline FockState propagate(const InterferometerModes& modes, const FockState& source,
                           const ExperimentConfig& config) {
  FockState merged = apply_overlap(source, {modes.i1, modes.i2, config.gamma, modes.ancilla});
  return apply_beam_splitter(merged.normalized(), {modes.s1, modes.s2, config.bs_transmission});
}

/// Singles and coincidence probabilities of a propagated state; all idler and
/// ancilla modes are traced out.
inline PointResult detect(const InterferometerModes& modes, const FockState& output,
                          const ExperimentConfig& config) {
  const CountPredicate click = config.detector_semantics == DetectorSemantics::threshold
                                   ? CountPredicate::at_least(1)
                                   : CountPredicate::exactly(1);
  const std::vector<ModeId> traced{modes.i1, modes.i2, modes.ancilla};
  PointResult r;
  r.singles_d1 = detection_probability(output, {{modes.s1, click}}, traced);
  r.singles_d2 = detection_probability(output, {{modes.s2, click}}, traced);
  r.coincidence = detection_probability(output, {{modes.s1, click}, {modes.s2, click}}, traced);
  return r;
}

inline PointResult run_point(const ExperimentConfig& config, double phi_i) {
  config.validate();
  const auto modes = interferometer_modes(config);
  const FockState source = build_pair_state(modes, config.pair_number, phi_i);
  return detect(modes, propagate(modes, source, config), config);
}

/// Evaluates run_point at every scan position (positions in config units).
inline ScanResult scan(const ExperimentConfig& config) {
  config.validate();
  if (config.scan_positions_nm.empty()) throw ArgumentError("scan needs at least one position");
  const std::size_t n = config.scan_positions_nm.size();
  ScanResult out;
  out.positions_nm = config.scan_positions_nm;
  out.singles_d1.resize(n);
  out.singles_d2.resize(n);
  out.coincidence.resize(n);
  detail::parallel_for(n, [&](std::size_t k) {
    const PointResult p = run_point(config, config.idler_phase(config.scan_positions_nm[k]));
    out.singles_d1[k] = p.singles_d1;
    out.singles_d2[k] = p.singles_d2;
    out.coincidence[k] = p.coincidence;
  });
  return out;
}

/// `count` evenly spaced positions from `start` to `stop` inclusive.
inline std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> xs(count);
  if (count == 1) {
    xs[0] = start;
    return xs;
  }
  for (std::size_t i = 0; i < count; ++i)
    xs[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  return xs;
}

/// Visibility of the fringe that carries the n-pair phase: singles at D1 for
/// one pair, coincidences for two pairs. Sampled at 64 phases over one
/// period of φ, which includes the extrema of both channels.
inline double fringe_visibility(const ExperimentConfig& config) {
  double hi = -1.0, lo = 2.0;
  for (int k = 0; k < 64; ++k) {
    const PointResult p = run_point(config, 2.0 * std::numbers::pi * k / 64.0);
    const double v = config.pair_number == 1 ? p.singles_d1 : p.coincidence;
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return hi > 0.0 ? (hi - lo) / (hi + lo) : 0.0;
}

/// Coincidence probability of the isolated cross term a†S1 a†S2 a†I1 a†I2|0⟩
/// after the signal beam splitter. Zero for a balanced splitter.
inline double hom_cross_term_check(double bs_transmission = 1.0 / std::numbers::sqrt2) {
  const auto modes = interferometer_modes();
  FockState cross = vacuum(modes.registry);
  for (const auto& m : {modes.s1, modes.s2, modes.i1, modes.i2}) cross = apply_creation(cross, m);
  const FockState out = apply_beam_splitter(cross, {modes.s1, modes.s2, bs_transmission});
  return detection_probability(out, {{modes.s1, CountPredicate::at_least(1)},
                                     {modes.s2, CountPredicate::at_least(1)}},
                               {modes.i1, modes.i2, modes.ancilla});
}

struct EmissionRates {
  double singles_rate_s2 = 0.0;
  double pair_rate_s2 = 0.0;
};

/// Relative single- and two-photon rates in S2 (before the beam splitter) for
/// pair amplitude ε. Unblocking I1 seeds NL2's idler mode with the mean
/// spontaneous occupancy μ = ε², enhancing the rates by the bosonic factors.
inline EmissionRates emission_check(double gain_epsilon, bool blocked) {
  if (!(gain_epsilon >= 0.0) || !std::isfinite(gain_epsilon))
    throw ArgumentError("gain epsilon must be finite and non-negative");
  const double e2 = gain_epsilon * gain_epsilon;
  const double mu = blocked ? 0.0 : e2;
  return {e2 * stimulated_gain_ratio(mu), e2 * e2 * stimulated_pair_gain_ratio(mu)};
}

}  // namespace zwm

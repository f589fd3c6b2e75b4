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
 * Multimode spectral model of the pair source.
 *
 * The joint spectral amplitude is a double Gaussian
 *
 *   f(ωs, ωi) = exp(-(ωs + ωi - ωp)² / 2σp²) · exp(-(δs + ρ δi)² / 2σpm²)
 *
 * with δ the detuning from each arm's grid center. σp follows from the pump
 * intensity FWHM, σpm is the phase-matching amplitude width, and ρ weights the
 * idler detuning in the phase-mismatch coordinate. Narrow pump plus wide
 * phase matching gives the tight frequency anti-correlation of type-II
 * down-conversion; a narrowband signal filter then purifies the heralded
 * signal and sets the idler coherence time that bounds the delay envelope.
 */

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "zwm/detail/parallel.hpp"
#include "zwm/errors.hpp"
#include "zwm/interferometer.hpp"

namespace zwm {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Angular frequency (rad/s) of a vacuum wavelength in nm.
inline double angular_frequency(double wavelength_nm) {
  return 2.0 * std::numbers::pi * kSpeedOfLight / (wavelength_nm * 1e-9);
}

inline double wavelength_nm(double angular_frequency) {
  return 2.0 * std::numbers::pi * kSpeedOfLight / angular_frequency * 1e9;
}

/// Intensity FWHM in wavelength converted to angular-frequency FWHM.
inline double bandwidth_to_angular(double center_nm, double fwhm_nm) {
  return angular_frequency(center_nm) * fwhm_nm / center_nm;
}

/// Uniform signal and idler angular-frequency axes.
class SpectralGrid {
 public:
  SpectralGrid(std::vector<double> signal_axis, std::vector<double> idler_axis)
      : signal_(std::move(signal_axis)), idler_(std::move(idler_axis)) {
    check_axis(signal_, "signal");
    check_axis(idler_, "idler");
  }

  /// n points centered on `center`, spanning ±half_span.
  static std::vector<double> axis(double center, double half_span, std::size_t n) {
    if (n < 2) throw ConfigError("spectral axis needs at least two points");
    if (!(half_span > 0.0)) throw ConfigError("spectral axis span must be positive");
    return linspace(center - half_span, center + half_span, n);
  }

  const std::vector<double>& signal_axis() const noexcept { return signal_; }
  const std::vector<double>& idler_axis() const noexcept { return idler_; }
  std::size_t signal_size() const noexcept { return signal_.size(); }
  std::size_t idler_size() const noexcept { return idler_.size(); }
  double signal_step() const noexcept { return signal_[1] - signal_[0]; }
  double idler_step() const noexcept { return idler_[1] - idler_[0]; }
  double signal_center() const noexcept { return 0.5 * (signal_.front() + signal_.back()); }
  double idler_center() const noexcept { return 0.5 * (idler_.front() + idler_.back()); }

 private:
  static void check_axis(const std::vector<double>& ax, const char* name) {
    if (ax.size() < 2) throw ConfigError(std::string(name) + " axis needs at least two points");
    const double step = ax[1] - ax[0];
    if (!(step > 0.0)) throw ConfigError(std::string(name) + " axis must be strictly increasing");
    for (std::size_t k = 1; k < ax.size(); ++k) {
      const double d = ax[k] - ax[k - 1];
      if (!(d > 0.0) || std::abs(d - step) > 1e-6 * step)
        throw ConfigError(std::string(name) + " axis must be uniformly spaced");
    }
  }

  std::vector<double> signal_;
  std::vector<double> idler_;
};

/// Complex amplitude sampled on a SpectralGrid (rows: signal, columns: idler).
struct JointSpectralAmplitude {
  SpectralGrid grid;
  Eigen::MatrixXcd values;

  /// ΣΣ|f|² Δωs Δωi; 1 for a normalized amplitude.
  double weight() const {
    return values.cwiseAbs2().sum() * grid.signal_step() * grid.idler_step();
  }

  JointSpectralAmplitude normalized() const {
    const double w = weight();
    if (!(w > 0.0)) throw DegenerateOutputError("joint spectral amplitude has zero weight");
    return {grid, values / std::sqrt(w)};
  }

  /// Σ_s |f|² per idler bin.
  Eigen::VectorXd idler_marginal() const { return values.cwiseAbs2().colwise().sum().transpose(); }
  Eigen::VectorXd signal_marginal() const { return values.cwiseAbs2().rowwise().sum(); }
};

enum class FilterShape { gaussian, rectangular };
enum class Arm { signal, idler };

struct FilterSpec {
  double center_wavelength_nm = kSignalWavelengthNm;
  double fwhm_nm = 2.0;
  FilterShape shape = FilterShape::gaussian;

  /// Intensity transmission at an angular frequency.
  double transmission(double omega) const {
    const double dl = wavelength_nm(omega) - center_wavelength_nm;
    if (shape == FilterShape::rectangular) return std::abs(dl) <= 0.5 * fwhm_nm ? 1.0 : 0.0;
    return std::exp(-4.0 * std::numbers::ln2 * (dl / fwhm_nm) * (dl / fwhm_nm));
  }
};

/// Source model parameters. Defaults are model choices, not measured values.
struct SourceSpectrum {
  double pump_center_nm = 390.0;
  double pump_bandwidth_nm = 1.0;         // pump intensity FWHM
  double phasematch_width = 2.0e13;       // amplitude σ, rad/s
  double phasematch_idler_weight = 0.0;   // ρ
  double signal_center_nm = kSignalWavelengthNm;
  double idler_center_nm = kIdlerWavelengthNm;
  std::size_t grid_points = 256;
  double grid_span_sigmas = 4.0;

  double pump_sigma() const {
    return bandwidth_to_angular(pump_center_nm, pump_bandwidth_nm) / (2.0 * std::sqrt(std::numbers::ln2));
  }

  void validate() const {
    if (!(pump_center_nm > 0.0 && signal_center_nm > 0.0 && idler_center_nm > 0.0))
      throw ConfigError("spectral center wavelengths must be positive");
    if (!(pump_bandwidth_nm > 0.0)) throw ConfigError("pump_bandwidth must be positive");
    if (!(phasematch_width > 0.0)) throw ConfigError("phasematch_width must be positive");
    if (!std::isfinite(phasematch_idler_weight)) throw ConfigError("phasematch_idler_weight must be finite");
    if (grid_points < 8) throw ConfigError("grid_points must be at least 8");
    if (!(grid_span_sigmas > 0.0)) throw ConfigError("grid_span_sigmas must be positive");
  }

  /// Grid spanning ±grid_span_sigmas amplitude-marginal widths on each axis.
  SpectralGrid default_grid() const {
    validate();
    // f = exp(-½ xᵀ A x); the amplitude marginal widths are √diag(A⁻¹).
    const double p = 1.0 / (pump_sigma() * pump_sigma());
    const double q = 1.0 / (phasematch_width * phasematch_width);
    const double rho = phasematch_idler_weight;
    Eigen::Matrix2d a;
    a << p + q, p + q * rho, p + q * rho, p + q * rho * rho;
    const Eigen::Matrix2d c = a.inverse();
    return SpectralGrid(
        SpectralGrid::axis(angular_frequency(signal_center_nm), grid_span_sigmas * std::sqrt(c(0, 0)), grid_points),
        SpectralGrid::axis(angular_frequency(idler_center_nm), grid_span_sigmas * std::sqrt(c(1, 1)), grid_points));
  }
};

/// Samples and normalizes the double-Gaussian JSA. Requires energy
/// consistency of the grid centers and that |f| has decayed below the value
/// of a Gaussian at 3σ everywhere on the grid boundary.
inline JointSpectralAmplitude build_jsa(double pump_center_nm, double pump_bandwidth_nm,
                                        double phasematch_width, const SpectralGrid& grid,
                                        double phasematch_idler_weight = 0.0) {
  if (!(pump_center_nm > 0.0) || !(pump_bandwidth_nm > 0.0) || !(phasematch_width > 0.0))
    throw ConfigError("pump center, pump bandwidth and phase-matching width must be positive");
  const double wp = angular_frequency(pump_center_nm);
  const double ws0 = grid.signal_center();
  const double wi0 = grid.idler_center();
  const double cell = std::max(grid.signal_step(), grid.idler_step());
  if (std::abs(ws0 + wi0 - wp) > cell)
    throw ConfigError("signal and idler grid centers do not add up to the pump frequency");

  const double sp = bandwidth_to_angular(pump_center_nm, pump_bandwidth_nm) / (2.0 * std::sqrt(std::numbers::ln2));
  const double rho = phasematch_idler_weight;
  const auto& ws = grid.signal_axis();
  const auto& wi = grid.idler_axis();
  Eigen::MatrixXcd f(ws.size(), wi.size());
  for (std::size_t r = 0; r < ws.size(); ++r) {
    for (std::size_t c = 0; c < wi.size(); ++c) {
      const double pump = (ws[r] + wi[c] - wp) / sp;
      const double pm = ((ws[r] - ws0) + rho * (wi[c] - wi0)) / phasematch_width;
      f(r, c) = std::exp(-0.5 * (pump * pump + pm * pm));
    }
  }

  const double peak = f.cwiseAbs().maxCoeff();
  double edge = 0.0;
  for (Eigen::Index r = 0; r < f.rows(); ++r)
    edge = std::max({edge, std::abs(f(r, 0)), std::abs(f(r, f.cols() - 1))});
  for (Eigen::Index c = 0; c < f.cols(); ++c)
    edge = std::max({edge, std::abs(f(0, c)), std::abs(f(f.rows() - 1, c))});
  if (!(peak > 0.0) || edge > std::exp(-4.5) * peak)
    throw CoverageError("spectral grid does not cover ±3σ of the joint spectral amplitude");

  return JointSpectralAmplitude{grid, std::move(f)}.normalized();
}

inline JointSpectralAmplitude build_jsa(const SourceSpectrum& source) {
  source.validate();
  return build_jsa(source.pump_center_nm, source.pump_bandwidth_nm, source.phasematch_width,
                   source.default_grid(), source.phasematch_idler_weight);
}

/// Multiplies the amplitude by the filter's amplitude transmission √T along
/// one arm. With `renormalize = false` the output weight is the fraction of
/// pairs transmitted.
inline JointSpectralAmplitude apply_filter(const JointSpectralAmplitude& jsa, Arm which_arm,
                                           const FilterSpec& filter, bool renormalize = true) {
  if (!(filter.fwhm_nm > 0.0)) throw ArgumentError("filter fwhm must be positive");
  const auto& axis = which_arm == Arm::signal ? jsa.grid.signal_axis() : jsa.grid.idler_axis();
  Eigen::VectorXd amp(axis.size());
  for (std::size_t k = 0; k < axis.size(); ++k) amp[k] = std::sqrt(filter.transmission(axis[k]));

  JointSpectralAmplitude out{jsa.grid, jsa.values};
  if (which_arm == Arm::signal)
    out.values = amp.asDiagonal() * jsa.values;
  else
    out.values = jsa.values * amp.asDiagonal();

  const double before = jsa.weight();
  const double after = out.weight();
  if (!(after > 1e-12 * before))
    throw DegenerateOutputError("filter passband does not overlap the joint spectrum");
  return renormalize ? out.normalized() : out;
}

struct SchmidtResult {
  double schmidt_number = 1.0;
  double purity = 1.0;
  std::vector<double> singular_values;  // normalized, Σλ² = 1, descending
};

/// Schmidt decomposition of the sampled amplitude via SVD.
inline SchmidtResult schmidt_analysis(const JointSpectralAmplitude& jsa) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(jsa.values);
  const Eigen::VectorXd s = svd.singularValues();
  const double total = s.squaredNorm();
  if (!(total > 0.0)) throw DegenerateOutputError("joint spectral amplitude has zero weight");
  SchmidtResult r;
  double sum4 = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double p = s[k] * s[k] / total;
    sum4 += p * p;
    r.singular_values.push_back(std::sqrt(p));
  }
  r.purity = sum4;
  r.schmidt_number = 1.0 / sum4;
  return r;
}

/// Pearson correlation coefficient of signal and idler frequency under |f|².
inline double jsi_correlation(const JointSpectralAmplitude& jsa) {
  const Eigen::MatrixXd w = jsa.values.cwiseAbs2();
  const double total = w.sum();
  const auto& ws = jsa.grid.signal_axis();
  const auto& wi = jsa.grid.idler_axis();
  const double cs = jsa.grid.signal_center(), ci = jsa.grid.idler_center();
  double ms = 0, mi = 0;
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      ms += w(r, c) * (ws[r] - cs);
      mi += w(r, c) * (wi[c] - ci);
    }
  ms /= total;
  mi /= total;
  double vs = 0, vi = 0, cov = 0;
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      const double ds = ws[r] - cs - ms, di = wi[c] - ci - mi;
      vs += w(r, c) * ds * ds;
      vi += w(r, c) * di * di;
      cov += w(r, c) * ds * di;
    }
  return cov / std::sqrt(vs * vi);
}

/// Idler coherence factor |Σ m(ωi) e^{iωi τ}| / Σ m(ωi), m the idler marginal
/// of |f|². Detuning from the grid center is used; only the modulus matters.
inline double idler_coherence(const JointSpectralAmplitude& jsa, double delay_s) {
  const Eigen::VectorXd m = jsa.idler_marginal();
  const auto& wi = jsa.grid.idler_axis();
  const double ci = jsa.grid.idler_center();
  Complex acc{};
  for (Eigen::Index k = 0; k < m.size(); ++k) acc += m[k] * std::polar(1.0, (wi[k] - ci) * delay_s);
  return std::abs(acc) / m.sum();
}

struct EnvelopePoint {
  double delay_s = 0.0;
  double visibility = 1.0;
};

/// Idler coherence factor at each delay; used as the effective overlap γ(τ).
inline std::vector<EnvelopePoint> coincidence_envelope(const JointSpectralAmplitude& jsa,
                                                       const std::vector<double>& delays_s) {
  std::vector<EnvelopePoint> out(delays_s.size());
  const Eigen::VectorXd m = jsa.idler_marginal();
  const double total = m.sum();
  const auto& wi = jsa.grid.idler_axis();
  const double ci = jsa.grid.idler_center();
  detail::parallel_for(delays_s.size(), [&](std::size_t k) {
    const double tau = delays_s[k];
    Complex acc{};
    for (Eigen::Index j = 0; j < m.size(); ++j) acc += m[j] * std::polar(1.0, (wi[j] - ci) * tau);
    out[k] = {tau, tau == 0.0 ? 1.0 : std::min(1.0, std::abs(acc) / total)};
  });
  return out;
}

/// Delay τ > 0 at which the idler coherence factor first falls to one half.
inline double envelope_half_width(const JointSpectralAmplitude& jsa) {
  const Eigen::VectorXd m = jsa.idler_marginal();
  const auto& wi = jsa.grid.idler_axis();
  const double total = m.sum();
  double mean = 0.0, var = 0.0;
  for (Eigen::Index k = 0; k < m.size(); ++k) mean += m[k] * wi[k];
  mean /= total;
  for (Eigen::Index k = 0; k < m.size(); ++k) var += m[k] * (wi[k] - mean) * (wi[k] - mean);
  const double rms = std::sqrt(var / total);
  if (!(rms > 0.0)) throw DegenerateOutputError("idler marginal has zero bandwidth");

  const double step = 0.05 / rms;
  const double period = 2.0 * std::numbers::pi / jsa.grid.idler_step();
  double lo = 0.0, hi = step;
  while (idler_coherence(jsa, hi) > 0.5) {
    lo = hi;
    hi += step;
    if (hi > 0.5 * period) throw DegenerateOutputError("coherence does not fall to one half");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (idler_coherence(jsa, mid) > 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Fringe scan with the delay envelope. At each position the optical path
/// difference Δ sets the idler phase 2πΔ/λi and the delay τ = Δ/c; the
/// overlap used by the interferometer is γ_static · V(τ).
inline ScanResult fringe_with_envelope(const ExperimentConfig& config, const JointSpectralAmplitude& jsa,
                                       const std::vector<double>& positions_nm) {
  config.validate();
  if (positions_nm.empty()) throw ArgumentError("envelope scan needs at least one position");
  std::vector<double> delays(positions_nm.size());
  for (std::size_t k = 0; k < positions_nm.size(); ++k)
    delays[k] = config.optical_path_nm(positions_nm[k]) * 1e-9 / kSpeedOfLight;
  const auto env = coincidence_envelope(jsa, delays);

  ScanResult out;
  out.positions_nm = positions_nm;
  out.singles_d1.resize(positions_nm.size());
  out.singles_d2.resize(positions_nm.size());
  out.coincidence.resize(positions_nm.size());
  detail::parallel_for(positions_nm.size(), [&](std::size_t k) {
    ExperimentConfig local = config;
    local.gamma = config.gamma * env[k].visibility;
    const PointResult p = run_point(local, config.idler_phase(positions_nm[k]));
    out.singles_d1[k] = p.singles_d1;
    out.singles_d2[k] = p.singles_d2;
    out.coincidence[k] = p.coincidence;
  });
  return out;
}

}  // namespace zwm

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
 * Fringe analysis: sinusoid and Gaussian-envelope fits, visibility,
 * Poisson count synthesis, and the classical product-of-singles comparator.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "zwm/errors.hpp"
#include "zwm/interferometer.hpp"

namespace zwm {

/// (max − min)/(max + min).
inline double visibility(double max_count, double min_count) {
  if (!(max_count >= min_count) || !(min_count >= 0.0) || !(max_count > 0.0))
    throw ArgumentError("visibility needs max >= min >= 0 and max > 0");
  return (max_count - min_count) / (max_count + min_count);
}

/// y = offset + amplitude·cos(2πx/period + phase).
struct FitResult {
  double offset = 0.0;
  double amplitude = 0.0;
  double period = 0.0;
  double phase = 0.0;
  double visibility = 0.0;
  double residual_rms = 0.0;
  std::vector<double> covariance_diag;  // offset, amplitude, period, phase
  bool period_determined = true;
  int iterations = 0;

  double evaluate(double x) const {
    return offset + amplitude * std::cos(2.0 * std::numbers::pi * x / period + phase);
  }
};

struct FitOptions {
  std::optional<double> period_hint{};
  bool fix_period = false;
  int max_iterations = 200;
  std::size_t periodogram_points = 200;
};

namespace detail {

struct LmOutcome {
  Eigen::VectorXd params;
  Eigen::MatrixXd jtj;
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Levenberg-Marquardt on r(θ) = model(θ) − y. `eval` fills residuals and
// Jacobian for a parameter vector.
template <typename Eval>
LmOutcome levenberg_marquardt(Eigen::VectorXd params, Eval&& eval, int max_iterations) {
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  eval(params, r, jac);
  double rss = r.squaredNorm();
  double lambda = 1e-3;
  LmOutcome out;
  for (int it = 1; it <= max_iterations; ++it) {
    out.iterations = it;
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;
    bool accepted = false;
    while (lambda < 1e16) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
      const Eigen::VectorXd step = a.ldlt().solve(-g);
      const Eigen::VectorXd trial = params + step;
      Eigen::VectorXd tr;
      Eigen::MatrixXd tj;
      eval(trial, tr, tj);
      const double trial_rss = tr.squaredNorm();
      if (std::isfinite(trial_rss) && trial_rss <= rss) {
        const double gain = rss - trial_rss;
        const double rel_step = step.norm() / std::max(params.norm(), 1e-300);
        params = trial;
        r = std::move(tr);
        jac = std::move(tj);
        rss = trial_rss;
        lambda = std::max(lambda * 0.1, 1e-12);
        accepted = true;
        if (gain <= 1e-15 * rss || rel_step < 1e-15 || rss == 0.0) {
          out.converged = true;
        }
        break;
      }
      lambda *= 10.0;
    }
    // A rejected step at maximal damping means no descent direction is left.
    if (!accepted) out.converged = true;
    if (out.converged) break;
  }
  out.params = params;
  out.jtj = jac.transpose() * jac;
  out.rss = rss;
  return out;
}

struct LinearSinusoid {
  double c = 0, a = 0, b = 0, rss = 0;
};

// Offset/cos/sin least squares at a fixed angular wavenumber k.
inline LinearSinusoid linear_sinusoid(const std::vector<double>& x, const std::vector<double>& y, double k,
                                      double x0) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = k * (x[i] - x0);
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(t);
    design(i, 2) = std::sin(t);
    rhs[i] = y[i];
  }
  const Eigen::Vector3d sol = design.colPivHouseholderQr().solve(rhs);
  return {sol[0], sol[1], sol[2], (design * sol - rhs).squaredNorm()};
}

inline std::vector<double> log_space(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

inline double wrap_phase(double p) {
  p = std::remainder(p, 2.0 * std::numbers::pi);
  return p <= -std::numbers::pi ? p + 2.0 * std::numbers::pi : p;
}

}  // namespace detail

/// Least-squares sinusoid fit. With a free period the wavenumber is seeded by
/// a log-spaced periodogram, refined by golden section on the residual, and
/// polished jointly with the linear parameters by Levenberg-Marquardt.
inline FitResult fit_sinusoid(const std::vector<double>& xs, const std::vector<double>& ys,
                              const FitOptions& options = {}) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (xs.size() != ys.size()) throw ArgumentError("positions and values differ in length");
  if (xs.size() < 8) throw FitError("sinusoid fit needs at least 8 points");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw ArgumentError("non-finite scan data");
  const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
  const double span = *xmax_it - *xmin_it;
  if (!(span > 0.0)) throw FitError("scan positions do not span an interval");
  if (options.period_hint && !(*options.period_hint > 0.0)) throw ArgumentError("period hint must be positive");
  if (options.fix_period && !options.period_hint) throw ArgumentError("fixed-period fit needs a period");
  const double x0 = 0.5 * (*xmin_it + *xmax_it);
  const std::size_t n = xs.size();

  const auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
  double mean = 0.0;
  for (double y : ys) mean += y;
  mean /= static_cast<double>(n);
  if (*ymax_it - *ymin_it <= 1e-14 * std::max(std::abs(mean), 1e-300)) {
    FitResult flat;
    flat.offset = mean;
    flat.period = options.period_hint.value_or(span);
    flat.period_determined = false;
    flat.covariance_diag.assign(4, 0.0);
    return flat;
  }

  double k = 0.0;
  if (options.fix_period) {
    k = two_pi / *options.period_hint;
  } else {
    double dx = span / static_cast<double>(n - 1);
    double lo = 2.0 * dx, hi = span;
    if (options.period_hint) {
      lo = std::max(lo, *options.period_hint / 10.0);
      hi = *options.period_hint * 10.0;
    }
    if (!(hi > lo)) throw FitError("no resolvable period range", "span too short for the hint");
    // Keep the log grid finer than the periodogram peak width (~P/span).
    const std::size_t needed =
        static_cast<std::size_t>(std::ceil(4.0 * std::log(hi / lo) * span / lo)) + 1;
    const auto periods = detail::log_space(lo, hi, std::max(options.periodogram_points, needed));
    std::size_t best = 0;
    double best_rss = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < periods.size(); ++i) {
      const double rss = detail::linear_sinusoid(xs, ys, two_pi / periods[i], x0).rss;
      if (rss < best_rss) {
        best_rss = rss;
        best = i;
      }
    }
    double a = periods[best == 0 ? 0 : best - 1];
    double b = periods[std::min(best + 1, periods.size() - 1)];
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    auto cost = [&](double p) { return detail::linear_sinusoid(xs, ys, two_pi / p, x0).rss; };
    double c1 = b - golden * (b - a), c2 = a + golden * (b - a);
    double f1 = cost(c1), f2 = cost(c2);
    for (int it = 0; it < 100 && (b - a) > 1e-10 * b; ++it) {
      if (f1 < f2) {
        b = c2;
        c2 = c1;
        f2 = f1;
        c1 = b - golden * (b - a);
        f1 = cost(c1);
      } else {
        a = c1;
        c1 = c2;
        f1 = f2;
        c2 = a + golden * (b - a);
        f2 = cost(c2);
      }
    }
    k = two_pi / (0.5 * (a + b));
  }

  const auto lin = detail::linear_sinusoid(xs, ys, k, x0);
  const Eigen::Index m = static_cast<Eigen::Index>(n);
  FitResult fit;
  Eigen::VectorXd theta;
  Eigen::MatrixXd jtj;
  double rss = lin.rss;
  int n_params = 3;

  if (options.fix_period) {
    theta = Eigen::Vector4d(lin.c, lin.a, lin.b, k);
    Eigen::MatrixXd design(m, 3);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double t = k * (xs[i] - x0);
      design.row(i) << 1.0, std::cos(t), std::sin(t);
    }
    jtj = design.transpose() * design;
    fit.iterations = 0;
  } else {
    n_params = 4;
    auto eval = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& jac) {
      r.resize(m);
      jac.resize(m, 4);
      for (Eigen::Index i = 0; i < m; ++i) {
        const double u = xs[i] - x0;
        const double cs = std::cos(p[3] * u), sn = std::sin(p[3] * u);
        r[i] = p[0] + p[1] * cs + p[2] * sn - ys[i];
        jac.row(i) << 1.0, cs, sn, u * (-p[1] * sn + p[2] * cs);
      }
    };
    const auto lm = detail::levenberg_marquardt(Eigen::Vector4d(lin.c, lin.a, lin.b, k), eval,
                                                options.max_iterations);
    if (!lm.converged) {
      std::ostringstream diag;
      diag << "iterations=" << lm.iterations << " rss=" << lm.rss;
      throw FitError("sinusoid fit did not converge", diag.str());
    }
    theta = lm.params;
    jtj = lm.jtj;
    rss = lm.rss;
    fit.iterations = lm.iterations;
  }

  const double c = theta[0], a = theta[1], b = theta[2];
  k = std::abs(theta[3]);
  const double sign = theta[3] < 0 ? -1.0 : 1.0;  // cos(-kx + θ) = cos(kx − θ)
  const double amp = std::hypot(a, b);
  fit.offset = c;
  fit.amplitude = amp;
  fit.period = two_pi / k;
  fit.phase = detail::wrap_phase(sign * std::atan2(-b, a) - k * x0);
  fit.visibility = c > 0.0 ? amp / c : 0.0;
  fit.residual_rms = std::sqrt(rss / static_cast<double>(n));

  // Delta-method covariance of (offset, amplitude, period, phase).
  const double dof = std::max<double>(1.0, static_cast<double>(n) - n_params);
  const double sigma2 = rss / dof;
  Eigen::MatrixXd cov = sigma2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, n_params);
  g(0, 0) = 1.0;
  if (amp > 0.0) {
    g(1, 1) = a / amp;
    g(1, 2) = b / amp;
    g(3, 1) = sign * b / (amp * amp);
    g(3, 2) = -sign * a / (amp * amp);
  }
  if (n_params == 4) {
    g(2, 3) = -two_pi / (k * k) * sign;
    g(3, 3) = -x0 * sign;
  }
  const Eigen::MatrixXd out_cov = g * cov * g.transpose();
  fit.covariance_diag = {out_cov(0, 0), out_cov(1, 1), out_cov(2, 2), out_cov(3, 3)};

  if (span < 1.5 * fit.period) {
    std::ostringstream diag;
    diag << "span=" << span << " period=" << fit.period;
    throw FitError("scan spans fewer than 1.5 periods", diag.str());
  }
  return fit;
}

struct Extremum {
  double position = 0.0;
  double max = 0.0;
  double min = 0.0;
};

struct EnvelopeFit {
  double center = 0.0;
  double width_fwhm = 0.0;
  double peak_visibility = 0.0;
  double residual_rms = 0.0;
};

/// Gaussian fit v(x) = peak·exp(−(x−center)²/2σ²) to per-position visibility.
inline EnvelopeFit fit_envelope(const std::vector<Extremum>& extrema) {
  if (extrema.size() < 4) throw FitError("envelope fit needs at least 4 extrema pairs");
  const Eigen::Index n = static_cast<Eigen::Index>(extrema.size());
  std::vector<double> xs, vs;
  for (const auto& e : extrema) {
    xs.push_back(e.position);
    vs.push_back(visibility(e.max, e.min));
  }
  const auto [vmin, vmax] = std::minmax_element(vs.begin(), vs.end());
  if (*vmax - *vmin <= 1e-12 * std::max(*vmax, 1e-300)) throw FitError("envelope is flat", "all visibilities equal");

  // Seed from a weighted quadratic fit of ln v, exact for a noiseless Gaussian.
  double x0 = 0.0;
  for (double x : xs) x0 += x;
  x0 /= static_cast<double>(n);
  double scale = 0.0;
  for (double x : xs) scale = std::max(scale, std::abs(x - x0));
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = (xs[i] - x0) / scale;
    const double w = std::max(vs[i], 1e-12);
    design.row(i) << w, w * u, w * u * u;
    rhs[i] = w * std::log(w);
  }
  const Eigen::Vector3d q = design.colPivHouseholderQr().solve(rhs);
  if (!(q[2] < 0.0)) throw FitError("envelope is not peaked", "log-visibility curvature is non-negative");
  const double sigma0 = scale * std::sqrt(-1.0 / (2.0 * q[2]));
  const double center0 = x0 + scale * (-q[1] / (2.0 * q[2]));
  const double peak0 = std::exp(q[0] - q[1] * q[1] / (4.0 * q[2]));

  auto eval = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& jac) {
    r.resize(n);
    jac.resize(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = xs[i] - p[1];
      const double e = std::exp(-d * d / (2.0 * p[2] * p[2]));
      r[i] = p[0] * e - vs[i];
      jac.row(i) << e, p[0] * e * d / (p[2] * p[2]), p[0] * e * d * d / (p[2] * p[2] * p[2]);
    }
  };
  const auto lm = detail::levenberg_marquardt(Eigen::Vector3d(peak0, center0, sigma0), eval, 200);
  if (!lm.converged) throw FitError("envelope fit did not converge");
  EnvelopeFit out;
  out.peak_visibility = lm.params[0];
  out.center = lm.params[1];
  out.width_fwhm = 2.0 * std::sqrt(2.0 * std::numbers::ln2) * std::abs(lm.params[2]);
  out.residual_rms = std::sqrt(lm.rss / static_cast<double>(n));
  return out;
}

/// Largest and smallest value in a local fringe record.
inline Extremum local_extremum(double position, const std::vector<double>& values) {
  if (values.empty()) throw ArgumentError("empty fringe record");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {position, *hi, *lo};
}

/// Pointwise product of two detector signals sampled at the same positions.
inline std::vector<double> classical_product(const std::vector<double>& positions_a, const std::vector<double>& a,
                                             const std::vector<double>& positions_b, const std::vector<double>& b) {
  if (positions_a.size() != a.size() || positions_b.size() != b.size())
    throw ArgumentError("scan positions and values differ in length");
  if (positions_a.size() != positions_b.size()) throw ArgumentError("scans have different lengths");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double tol = 1e-9 * std::max(1.0, std::abs(positions_a[i]));
    if (std::abs(positions_a[i] - positions_b[i]) > tol) throw ArgumentError("scan positions are misaligned");
    out[i] = a[i] * b[i];
  }
  return out;
}

inline std::vector<double> classical_product(const ScanResult& scan) {
  return classical_product(scan.positions_nm, scan.singles_d1, scan.positions_nm, scan.singles_d2);
}

/// Mean plus first and second harmonic of a fundamental period.
struct HarmonicContent {
  double dc = 0.0;
  double first = 0.0;
  double second = 0.0;

  double second_visibility() const { return dc > 0.0 ? second / dc : 0.0; }
};

inline HarmonicContent harmonic_content(const std::vector<double>& xs, const std::vector<double>& ys,
                                        double fundamental_period) {
  if (xs.size() != ys.size() || xs.size() < 5) throw ArgumentError("harmonic analysis needs >= 5 aligned points");
  if (!(fundamental_period > 0.0)) throw ArgumentError("fundamental period must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  const double k = 2.0 * std::numbers::pi / fundamental_period;
  Eigen::MatrixXd design(n, 5);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design.row(i) << 1.0, std::cos(k * xs[i]), std::sin(k * xs[i]), std::cos(2 * k * xs[i]), std::sin(2 * k * xs[i]);
    rhs[i] = ys[i];
  }
  const Eigen::VectorXd s = design.colPivHouseholderQr().solve(rhs);
  return {s[0], std::hypot(s[1], s[2]), std::hypot(s[3], s[4])};
}

/// Side-by-side spectra of the classical singles product and the measured
/// coincidence over the same scan.
struct ClassicalComparison {
  HarmonicContent classical;
  HarmonicContent quantum;
};

inline ClassicalComparison compare_classical_quantum(const ScanResult& scan, double fundamental_period) {
  return {harmonic_content(scan.positions_nm, classical_product(scan), fundamental_period),
          harmonic_content(scan.positions_nm, scan.coincidence, fundamental_period)};
}

/// Poisson counts with mean total_events·p per position and channel.
/// Deterministic for a given seed.
inline ScanResult synthesize_counts(const ScanResult& scan, std::int64_t total_events, std::uint64_t seed) {
  if (total_events < 0) throw ArgumentError("total_events must be non-negative");
  std::mt19937_64 rng(seed);
  auto draw = [&](const std::vector<double>& probs) {
    std::vector<double> out(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      const double p = probs[i];
      if (!(p >= 0.0 && p <= 1.0 + 1e-12)) throw ArgumentError("probabilities must lie in [0, 1]");
      const double mean = p * static_cast<double>(total_events);
      if (mean <= 0.0) continue;
      std::poisson_distribution<std::int64_t> poisson(mean);
      out[i] = static_cast<double>(poisson(rng));
    }
    return out;
  };
  ScanResult out;
  out.positions_nm = scan.positions_nm;
  out.singles_d1 = draw(scan.singles_d1);
  out.singles_d2 = draw(scan.singles_d2);
  out.coincidence = draw(scan.coincidence);
  return out;
}

}  // namespace zwm

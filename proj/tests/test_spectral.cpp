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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "oracle/fft_envelope.hpp"
#include "zwm/fringe.hpp"
#include "zwm/spectral.hpp"

namespace zwm {
namespace {

JointSpectralAmplitude default_jsa() { return build_jsa(SourceSpectrum{}); }

JointSpectralAmplitude filtered_jsa() { return apply_filter(default_jsa(), Arm::signal, FilterSpec{}); }

// Purity Tr(ρ²)/Tr(ρ)² of the reduced signal state ρ = F F†, no SVD involved.
double trace_purity(const JointSpectralAmplitude& jsa) {
  const Eigen::MatrixXcd rho = jsa.values * jsa.values.adjoint();
  const double tr = rho.trace().real();
  return (rho * rho).trace().real() / (tr * tr);
}

TEST(Grid, AxisValidation) {
  EXPECT_THROW(SpectralGrid({1.0, 2.0, 4.0}, {1.0, 2.0}), ConfigError);
  EXPECT_THROW(SpectralGrid({3.0, 2.0, 1.0}, {1.0, 2.0}), ConfigError);
  EXPECT_THROW(SpectralGrid({1.0}, {1.0, 2.0}), ConfigError);
  EXPECT_THROW(SpectralGrid::axis(1.0, 0.0, 8), ConfigError);
  const SpectralGrid g(SpectralGrid::axis(10.0, 2.0, 5), SpectralGrid::axis(5.0, 1.0, 3));
  EXPECT_DOUBLE_EQ(g.signal_step(), 1.0);
  EXPECT_DOUBLE_EQ(g.idler_center(), 5.0);
}

TEST(Jsa, NormalizedOnDefaultGrid) {
  const auto jsa = default_jsa();
  EXPECT_EQ(jsa.values.rows(), 256);
  EXPECT_EQ(jsa.values.cols(), 256);
  EXPECT_NEAR(jsa.weight(), 1.0, 1e-9);
}

TEST(Jsa, EnergyConservationAtPumpFrequency) {
  const auto jsa = default_jsa();
  const auto& ws = jsa.grid.signal_axis();
  const auto& wi = jsa.grid.idler_axis();
  // Histogram of |f|² over ωs + ωi in bins of one grid cell.
  const double cell = jsa.grid.signal_step();
  const double base = ws.front() + wi.front();
  std::vector<double> hist(static_cast<std::size_t>((ws.back() + wi.back() - base) / cell) + 2, 0.0);
  for (Eigen::Index r = 0; r < jsa.values.rows(); ++r)
    for (Eigen::Index c = 0; c < jsa.values.cols(); ++c)
      hist[static_cast<std::size_t>(std::lround((ws[r] + wi[c] - base) / cell))] += std::norm(jsa.values(r, c));
  const auto best = std::max_element(hist.begin(), hist.end()) - hist.begin();
  EXPECT_LE(std::abs(base + best * cell - angular_frequency(390.0)), cell);
}

TEST(Jsa, TightAntiCorrelation) { EXPECT_LT(jsi_correlation(default_jsa()), -0.9); }

TEST(Jsa, InconsistentEnergyRejected) {
  const SpectralGrid g = SourceSpectrum{}.default_grid();
  EXPECT_THROW(build_jsa(400.0, 1.0, 2e13, g), ConfigError);
  EXPECT_THROW(build_jsa(390.0, -1.0, 2e13, g), ConfigError);
}

TEST(Jsa, NarrowGridIsCoverageError) {
  SourceSpectrum s;
  s.grid_span_sigmas = 2.0;
  EXPECT_THROW(build_jsa(s), CoverageError);
  s.grid_span_sigmas = 3.5;
  EXPECT_NO_THROW(build_jsa(s));
}

TEST(Jsa, WidePumpApproachesSeparableLimit) {
  double previous = std::numeric_limits<double>::infinity();
  for (double bw : {1.0, 5.0, 20.0, 80.0}) {
    SourceSpectrum s;
    s.pump_bandwidth_nm = bw;
    s.grid_points = 192;
    const auto jsa = build_jsa(s);
    const double r = jsi_correlation(jsa);
    const double k = schmidt_analysis(jsa).schmidt_number;
    // A bivariate Gaussian |f|² with correlation r has K = 1/√(1 − r²).
    EXPECT_NEAR(k, 1.0 / std::sqrt(1.0 - r * r), 1e-3 * k) << bw;
    EXPECT_LT(k, previous);
    previous = k;
  }
  EXPECT_LT(previous, 1.01);
}

TEST(Schmidt, ProductAmplitudeIsPure) {
  const SpectralGrid g(SpectralGrid::axis(0.0, 5.0, 64), SpectralGrid::axis(0.0, 4.0, 48));
  Eigen::VectorXcd a(64), b(48);
  for (int k = 0; k < 64; ++k) a[k] = std::exp(-0.5 * std::pow(g.signal_axis()[k] / 1.1, 2)) * std::polar(1.0, 0.3 * k);
  for (int k = 0; k < 48; ++k) b[k] = std::exp(-0.5 * std::pow(g.idler_axis()[k] / 0.7, 2));
  const JointSpectralAmplitude jsa = JointSpectralAmplitude{g, a * b.transpose()}.normalized();
  const auto s = schmidt_analysis(jsa);
  EXPECT_NEAR(s.schmidt_number, 1.0, 1e-9);
  EXPECT_NEAR(s.purity, 1.0, 1e-9);
}

TEST(Schmidt, PurityMatchesTraceOracleAndBounds) {
  for (double bw : {0.5, 1.0, 3.0}) {
    SourceSpectrum src;
    src.pump_bandwidth_nm = bw;
    const auto jsa = build_jsa(src);
    for (const auto& j : {jsa, apply_filter(jsa, Arm::signal, FilterSpec{})}) {
      const auto s = schmidt_analysis(j);
      EXPECT_GT(s.purity, 0.0);
      EXPECT_LE(s.purity, 1.0 + 1e-12);
      EXPECT_GE(s.schmidt_number, 1.0 - 1e-12);
      EXPECT_NEAR(s.purity, trace_purity(j), 1e-9);
      double sum = 0.0;
      for (double l : s.singular_values) sum += l * l;
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(Filter, AllPassRectangleIsIdentity) {
  const auto jsa = default_jsa();
  const FilterSpec wide{632.8, 1e4, FilterShape::rectangular};
  const auto out = apply_filter(jsa, Arm::signal, wide, false);
  EXPECT_EQ((out.values - jsa.values).cwiseAbs().maxCoeff(), 0.0);
  const FilterSpec wide_idler{1016.4, 1e4, FilterShape::rectangular};
  const double scale = jsa.values.cwiseAbs().maxCoeff();
  EXPECT_LE((apply_filter(jsa, Arm::idler, wide_idler).values - jsa.values).cwiseAbs().maxCoeff(), 1e-14 * scale);
}

TEST(Filter, NarrowSignalFilterRaisesPurity) {
  const auto jsa = default_jsa();
  const auto filtered = apply_filter(jsa, Arm::signal, FilterSpec{});
  EXPECT_GT(schmidt_analysis(filtered).purity, schmidt_analysis(jsa).purity);
  EXPECT_GT(trace_purity(filtered), trace_purity(jsa));
}

TEST(Filter, RenormalizationFlag) {
  const auto jsa = default_jsa();
  const auto kept = apply_filter(jsa, Arm::signal, FilterSpec{});
  EXPECT_NEAR(kept.weight(), 1.0, 1e-9);
  const auto raw = apply_filter(jsa, Arm::signal, FilterSpec{}, false);
  EXPECT_GT(raw.weight(), 0.0);
  EXPECT_LT(raw.weight(), 1.0);
}

TEST(Filter, DisjointPassbandIsDegenerate) {
  const auto jsa = default_jsa();
  EXPECT_THROW(apply_filter(jsa, Arm::signal, {532.0, 2.0, FilterShape::rectangular}), DegenerateOutputError);
  EXPECT_THROW(apply_filter(jsa, Arm::signal, {532.0, 2.0, FilterShape::gaussian}), DegenerateOutputError);
  EXPECT_THROW(apply_filter(jsa, Arm::signal, {632.8, 0.0, FilterShape::gaussian}), ArgumentError);
}

TEST(Envelope, UnitAtZeroSymmetricAndBounded) {
  const auto jsa = filtered_jsa();
  std::vector<double> delays;
  for (int k = -60; k <= 60; ++k) delays.push_back(k * 5e-15);
  const auto env = coincidence_envelope(jsa, delays);
  ASSERT_EQ(env.size(), delays.size());
  EXPECT_EQ(env[60].visibility, 1.0);
  for (int k = 0; k <= 60; ++k) {
    EXPECT_NEAR(env[60 + k].visibility, env[60 - k].visibility, 1e-9);
    EXPECT_LE(env[60 + k].visibility, 1.0);
    if (k > 0) {
      EXPECT_LE(env[60 + k].visibility, env[59 + k].visibility + 1e-12);
    }
  }
}

TEST(Envelope, HalfWidthMatchesFftOracle) {
  for (const auto& jsa : {filtered_jsa(), default_jsa()}) {
    const double ours = envelope_half_width(jsa);
    const double fft = oracle::fft_half_width(jsa);
    ASSERT_GT(fft, 0.0);
    EXPECT_NEAR(ours, fft, 0.01 * fft);
    EXPECT_NEAR(idler_coherence(jsa, ours), 0.5, 1e-9);
  }
}

TEST(Envelope, GridRefinementStability) {
  SourceSpectrum coarse, fine;
  fine.grid_points = 512;
  const FilterSpec filter;
  const auto a = apply_filter(build_jsa(coarse), Arm::signal, filter);
  const auto b = apply_filter(build_jsa(fine), Arm::signal, filter);
  const double ka = schmidt_analysis(a).schmidt_number, kb = schmidt_analysis(b).schmidt_number;
  EXPECT_LT(std::abs(ka - kb) / ka, 1e-3);
  for (double tau : {2e-14, 1e-13, 2e-13}) {
    const double va = idler_coherence(a, tau), vb = idler_coherence(b, tau);
    EXPECT_LT(std::abs(va - vb) / va, 1e-3) << tau;
  }
}

TEST(FringeEnvelope, ZeroDelayMatchesMonochromatic) {
  ExperimentConfig c;
  c.gamma = 0.8;
  const auto r = fringe_with_envelope(c, filtered_jsa(), {0.0});
  const PointResult p = run_point(c, 0.0);
  EXPECT_EQ(r.coincidence[0], p.coincidence);
  EXPECT_EQ(r.singles_d1[0], p.singles_d1);
}

TEST(FringeEnvelope, CarrierPeriod) {
  ExperimentConfig c;
  const auto xs = linspace(-2 * 1016.4, 2 * 1016.4, 201);
  const auto r = fringe_with_envelope(c, filtered_jsa(), xs);
  EXPECT_NEAR(fit_sinusoid(xs, r.coincidence).period, 508.2, 0.1);
}

TEST(FringeEnvelope, SymmetricEnvelopePeakedAtZero) {
  ExperimentConfig c;
  c.position_convention = PositionConvention::mirror_displacement;
  const auto jsa = filtered_jsa();
  std::vector<double> vis;
  for (double center : {-35000.0, -15000.0, 0.0, 15000.0, 35000.0}) {
    const auto r = fringe_with_envelope(c, jsa, linspace(center - 508.2, center + 508.2, 41));
    const Extremum e = local_extremum(center, r.coincidence);
    vis.push_back(visibility(e.max, e.min));
  }
  EXPECT_NEAR(vis[0], vis[4], 1e-6);
  EXPECT_NEAR(vis[1], vis[3], 1e-6);
  EXPECT_GT(vis[2], vis[1]);
  EXPECT_GT(vis[1], vis[0]);
  EXPECT_GT(vis[2], 0.999);
}

TEST(FringeEnvelope, EmptyPositionsRejected) {
  EXPECT_THROW(fringe_with_envelope(ExperimentConfig{}, filtered_jsa(), {}), ArgumentError);
}

}  // namespace
}  // namespace zwm

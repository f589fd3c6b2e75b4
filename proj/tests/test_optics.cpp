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
#include <numbers>
#include <random>

#include "oracle/dense_fock.hpp"
#include "oracle/seeded_emission.hpp"
#include "zwm/optics.hpp"

namespace zwm {
namespace {

using oracle::DenseBasis;
using oracle::Vec;

constexpr double kPi = std::numbers::pi;
const double kHalf = 1.0 / std::numbers::sqrt2;

std::shared_ptr<const ModeRegistry> eight_modes() {
  return ModeRegistry::make({{"S1"}, {"S2"}, {"I1"}, {"I2"}, {"A1"}, {"A2"}, {"L1"}, {"L2"}}, 4);
}

TEST(Phase, Examples) {
  const auto reg = ModeRegistry::make({{"a"}, {"b"}});
  const auto a = reg->mode("a");
  const FockState two = basis_state(reg, {2, 0});
  EXPECT_EQ(apply_phase(two, a, 0.0).amplitude({2, 0}), Complex(1.0));
  EXPECT_NEAR(std::abs(apply_phase(two, a, kPi / 2).amplitude({2, 0}) + 1.0), 0.0, 1e-15);
  const FockState pair = basis_state(reg, {1, 1});
  EXPECT_NEAR(std::abs(apply_phase(pair, a, 0.3).amplitude({1, 1}) - std::polar(1.0, 0.3)), 0.0, 1e-15);
}

TEST(Phase, UnknownModeAndNonFinite) {
  const auto reg = ModeRegistry::make({{"a"}});
  const auto other = ModeRegistry::make({{"a"}, {"b"}});
  EXPECT_THROW(apply_phase(vacuum(reg), other->mode("b"), 0.1), ArgumentError);
  EXPECT_THROW(apply_phase(vacuum(reg), reg->mode("a"), std::nan("")), ArgumentError);
}

TEST(BeamSplitter, HongOuMandel) {
  const auto reg = ModeRegistry::make({{"a"}, {"b"}});
  const FockState out = apply_beam_splitter(basis_state(reg, {1, 1}), {reg->mode("a"), reg->mode("b")});
  EXPECT_LT(std::abs(out.amplitude({1, 1})), 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude({2, 0}) - Complex(0.0, kHalf)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude({0, 2}) - Complex(0.0, kHalf)), 0.0, 1e-15);
}

TEST(BeamSplitter, SinglePhoton) {
  const auto reg = ModeRegistry::make({{"a"}, {"b"}});
  const FockState out = apply_beam_splitter(basis_state(reg, {1, 0}), {reg->mode("a"), reg->mode("b")});
  EXPECT_NEAR(std::abs(out.amplitude({1, 0}) - kHalf), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude({0, 1}) - Complex(0.0, kHalf)), 0.0, 1e-15);
}

TEST(BeamSplitter, FullTransmissionIsIdentity) {
  const auto reg = eight_modes();
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const FockState s = oracle::random_state(reg, 4, rng);
    const FockState out = apply_beam_splitter(s, {(*reg)[0], (*reg)[1], 1.0});
    EXPECT_NEAR(std::abs(inner_product(s, out) - 1.0), 0.0, 1e-12);
  }
}

TEST(BeamSplitter, TwoBalancedSplittersSwapUpToPhase) {
  const auto reg = ModeRegistry::make({{"a"}, {"b"}}, 2);
  const BeamSplitterSpec bs{reg->mode("a"), reg->mode("b")};
  for (int na = 0; na <= 2; ++na)
    for (int nb = 0; na + nb <= 2; ++nb) {
      const FockState out = apply_beam_splitter(apply_beam_splitter(basis_state(reg, {na, nb}), bs), bs);
      EXPECT_NEAR(std::abs(out.amplitude({nb, na})), 1.0, 1e-12) << na << "," << nb;
      EXPECT_NEAR(out.norm(), 1.0, 1e-12);
    }
}

TEST(BeamSplitter, ArgumentChecks) {
  const auto reg = ModeRegistry::make({{"a"}, {"b"}}, 2);
  const auto a = reg->mode("a");
  EXPECT_THROW(apply_beam_splitter(vacuum(reg), {a, a}), ArgumentError);
  EXPECT_THROW(apply_beam_splitter(vacuum(reg), {a, reg->mode("b"), 1.5}), ArgumentError);
}

TEST(BeamSplitter, MatchesDenseExponential) {
  const auto reg = eight_modes();
  const DenseBasis basis(8, 4);
  for (auto [a, b, t] : {std::tuple{0u, 1u, kHalf}, std::tuple{2u, 5u, 0.6}, std::tuple{7u, 3u, 0.93}}) {
    const oracle::Mat u = basis.beam_splitter(a, b, t);
    for (Eigen::Index j = 0; j < basis.dim(); ++j) {
      const FockState got =
          apply_beam_splitter(basis_state(reg, OccupationVector(basis.state(j))), {(*reg)[a], (*reg)[b], t});
      ASSERT_LT(oracle::max_abs_diff(basis.from_state(got), u.col(j)), 1e-12) << "column " << j;
    }
  }
}

TEST(Overlap, GammaOneRelabels) {
  const auto reg = ModeRegistry::make({{"I1"}, {"I2"}, {"A"}});
  const OverlapSpec spec{reg->mode("I1"), reg->mode("I2"), 1.0, reg->mode("A")};
  const FockState out = apply_overlap(basis_state(reg, {2, 0, 0}), spec);
  EXPECT_NEAR(std::abs(out.amplitude({0, 2, 0}) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(out.size(), 1u);
}

TEST(Overlap, GammaZeroMovesToAncilla) {
  const auto reg = ModeRegistry::make({{"I1"}, {"I2"}, {"A"}});
  const OverlapSpec spec{reg->mode("I1"), reg->mode("I2"), 0.0, reg->mode("A")};
  const FockState out = apply_overlap(basis_state(reg, {1, 1, 0}), spec);
  EXPECT_NEAR(std::abs(out.amplitude({0, 1, 1}) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(out.size(), 1u);
}

TEST(Overlap, BinomialExpansionOfTwoPhotons) {
  const auto reg = ModeRegistry::make({{"I1"}, {"I2"}, {"A"}});
  const DenseBasis basis(3, 6);
  for (double g : {0.0, 0.3, 0.5, 0.8, 1.0}) {
    const double l = std::sqrt(1 - g * g);
    const FockState in = apply_creation(vacuum(reg), reg->mode("I1"), 2);
    const FockState out = apply_overlap(in, {reg->mode("I1"), reg->mode("I2"), g, reg->mode("A")});
    EXPECT_NEAR(out.amplitude({0, 2, 0}).real(), g * g * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(out.amplitude({0, 1, 1}).real(), 2 * g * l, 1e-14);
    EXPECT_NEAR(out.amplitude({0, 0, 2}).real(), l * l * std::sqrt(2.0), 1e-14);
    EXPECT_LT(oracle::max_abs_diff(basis.from_state(out), basis.overlap(basis.from_state(in), 0, 1, 2, g)), 1e-12);
  }
}

TEST(Overlap, ArgumentChecks) {
  const auto reg = ModeRegistry::make({{"I1"}, {"I2"}, {"A"}});
  const auto i1 = reg->mode("I1"), i2 = reg->mode("I2"), an = reg->mode("A");
  EXPECT_THROW(apply_overlap(basis_state(reg, {1, 0, 1}), {i1, i2, 0.5, an}), ArgumentError);
  EXPECT_THROW(apply_overlap(vacuum(reg), {i1, i2, 1.2, an}), ArgumentError);
  EXPECT_THROW(apply_overlap(vacuum(reg), {i1, i2, -0.1, an}), ArgumentError);
  EXPECT_THROW(apply_overlap(vacuum(reg), {i1, i2, 0.5, i2}), ArgumentError);
  EXPECT_THROW(apply_overlap(vacuum(reg), {i1, i1, 0.5, an}), ArgumentError);
}

TEST(Overlap, MatchesDenseOnEveryBasisStateWithFreeAncilla) {
  const auto reg = eight_modes();
  const DenseBasis basis(8, 4);
  for (double g : {0.0, 0.35, 0.9, 1.0}) {
    const oracle::Mat m = basis.substitution_matrix(basis.overlap_ops(2, 3, 4, g));
    for (Eigen::Index j = 0; j < basis.dim(); ++j) {
      if (basis.state(j)[4] != 0) continue;
      const FockState got = apply_overlap(basis_state(reg, OccupationVector(basis.state(j))),
                                          {(*reg)[2], (*reg)[3], g, (*reg)[4]});
      ASSERT_LT(oracle::max_abs_diff(basis.from_state(got), m.col(j)), 1e-12) << "column " << j;
    }
  }
}

TEST(Unitarity, PhaseSplitterAndOverlapPreserveNorm) {
  const auto reg = eight_modes();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    FockState s = oracle::random_state(reg, 4, rng);
    s = apply_phase(s, (*reg)[trial % 8], 2 * kPi * u(rng));
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    s = apply_beam_splitter(s, {(*reg)[0], (*reg)[1], u(rng)});
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    // Overlap is an isometry when the target mode starts empty.
    FockState::TermMap cleared;
    for (const auto& [occ, amp] : s.terms()) {
      OccupationVector o = occ;
      if (o.counts[3] != 0 || o.counts[4] != 0) continue;
      cleared[o] += amp;
    }
    if (cleared.empty()) continue;
    const FockState free = FockState::from_terms(reg, cleared).normalized();
    EXPECT_NEAR(apply_overlap(free, {(*reg)[2], (*reg)[3], u(rng), (*reg)[4]}).norm(), 1.0, 1e-12);
  }
}

TEST(Unitarity, OverlapOfOnePairSuperpositionIsNormPreserving) {
  const auto reg = ModeRegistry::make({{"S1"}, {"S2"}, {"I1"}, {"I2"}, {"A"}});
  for (double g : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const FockState psi =
        FockState::from_terms(reg, {{{1, 0, 1, 0, 0}, std::polar(kHalf, 0.7)}, {{0, 1, 0, 1, 0}, kHalf}});
    const FockState out = apply_overlap(psi, {reg->mode("I1"), reg->mode("I2"), g, reg->mode("A")});
    EXPECT_NEAR(out.norm(), 1.0, 1e-12);
  }
}

TEST(Overlap, CoherentlyPopulatedTargetChangesNorm) {
  // Both idler modes occupied in one term: the merged mode gains bosonic
  // weight, so the output norm exceeds one at γ = 1.
  const auto reg = ModeRegistry::make({{"I1"}, {"I2"}, {"A"}});
  const FockState out =
      apply_overlap(basis_state(reg, {1, 1, 0}), {reg->mode("I1"), reg->mode("I2"), 1.0, reg->mode("A")});
  EXPECT_NEAR(out.norm_squared(), 2.0, 1e-12);
}

TEST(Overlap, SinglePhotonIdlerActsAsDephasing) {
  // Reduced signal state of the one-pair superposition: the S1/S2 coherence
  // shrinks by exactly γ, checked against the dense partial trace.
  const auto reg = ModeRegistry::make({{"S1"}, {"S2"}, {"I1"}, {"I2"}, {"A"}}, 2);
  const DenseBasis basis(5, 2);
  const double phi = 0.9;
  const FockState psi =
      FockState::from_terms(reg, {{{1, 0, 1, 0, 0}, std::polar(kHalf, phi)}, {{0, 1, 0, 1, 0}, kHalf}});
  for (double g : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const FockState out = apply_overlap(psi, {reg->mode("I1"), reg->mode("I2"), g, reg->mode("A")});
    const auto red = basis.partial_trace(basis.from_state(out), {0, 1});
    Eigen::Index i10 = -1, i01 = -1;
    for (std::size_t k = 0; k < red.basis.size(); ++k) {
      if (red.basis[k] == std::vector<int>{1, 0}) i10 = static_cast<Eigen::Index>(k);
      if (red.basis[k] == std::vector<int>{0, 1}) i01 = static_cast<Eigen::Index>(k);
    }
    ASSERT_GE(i10, 0);
    ASSERT_GE(i01, 0);
    const Complex coh = red.rho(i10, i01);
    EXPECT_NEAR(std::abs(coh - g * 0.5 * std::polar(1.0, phi)), 0.0, 1e-12);
    EXPECT_NEAR(red.rho(i10, i10).real(), 0.5, 1e-12);
  }
}

TEST(Gain, SpontaneousLimitAndAffineLaw) {
  EXPECT_EQ(stimulated_gain_ratio(0.0), 1.0);
  EXPECT_DOUBLE_EQ(stimulated_gain_ratio(0.01), 1.01);
  EXPECT_DOUBLE_EQ(stimulated_gain_ratio(1.0), 2.0);
  for (double mu : {0.0, 0.2, 0.5, 3.0, 10.0}) EXPECT_DOUBLE_EQ(stimulated_gain_ratio(mu), 1.0 + mu);
  EXPECT_THROW(stimulated_gain_ratio(-0.1), ArgumentError);
  EXPECT_THROW(stimulated_pair_gain_ratio(-0.1), ArgumentError);
}

TEST(Gain, MatchesSeededEmissionOracle) {
  for (double mu : {0.0, 0.001, 0.01, 0.1, 1.0, 2.5}) {
    EXPECT_NEAR(stimulated_gain_ratio(mu), oracle::seeded_rate_ratio(mu, 1), 1e-9) << mu;
    EXPECT_NEAR(stimulated_pair_gain_ratio(mu), oracle::seeded_rate_ratio(mu, 2), 1e-9) << mu;
  }
}

}  // namespace
}  // namespace zwm

// Copyright 2026 The fluxccz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fluxccz/composite.hpp"

namespace fluxccz {
namespace {

DeviceConfig uncoupled() {
  DeviceConfig d = reference_device();
  d.g = {};
  return d;
}

const DressedModel& reference_dressed_8() {
  static const DressedModel d = diagonalize_and_label(build_composite(reference_device(), 8), 128);
  return d;
}

TEST(Composite, DimensionIsLevelsToTheFourth) {
  EXPECT_EQ(build_composite(reference_device(), 4).dim(), 256);
  EXPECT_EQ(build_composite(reference_device(), 5).dim(), 625);
}

TEST(Composite, RejectsLevelsOutsideRange) {
  EXPECT_THROW(build_composite(reference_device(), 3), InvalidArgument);
  EXPECT_THROW(build_composite(reference_device(), 13), InvalidArgument);
}

TEST(Composite, HamiltonianSymmetric) {
  const CompositeModel m = build_composite(reference_device(), 5);
  EXPECT_LT((m.h - m.h.transpose()).cwiseAbs().maxCoeff(), 1e-10 * m.h.cwiseAbs().maxCoeff());
  EXPECT_TRUE(m.parity_conserving);
}

TEST(Composite, CouplingMatrixMustBeSymmetric) {
  DeviceConfig d = reference_device();
  d.g[0][1] = 0.2;
  EXPECT_THROW(build_composite(d, 4), InvalidArgument);
}

TEST(Composite, UncoupledEnergiesAreBareSums) {
  const CompositeModel m = build_composite(uncoupled(), 5);
  std::vector<double> sums;
  for (const auto& label : m.basis_labels) {
    double e = 0.0;
    for (int s = 0; s < kNumSubsystems; ++s) e += m.subsystems[s].energies(label[s]);
    sums.push_back(e);
  }
  std::sort(sums.begin(), sums.end());
  const DressedModel d = diagonalize_and_label(m, 64);
  for (int k = 0; k < 64; ++k) EXPECT_NEAR(d.energies(k), sums[k], 1e-9);
  for (int k = 0; k < 64; ++k) EXPECT_NEAR(d.overlap_quality(k), 1.0, 1e-9);
  for (int k = 0; k < 64; ++k) EXPECT_NEAR(d.energies(k), d.energy(d.labels[k]), 0.0);
}

TEST(Composite, UncoupledHasNoParasiticInteraction) {
  const SpectrumSummary s = coupler_transition_table(diagonalize_and_label(build_composite(uncoupled(), 5), 64));
  for (double z : s.zeta_zz) EXPECT_LT(std::abs(z), 1.0);
  EXPECT_LT(std::abs(s.zeta_zzz), 1.0);
  for (double f : s.f) EXPECT_NEAR(f, s.f[0], 1e-9);
  EXPECT_NEAR(s.delta, 0.0, 1e-9);
}

TEST(Composite, DressedVectorsOrthonormal) {
  const DressedModel d = diagonalize_and_label(build_composite(reference_device(), 5), 64);
  const RealMatrix gram = d.vectors.transpose() * d.vectors;
  EXPECT_LT((gram - RealMatrix::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT(hermiticity_defect(d.n_t), 1e-10);
}

TEST(Composite, KeepBoundsChecked) {
  const CompositeModel m = build_composite(reference_device(), 4);
  EXPECT_THROW(diagonalize_and_label(m, 8), InvalidArgument);
  EXPECT_THROW(diagonalize_and_label(m, 257), InvalidArgument);
}

TEST(Composite, ComputationalStatesLabeledWithHighOverlap) {
  const DressedModel& d = reference_dressed_8();
  for (int c = 0; c <= 1; ++c)
    for (int idx : d.computational_indices(c)) EXPECT_GT(d.overlap_quality(idx), 0.8);
}

TEST(Composite, LabelsAreUnique) {
  const DressedModel& d = reference_dressed_8();
  std::vector<BareLabel> labels = d.labels;
  std::sort(labels.begin(), labels.end());
  EXPECT_EQ(std::adjacent_find(labels.begin(), labels.end()), labels.end());
}

TEST(Composite, GroundCouplerTransition) {
  const SpectrumSummary s = coupler_transition_table(reference_dressed_8());
  EXPECT_NEAR(s.f[0], 6.9435, 2e-3);
  EXPECT_NEAR(s.f[7], 7.2994, 2e-3);
  EXPECT_DOUBLE_EQ(s.delta, s.f[7] - s.f[6]);
}

TEST(Composite, SwappingOuterFluxoniumsPermutesTransitions) {
  DeviceConfig swapped = reference_device();
  std::swap(swapped.fluxoniums[0], swapped.fluxoniums[2]);
  const auto a = coupler_transition_table(diagonalize_and_label(build_composite(reference_device(), 5), 64));
  const auto b = coupler_transition_table(diagonalize_and_label(build_composite(swapped, 5), 64));
  auto reverse_bits = [](int x) { return ((x & 1) << 2) | (x & 2) | ((x >> 2) & 1); };
  for (int x = 0; x < 8; ++x) EXPECT_NEAR(a.f[x], b.f[reverse_bits(x)], 1e-6) << x;
}

TEST(Composite, TruncationKeepsComputationalSector) {
  const DressedModel full = diagonalize_and_label(build_composite(reference_device(), 5), 64);
  const DressedModel reduced = truncate(full, 32);
  EXPECT_EQ(reduced.size(), 32);
  for (int c = 0; c <= 1; ++c)
    for (int b = 0; b < 8; ++b)
      EXPECT_EQ(reduced.energy(computational_label(b, c)), full.energy(computational_label(b, c)));
  for (int k = 1; k < 32; ++k) EXPECT_GE(reduced.energies(k), reduced.energies(k - 1));
}

}  // namespace
}  // namespace fluxccz

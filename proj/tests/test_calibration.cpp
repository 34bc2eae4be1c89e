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

#include <cmath>

#include <gtest/gtest.h>

#include "fluxccz/calibration.hpp"
#include "fluxccz/two_level.hpp"

namespace fluxccz {
namespace {

const DressedModel& model() {
  static const DressedModel d = diagonalize_and_label(build_composite(reference_device(), 4), 32);
  return d;
}

TEST(Design, AreaConditionRoundTrip) {
  const DressedModel& d = model();
  for (double tau : {40.0, 78.0, 195.0}) {
    const double a = area_amplitude(d, Transition::kAllOne, tau);
    EXPECT_GT(a, 0.0);
    EXPECT_NEAR(area_duration(d, Transition::kAllOne, a), tau, 1e-9 * tau);
  }
  // Longer pulses need less amplitude.
  EXPECT_GT(area_amplitude(d, Transition::kAllOne, 78.0), area_amplitude(d, Transition::kAllOne, 195.0));
}

TEST(Design, TransitionData) {
  const DressedModel& d = model();
  const auto [f111, n111] = transition_data(d, Transition::kAllOne);
  const auto [f000, n000] = transition_data(d, Transition::kAllZero);
  EXPECT_NEAR(f111, d.energy(computational_label(7, 1)) - d.energy(computational_label(7, 0)), 1e-15);
  EXPECT_GT(f111, f000);
  EXPECT_GT(n111, 0.5);
  EXPECT_GT(n000, 0.5);
}

TEST(Design, FullPhaseIsResonant) {
  // A pi phase from a returning pulse needs no detuning.
  const PulseDesign p = design_pulse(model(), Transition::kAllOne, 78.0, kPi);
  EXPECT_NEAR(p.delta, 0.0, 1e-6);
  EXPECT_NEAR(p.omega, two_pi_amplitude(78.0), 1e-6 * p.omega);
}

TEST(Design, PartialPhaseDetunesBelowTransition) {
  const DressedModel& d = model();
  const PulseDesign p = design_pulse(d, Transition::kAllOne, 54.3, kPi / 2.0);
  EXPECT_GT(p.delta, 0.0);
  EXPECT_LT(p.frequency, transition_data(d, Transition::kAllOne).first);
  // The design returns the two-level system with the requested phase.
  const DrivePulse two_level = DrivePulse::gaussian(p.omega, 54.3, 1.0);
  const std::vector<double> deltas{p.delta};
  const TwoLevelPoint pt = two_level_sweep(two_level, deltas).front();
  EXPECT_LT(pt.population, 1e-6);
  EXPECT_NEAR(std::abs(pt.phase), kPi / 2.0, 1e-4);
}

TEST(Search, ZeroAmplitudeHitsTheBoundary) {
  const DressedModel& d = model();
  const double f111 = transition_data(d, Transition::kAllOne).first;
  const SearchWindow w{10.0, 13.0, f111 - 3e-3, f111 + 3e-3};
  EXPECT_THROW(calibrate_single_pulse(d, 0.0, w, ccz_gate()), RangeError);
}

TEST(Search, WindowValidation) {
  const SearchWindow bad{20.0, 10.0, 7.0, 7.1};
  EXPECT_THROW(calibrate_single_pulse(model(), 0.1, bad, ccz_gate()), InvalidArgument);
}

class ShortCcz : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const DressedModel& d = model();
    design_ = design_pulse(d, Transition::kAllOne, 30.0, kPi);
    // Strong short pulses are Stark-shifted well below f_111.
    const double f111 = transition_data(d, Transition::kAllOne).first;
    window_ = SearchWindow{27.0, 32.0, f111 - 12e-3, f111 - 5e-3};
    result_ = calibrate_single_pulse(d, design_.amplitude, window_, ccz_gate());
  }
  static PulseDesign design_;
  static SearchWindow window_;
  static CalibrationResult result_;
};
PulseDesign ShortCcz::design_;
SearchWindow ShortCcz::window_;
CalibrationResult ShortCcz::result_;

TEST_F(ShortCcz, OptimumInsideWindowAtFineResolution) {
  EXPECT_TRUE(window_.contains(result_.tau, result_.frequency));
  EXPECT_GT(result_.fidelity, 0.9);
  EXPECT_GE(result_.fidelity, 0.0);
  EXPECT_LE(result_.fidelity, 1.0);
  EXPECT_NEAR(std::remainder(result_.tau - window_.tau_min, 0.1), 0.0, 1e-9);
}

TEST_F(ShortCcz, LocalMaximumCertificate) {
  const CalibrationOptions o;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) {
      if (di == 0 && dj == 0) continue;
      const DrivePulse p =
          DrivePulse::gaussian(result_.amplitude, result_.tau + di * o.fine_tau_step, result_.frequency + dj * o.fine_f_step);
      EXPECT_LE(evaluate_pulse(model(), p, ccz_gate()).fidelity, result_.fidelity) << di << "," << dj;
    }
}

TEST_F(ShortCcz, Deterministic) {
  const CalibrationResult again = calibrate_single_pulse(model(), design_.amplitude, window_, ccz_gate());
  EXPECT_EQ(again.tau, result_.tau);
  EXPECT_EQ(again.frequency, result_.frequency);
  EXPECT_EQ(again.fidelity, result_.fidelity);
}

TEST_F(ShortCcz, ReportedFiguresMatchReevaluation) {
  const GateEvaluation e = evaluate_pulse(model(), result_.pulse(), ccz_gate());
  EXPECT_DOUBLE_EQ(e.fidelity, result_.fidelity);
  EXPECT_DOUBLE_EQ(e.leakage, result_.leakage);
  const auto ph = conditional_phases(e.gate);
  for (int k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(ph[k], result_.phases[k]);
}

TEST(TwoPulse, PhasesMustSumToPi) {
  TwoPulseSpec spec{DrivePulse::gaussian(0.05, 20, 6.9), DrivePulse::gaussian(0.05, 20, 7.3), 1.0, 1.0};
  EXPECT_THROW(compose_two_pulse_ccz(spec, model()), InvalidArgument);
}

TEST(TwoPulse, OnlyStarPulseGivesConjugatedGate) {
  const DressedModel& d = model();
  const DrivePulse star = DrivePulse::gaussian(0.05, 20.0, 6.93);
  const std::vector<SequenceStep> steps{SequenceStep::all_x(), SequenceStep::drive(star), SequenceStep::all_x()};
  const GateOperator x = all_x_gate();
  EXPECT_LT((sequence_gate(d, steps) - x * raw_gate(d, star) * x).cwiseAbs().maxCoeff(), 1e-15);
  // With ideal gates, X CCPhase*(phi) X puts the phase on |111> only.
  const GateOperator g = x * ccphase_star_gate(kPi / 2) * x;
  for (int b = 0; b < 7; ++b) EXPECT_NEAR(std::arg(g(b, b)), 0.0, 1e-15);
  EXPECT_NEAR(std::arg(g(7, 7)), kPi / 2, 1e-15);
}

TEST(TwoPulse, SequenceOrderAndTime) {
  const TwoPulseSpec spec{DrivePulse::gaussian(0.05, 40.6, 6.93), DrivePulse::gaussian(0.04, 54.3, 7.28)};
  const auto seq = spec.sequence();
  ASSERT_EQ(seq.size(), 4u);
  EXPECT_EQ(seq[0].pulse, spec.ccphase);
  EXPECT_EQ(seq[1].kind, SequenceStep::Kind::kAllX);
  EXPECT_EQ(seq[2].pulse, spec.ccphase_star);
  EXPECT_EQ(seq[3].kind, SequenceStep::Kind::kAllX);
  EXPECT_NEAR(spec.total_time(), 94.9, 1e-12);
}

TEST(Sweep, RequiresDescendingAmplitudes) {
  const std::vector<double> amps{0.01, 0.02};
  auto window_for = [](double) { return SearchWindow{10, 14, 7.2, 7.3}; };
  EXPECT_THROW(amplitude_sweep(model(), amps, window_for, ccz_gate()), InvalidArgument);
}

}  // namespace
}  // namespace fluxccz

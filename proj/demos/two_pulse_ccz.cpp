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


// Composes CCZ from the two CCPhase(pi/2) pulses stored in a configuration
// file and reports fidelity, leakage and the conditional phases.
//
//   two_pulse_ccz configs/paper-device.yaml

#include <cstdio>

#include "fluxccz/calibration.hpp"
#include "fluxccz/config.hpp"

int main(int argc, char** argv) {
  using namespace fluxccz;
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s CONFIG\n", argv[0]);
    return 1;
  }
  const RunConfig config = load_config(argv[1]);
  const auto& tp = config.two_pulse;
  if (!tp.ccphase.specified() || !tp.ccphase_star.specified()) {
    std::fprintf(stderr, "two_pulse.ccphase and two_pulse.ccphase_star must both be given\n");
    return 1;
  }
  auto pulse = [](const PulseConfig& p) { return DrivePulse::gaussian(p.amplitude_ghz, p.duration_ns, p.frequency_ghz); };

  const CompositeModel model = build_composite(config.device, config.numerics.levels, config.spectrum_numerics());
  const DressedModel dressed = diagonalize_and_label(model, config.numerics.keep);
  const TwoPulseSpec spec{pulse(tp.ccphase_star), pulse(tp.ccphase), kPi - tp.phase, tp.phase};
  const TwoPulseResult r = compose_two_pulse_ccz(spec, dressed);
  const auto phases = conditional_phases(r.evaluation.gate);

  std::printf("total pulse time %.1f ns\n", r.total_time);
  std::printf("fidelity %.5f%%, leakage %.2e\n", 100.0 * r.evaluation.fidelity, r.evaluation.leakage);
  std::printf("phases / pi: 011 %+.5f  101 %+.5f  110 %+.5f  111 %+.5f\n", phases[0] / kPi, phases[1] / kPi,
              phases[2] / kPi, phases[3] / kPi);
  return 0;
}

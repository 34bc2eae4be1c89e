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


// Prints the state-dependent coupler transitions and residual couplings of
// the reference device.
//
//   coupler_table [levels]

#include <cstdio>
#include <cstdlib>

#include "fluxccz/composite.hpp"

int main(int argc, char** argv) {
  using namespace fluxccz;
  const int levels = argc > 1 ? std::atoi(argv[1]) : 6;
  const CompositeModel model = build_composite(reference_device(), levels);
  const DressedModel dressed = diagonalize_and_label(model, 32);
  const SpectrumSummary s = coupler_transition_table(dressed);

  std::printf("levels per subsystem: %d (dimension %d)\n", levels, model.dim());
  for (int b = 0; b < 8; ++b)
    std::printf("f_%d%d%d = %.5f GHz\n", (b >> 2) & 1, (b >> 1) & 1, b & 1, s.f[b]);
  std::printf("Delta = %.2f MHz\n", 1e3 * s.delta);
  std::printf("zeta_ZZ = %.1f, %.1f, %.1f Hz; zeta_ZZZ = %.2f Hz\n", s.zeta_zz[0], s.zeta_zz[1], s.zeta_zz[2],
              s.zeta_zzz);
  return 0;
}

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

#pragma once

// Driven two-level model in the frame of the drive:
//     H / h = -delta/2 sigma_z + Omega(t) sigma_x,
// with Omega(t) the offset Gaussian envelope (the pulse amplitude is Omega's
// peak scale, in GHz). A resonant pulse rotates by 4 pi int(Omega dt), so a
// full 2 pi return needs int(Omega dt) = 1/2.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "fluxccz/common.hpp"
#include "fluxccz/pulse.hpp"

namespace fluxccz {

struct TwoLevelPoint {
  double delta = 0.0;       // GHz
  double population = 0.0;  // excited state after the pulse
  double phase = 0.0;       // ground-state phase relative to free evolution, (-pi, pi]
};

/// Envelope amplitude giving a resonant 2 pi rotation for the given duration
/// (sigma = 0.4 tau).
inline double two_pi_amplitude(double duration) { return 0.5 / unit_envelope_area(duration); }

/// Ground-state amplitudes (c0, c1) after the pulse, starting from |0>.
inline Eigen::Vector2cd two_level_evolve(const DrivePulse& pulse, double delta, int min_steps = 4000) {
  pulse.validate();
  require(std::isfinite(delta), "two_level_evolve: detuning must be finite");
  const double rate = std::abs(delta) + 2.0 * std::abs(pulse.amplitude);
  const long steps =
      std::max<long>(min_steps, static_cast<long>(std::ceil(200.0 * rate * pulse.duration)));
  const double h = pulse.duration / static_cast<double>(steps);

  // d c / dt = -2 pi i H c
  auto rhs = [&](double t, const Eigen::Vector2cd& c) {
    const double omega = gaussian_envelope(pulse, t);
    Eigen::Vector2cd out;
    out(0) = -kI * kTwoPi * (-0.5 * delta * c(0) + omega * c(1));
    out(1) = -kI * kTwoPi * (omega * c(0) + 0.5 * delta * c(1));
    return out;
  };
  Eigen::Vector2cd c(1.0, 0.0);
  for (long s = 0; s < steps; ++s) {
    const double t = s * h;
    const Eigen::Vector2cd k1 = rhs(t, c);
    const Eigen::Vector2cd k2 = rhs(t + 0.5 * h, c + 0.5 * h * k1);
    const Eigen::Vector2cd k3 = rhs(t + 0.5 * h, c + 0.5 * h * k2);
    const Eigen::Vector2cd k4 = rhs(t + h, c + h * k3);
    c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return c;
}

/// Residual excitation and common phase for each detuning. The phase is that
/// of the ground amplitude after removing the free factor exp(i pi delta tau).
inline std::vector<TwoLevelPoint> two_level_sweep(const DrivePulse& pulse, std::span<const double> deltas) {
  std::vector<TwoLevelPoint> out;
  out.reserve(deltas.size());
  for (double delta : deltas) {
    const Eigen::Vector2cd c = two_level_evolve(pulse, delta);
    const Complex rotated = c(0) * std::polar(1.0, -kPi * delta * pulse.duration);
    out.push_back({delta, std::norm(c(1)), wrap_phase(std::arg(rotated))});
  }
  return out;
}

}  // namespace fluxccz

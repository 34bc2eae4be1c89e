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

#include <cmath>

#include "fluxccz/common.hpp"

namespace fluxccz {

/// Microwave drive on the coupler charge:
///   H_drive / h = V(t) sin(2 pi f t) n_T,
///   V(t) = A [exp(-(t - tau/2)^2 / (2 sigma^2)) - exp(-(tau/2)^2 / (2 sigma^2))].
/// The constant offset makes the envelope vanish exactly at t = 0 and t = tau.
struct DrivePulse {
  double amplitude = 0.0;  // GHz
  double duration = 0.0;   // ns
  double sigma = 0.0;      // ns
  double frequency = 0.0;  // GHz

  static constexpr double kDefaultSigmaRatio = 0.4;

  static DrivePulse gaussian(double amplitude, double duration, double frequency) {
    return {amplitude, duration, kDefaultSigmaRatio * duration, frequency};
  }

  void validate() const {
    require(duration > 0.0, "pulse duration must be positive");
    require(sigma > 0.0, "pulse sigma must be positive");
    require(frequency > 0.0, "pulse frequency must be positive");
    require(std::isfinite(amplitude), "pulse amplitude must be finite");
  }
  friend bool operator==(const DrivePulse&, const DrivePulse&) = default;
};

inline double gaussian_envelope(const DrivePulse& pulse, double t) {
  if (t <= 0.0 || t >= pulse.duration) return 0.0;
  const double s2 = 2.0 * pulse.sigma * pulse.sigma;
  const double half = 0.5 * pulse.duration;
  return pulse.amplitude * (std::exp(-(t - half) * (t - half) / s2) - std::exp(-half * half / s2));
}

/// Instantaneous drive coefficient V(t) sin(2 pi f t).
inline double drive_signal(const DrivePulse& pulse, double t) {
  return gaussian_envelope(pulse, t) * std::sin(kTwoPi * pulse.frequency * t);
}

/// Closed-form integral of the envelope over [0, tau].
inline double envelope_area(const DrivePulse& pulse) {
  const double half = 0.5 * pulse.duration;
  const double s = pulse.sigma;
  const double gauss = s * std::sqrt(kTwoPi) * std::erf(half / (std::sqrt(2.0) * s));
  return pulse.amplitude * (gauss - pulse.duration * std::exp(-half * half / (2.0 * s * s)));
}

/// Envelope area per unit amplitude for a pulse of the given duration with
/// the default sigma ratio.
inline double unit_envelope_area(double duration) {
  return envelope_area(DrivePulse::gaussian(1.0, duration, 1.0));
}

}  // namespace fluxccz

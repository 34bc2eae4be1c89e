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

// Pulse calibration by grid search over duration and carrier frequency at a
// fixed amplitude, and the two-pulse CCZ built from CCPhase(pi/2) on the
// |1110>-|1111> transition and CCPhase*(pi/2) on |0000>-|0001>.
//
// Search: a full coarse grid over the window (1 ns x 1 MHz by default), then
// steepest-ascent climbs on the 0.1 ns x 0.1 MHz lattice anchored at the
// coarse optimum, first with stride 5 and then 1. A point is accepted only if
// it is strictly better than every other candidate examined before it, which
// makes ties resolve to lower duration, then lower frequency. An optional
// second model (typically the 128-level one) repeats the lattice climbs from
// the incumbent and provides the reported figures.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fluxccz/common.hpp"
#include "fluxccz/composite.hpp"
#include "fluxccz/dynamics.hpp"
#include "fluxccz/ptm.hpp"
#include "fluxccz/pulse.hpp"
#include "fluxccz/two_level.hpp"

namespace fluxccz {

/// Rectangle of durations (ns) and carrier frequencies (GHz).
struct SearchWindow {
  double tau_min = 0.0;
  double tau_max = 0.0;
  double f_min = 0.0;
  double f_max = 0.0;

  void validate() const {
    require(tau_min > 0.0 && tau_max > tau_min, "search window: need 0 < tau_min < tau_max");
    require(f_min > 0.0 && f_max > f_min, "search window: need 0 < f_min < f_max");
  }
  bool contains(double tau, double f) const {
    const double eps = 1e-9;
    return tau >= tau_min - eps && tau <= tau_max + eps && f >= f_min - eps && f <= f_max + eps;
  }
};

struct CalibrationOptions {
  double coarse_tau_step = 1.0;  // ns
  double coarse_f_step = 1e-3;   // GHz
  double fine_tau_step = 0.1;    // ns
  double fine_f_step = 1e-4;     // GHz
  double dt = kDefaultTimeStep;
};

struct CalibrationResult {
  double amplitude = 0.0;  // GHz
  double tau = 0.0;        // ns
  double frequency = 0.0;  // GHz
  double fidelity = 0.0;
  double leakage = 0.0;
  /// phi_011, phi_101, phi_110, phi_111 in radians.
  std::array<double, 4> phases{};
  GateMatrix gate;
  int evaluations = 0;

  DrivePulse pulse() const { return DrivePulse::gaussian(amplitude, tau, frequency); }
};

/// Drive transitions used for CCPhase-type gates.
enum class Transition {
  kAllZero,  // |0000> - |0001>, phase on |000>
  kAllOne,   // |1110> - |1111>, phase on |111>
};

inline int transition_bits(Transition t) { return t == Transition::kAllOne ? 7 : 0; }

/// Coupler transition frequency and |<g|n_T|e>| for the chosen transition.
inline std::pair<double, double> transition_data(const DressedModel& dressed, Transition t) {
  const int g = dressed.index_of(computational_label(transition_bits(t), 0));
  const int e = dressed.index_of(computational_label(transition_bits(t), 1));
  return {dressed.energies(e) - dressed.energies(g), std::abs(dressed.n_t(g, e))};
}

/// Amplitude meeting the area condition int V dt |n_ge| = 1 (a resonant 2 pi
/// rotation of the driven transition) for the given duration.
inline double area_amplitude(const DressedModel& dressed, Transition t, double duration) {
  return 1.0 / (transition_data(dressed, t).second * unit_envelope_area(duration));
}

/// Duration meeting the same condition for the given amplitude.
inline double area_duration(const DressedModel& dressed, Transition t, double amplitude) {
  require(amplitude > 0.0, "area_duration: amplitude must be positive");
  return 1.0 / (transition_data(dressed, t).second * amplitude * unit_envelope_area(1.0));
}

/// Two-level estimate of a pulse that returns the driven transition to its
/// ground state with the given geometric phase. In the two-level frame the
/// envelope is Omega(t) = V(t) |n_ge| / 2 and delta = f_transition - f.
struct PulseDesign {
  double amplitude = 0.0;  // GHz, full-model V amplitude
  double duration = 0.0;   // ns
  double frequency = 0.0;  // GHz
  double omega = 0.0;      // GHz, two-level envelope amplitude
  double delta = 0.0;      // GHz
};

namespace detail {

/// Envelope amplitude in [lo, hi] minimizing the residual excitation.
inline double returning_omega(double duration, double delta, double lo, double hi) {
  auto population = [&](double omega) {
    return std::norm(two_level_evolve(DrivePulse::gaussian(omega, duration, 1.0), delta, 2000)(1));
  };
  // Scan for the first local minimum after the pi-pulse maximum, then refine
  // by golden section.
  constexpr int kScan = 64;
  double best = lo, best_pop = 2.0;
  for (int k = 0; k <= kScan; ++k) {
    const double w = lo + (hi - lo) * k / kScan;
    const double p = population(w);
    if (p < best_pop) {
      best_pop = p;
      best = w;
    }
  }
  const double step = (hi - lo) / kScan;
  double a = std::max(lo, best - step), b = std::min(hi, best + step);
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 40; ++it) {
    const double c = b - ratio * (b - a);
    const double d = a + ratio * (b - a);
    if (population(c) < population(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

inline double design_phase(double duration, double delta, double omega) {
  const Eigen::Vector2cd c = two_level_evolve(DrivePulse::gaussian(omega, duration, 1.0), delta, 2000);
  return std::arg(c(0) * std::polar(1.0, -kPi * delta * duration));
}

}  // namespace detail

/// Solve the two-level model for a returning pulse of the given duration whose
/// geometric phase is `phase` in (0, pi]; the drive is placed below the
/// transition (delta >= 0).
inline PulseDesign design_pulse(const DressedModel& dressed, Transition t, double duration, double phase) {
  require(duration > 0.0, "design_pulse: duration must be positive");
  require(phase > 0.0 && phase <= kPi, "design_pulse: phase must lie in (0, pi]");
  const auto [f_t, n_ge] = transition_data(dressed, t);
  const double omega_2pi = two_pi_amplitude(duration);

  auto solve = [&](double delta) {
    const double w = detail::returning_omega(duration, delta, 0.6 * omega_2pi, 1.2 * omega_2pi);
    // |phase| decreases from pi as the detuning grows.
    return std::pair{w, std::abs(detail::design_phase(duration, delta, w))};
  };

  double lo = 0.0, hi = 0.0, omega = omega_2pi;
  if (phase < kPi - 1e-9) {
    // Bracket, then bisect on delta.
    double step = 0.25 / duration;
    hi = step;
    while (solve(hi).second > phase) {
      lo = hi;
      hi += step;
      require(hi < 20.0 / duration, "design_pulse: no detuning reaches the requested phase");
    }
    for (int it = 0; it < 32; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (solve(mid).second > phase) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    omega = solve(0.5 * (lo + hi)).first;
  }
  PulseDesign d;
  d.delta = 0.5 * (lo + hi);
  d.omega = omega;
  d.duration = duration;
  d.amplitude = 2.0 * omega / n_ge;
  d.frequency = f_t - d.delta;
  return d;
}

/// Window centred on the design: duration +- tau_half_width, frequency from
/// f - below to f + above (all in ns / GHz).
inline SearchWindow window_around(const PulseDesign& d, double tau_half_width, double below, double above) {
  return {d.duration - tau_half_width, d.duration + tau_half_width, d.frequency - below, d.frequency + above};
}

namespace detail {

struct LatticePoint {
  long i = 0;  // duration index
  long j = 0;  // frequency index
  auto operator<=>(const LatticePoint&) const = default;
};

/// Memoized objective on a rectangular lattice.
class LatticeSearch {
 public:
  LatticeSearch(const DressedModel& model, double amplitude, const GateOperator& target, double tau0, double f0,
                double tau_step, double f_step, const SearchWindow& window, double dt)
      : model_(model), amplitude_(amplitude), target_(target), tau0_(tau0), f0_(f0), tau_step_(tau_step),
        f_step_(f_step), window_(window), dt_(dt) {}

  double tau(const LatticePoint& p) const { return tau0_ + p.i * tau_step_; }
  double freq(const LatticePoint& p) const { return f0_ + p.j * f_step_; }
  bool inside(const LatticePoint& p) const { return window_.contains(tau(p), freq(p)); }

  const GateEvaluation& evaluate(const LatticePoint& p) {
    auto it = cache_.find(p);
    if (it != cache_.end()) return it->second;
    const DrivePulse pulse = DrivePulse::gaussian(amplitude_, tau(p), freq(p));
    return cache_.emplace(p, evaluate_pulse(model_, pulse, target_, dt_)).first->second;
  }
  int evaluations() const { return static_cast<int>(cache_.size()); }

  /// Steepest ascent over the 8 neighbours at the given stride. Neighbours
  /// are visited in increasing (tau, f), so ties keep the lowest.
  LatticePoint climb(LatticePoint start, long stride) {
    LatticePoint best = start;
    double best_f = evaluate(start).fidelity;
    for (;;) {
      LatticePoint next = best;
      double next_f = best_f;
      for (long di = -1; di <= 1; ++di)
        for (long dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const LatticePoint q{best.i + di * stride, best.j + dj * stride};
          if (!inside(q)) continue;
          const double fq = evaluate(q).fidelity;
          if (fq > next_f) {
            next = q;
            next_f = fq;
          }
        }
      if (next == best || !(next_f > best_f)) return best;
      best = next;
      best_f = next_f;
    }
  }

  /// True if p touches the window edge along a direction where a neighbour
  /// would fall outside.
  bool on_edge(const LatticePoint& p) const {
    return !inside({p.i - 1, p.j}) || !inside({p.i + 1, p.j}) || !inside({p.i, p.j - 1}) ||
           !inside({p.i, p.j + 1});
  }

 private:
  const DressedModel& model_;
  double amplitude_;
  GateOperator target_;
  double tau0_, f0_, tau_step_, f_step_;
  SearchWindow window_;
  double dt_;
  std::map<LatticePoint, GateEvaluation> cache_;
};

inline CalibrationResult make_result(double amplitude, double tau, double f, const GateEvaluation& e, int evals) {
  CalibrationResult r;
  r.amplitude = amplitude;
  r.tau = tau;
  r.frequency = f;
  r.fidelity = e.fidelity;
  r.leakage = e.leakage;
  r.phases = conditional_phases(e.gate);
  r.gate = e.gate;
  r.evaluations = evals;
  return r;
}

inline std::string describe(double tau, double f) {
  return "tau = " + std::to_string(tau) + " ns, f = " + std::to_string(f) + " GHz";
}

}  // namespace detail

/// Coarse-to-fine search for the (tau, f) maximizing the fidelity to
/// `target` at fixed amplitude. Throws RangeError if the optimum lies on the
/// window boundary. If `final_model` is given, the lattice climbs are repeated
/// on it and the reported figures come from it.
inline CalibrationResult calibrate_single_pulse(const DressedModel& model, double amplitude,
                                                const SearchWindow& window, const GateOperator& target,
                                                const CalibrationOptions& options = {},
                                                const DressedModel* final_model = nullptr) {
  window.validate();
  require(std::isfinite(amplitude), "calibrate: amplitude must be finite");
  require(options.coarse_tau_step > 0.0 && options.coarse_f_step > 0.0 && options.fine_tau_step > 0.0 &&
              options.fine_f_step > 0.0,
          "calibrate: steps must be positive");

  // Coarse grid, anchored at the lower window corner.
  detail::LatticeSearch coarse(model, amplitude, target, window.tau_min, window.f_min, options.coarse_tau_step,
                               options.coarse_f_step, window, options.dt);
  const long ni = static_cast<long>(std::floor((window.tau_max - window.tau_min) / options.coarse_tau_step + 1e-9));
  const long nj = static_cast<long>(std::floor((window.f_max - window.f_min) / options.coarse_f_step + 1e-9));
  require(ni >= 2 && nj >= 2, "calibrate: window must span at least three coarse steps per axis");
  detail::LatticePoint best{0, 0};
  double best_f = -1.0;
  for (long i = 0; i <= ni; ++i)
    for (long j = 0; j <= nj; ++j) {
      const double f = coarse.evaluate({i, j}).fidelity;
      if (f > best_f) {
        best_f = f;
        best = {i, j};
      }
    }
  if (best.i == 0 || best.i == ni || best.j == 0 || best.j == nj) {
    throw RangeError("calibrate: coarse optimum on the window boundary (" +
                     detail::describe(coarse.tau(best), coarse.freq(best)) + "); widen the search window");
  }

  // Fine lattice climbs, anchored at the coarse optimum.
  const long stride = std::max(1L, std::lround(options.coarse_tau_step / options.fine_tau_step / 2.0));
  auto refine = [&](const DressedModel& m, double tau0, double f0, int& evals) {
    detail::LatticeSearch fine(m, amplitude, target, tau0, f0, options.fine_tau_step, options.fine_f_step, window,
                               options.dt);
    detail::LatticePoint p = fine.climb({0, 0}, stride);
    p = fine.climb(p, 1);
    if (fine.on_edge(p)) {
      throw RangeError("calibrate: fine optimum on the window boundary (" +
                       detail::describe(fine.tau(p), fine.freq(p)) + "); widen the search window");
    }
    evals += fine.evaluations();
    return detail::make_result(amplitude, fine.tau(p), fine.freq(p), fine.evaluate(p), 0);
  };

  int evals = coarse.evaluations();
  CalibrationResult r = refine(model, coarse.tau(best), coarse.freq(best), evals);
  if (final_model != nullptr) r = refine(*final_model, r.tau, r.frequency, evals);
  r.evaluations = evals;
  return r;
}

/// Target gate of a CCPhase-type calibration.
inline GateOperator ccphase_target(Transition t, double phase) {
  return t == Transition::kAllOne ? ccphase_gate(phase) : ccphase_star_gate(phase);
}

inline CalibrationResult calibrate_ccphase(const DressedModel& model, Transition t, double target_phase,
                                           double amplitude, const SearchWindow& window,
                                           const CalibrationOptions& options = {},
                                           const DressedModel* final_model = nullptr) {
  return calibrate_single_pulse(model, amplitude, window, ccphase_target(t, target_phase), options, final_model);
}

/// Calibrates each amplitude in turn. The window for each amplitude is
/// produced by `window_for(amplitude)`; a window that yields a boundary
/// optimum propagates the RangeError.
inline std::vector<CalibrationResult> amplitude_sweep(const DressedModel& model, std::span<const double> amplitudes,
                                                      const std::function<SearchWindow(double)>& window_for,
                                                      const GateOperator& target,
                                                      const CalibrationOptions& options = {},
                                                      const DressedModel* final_model = nullptr) {
  for (std::size_t k = 1; k < amplitudes.size(); ++k)
    require(amplitudes[k] < amplitudes[k - 1], "amplitude_sweep: amplitudes must be strictly descending");
  std::vector<CalibrationResult> out;
  out.reserve(amplitudes.size());
  for (double a : amplitudes) out.push_back(calibrate_single_pulse(model, a, window_for(a), target, options, final_model));
  return out;
}

/// Default CCZ window for an amplitude: the area-condition duration +- max(4
/// ns, 5%), and f_111 - 8 MHz .. f_111 + 3 MHz.
inline SearchWindow ccz_window(const DressedModel& model, double amplitude) {
  const double tau0 = area_duration(model, Transition::kAllOne, amplitude);
  const double half = std::max(4.0, std::round(0.05 * tau0));
  const double f111 = transition_data(model, Transition::kAllOne).first;
  const double tau_c = std::round(tau0);
  return {tau_c - half, tau_c + half, f111 - 8e-3, f111 + 3e-3};
}

/// Amplitude whose calibrated duration matches `tau_target`. Starts from the
/// two-level design and rescales A by tau_found / tau_target (duration scales
/// as 1/A at fixed area) until the calibrated duration is within `tolerance`
/// ns, recentering the window on the previous optimum each round.
inline CalibrationResult recover_amplitude(const DressedModel& model, Transition t, double target_phase,
                                           double tau_target, double tau_half_width, double f_half_width,
                                           const CalibrationOptions& options = {}, double tolerance = 0.5,
                                           int max_rounds = 4, const DressedModel* final_model = nullptr) {
  require(max_rounds >= 1, "recover_amplitude: need at least one round");
  const PulseDesign design = design_pulse(model, t, tau_target, target_phase);
  double amplitude = design.amplitude;
  double f_centre = design.frequency;
  CalibrationResult r;
  for (int round = 0; round < max_rounds; ++round) {
    const SearchWindow w{tau_target - tau_half_width, tau_target + tau_half_width, f_centre - f_half_width,
                         f_centre + f_half_width};
    r = calibrate_ccphase(model, t, target_phase, amplitude, w, options);
    if (std::abs(r.tau - tau_target) <= tolerance) break;
    amplitude *= r.tau / tau_target;
    f_centre = r.frequency;
  }
  if (final_model != nullptr) {
    const SearchWindow w{tau_target - tau_half_width, tau_target + tau_half_width, r.frequency - f_half_width,
                         r.frequency + f_half_width};
    r = calibrate_ccphase(model, t, target_phase, r.amplitude, w, options, final_model);
  }
  return r;
}

/// CCZ from CCPhase(pi/2) through |1110>-|1111> and CCPhase*(pi/2) through
/// |0000>-|0001> between two ideal X layers.
struct TwoPulseSpec {
  DrivePulse ccphase_star;  // |0000> - |0001>
  DrivePulse ccphase;       // |1110> - |1111>
  double phase_star = kPi / 2.0;
  double phase = kPi / 2.0;

  /// Time order: CCPhase, X, CCPhase*, X.
  std::vector<SequenceStep> sequence() const {
    return {SequenceStep::drive(ccphase), SequenceStep::all_x(), SequenceStep::drive(ccphase_star),
            SequenceStep::all_x()};
  }
  double total_time() const { return ccphase.duration + ccphase_star.duration; }
};

struct TwoPulseResult {
  GateEvaluation evaluation;  // against CCZ
  GateOperator raw = GateOperator::Identity();
  double total_time = 0.0;  // ns, X layers excluded
};

inline TwoPulseResult compose_two_pulse_ccz(const TwoPulseSpec& spec, const DressedModel& model,
                                            double dt = kDefaultTimeStep) {
  require(std::abs(spec.phase + spec.phase_star - kPi) < 1e-9, "two-pulse: phases must sum to pi");
  const auto steps = spec.sequence();
  TwoPulseResult r;
  r.raw = sequence_gate(model, steps, dt);
  r.evaluation = evaluate_raw(r.raw, ccz_gate());
  r.total_time = spec.total_time();
  return r;
}

namespace detail {

inline TwoPulseResult climb_two_pulse(TwoPulseSpec& spec, const DressedModel& model,
                                      const CalibrationOptions& options, std::span<const long> strides) {
  using Key = std::array<long, 4>;
  const TwoPulseSpec base = spec;
  std::map<Key, TwoPulseResult> cache;
  auto at = [&](const Key& k) {
    TwoPulseSpec s = base;
    s.ccphase.duration += k[0] * options.fine_tau_step;
    s.ccphase.sigma = DrivePulse::kDefaultSigmaRatio * s.ccphase.duration;
    s.ccphase.frequency += k[1] * options.fine_f_step;
    s.ccphase_star.duration += k[2] * options.fine_tau_step;
    s.ccphase_star.sigma = DrivePulse::kDefaultSigmaRatio * s.ccphase_star.duration;
    s.ccphase_star.frequency += k[3] * options.fine_f_step;
    return s;
  };
  auto eval = [&](const Key& k) -> const TwoPulseResult& {
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    return cache.emplace(k, compose_two_pulse_ccz(at(k), model, options.dt)).first->second;
  };
  Key best{0, 0, 0, 0};
  for (long stride : strides) {
    for (;;) {
      Key next = best;
      double next_f = eval(best).evaluation.fidelity;
      for (int pulse = 0; pulse < 2; ++pulse)
        for (long di = -1; di <= 1; ++di)
          for (long dj = -1; dj <= 1; ++dj) {
            if (di == 0 && dj == 0) continue;
            Key q = best;
            q[2 * pulse] += di * stride;
            q[2 * pulse + 1] += dj * stride;
            const double fq = eval(q).evaluation.fidelity;
            if (fq > next_f) {
              next_f = fq;
              next = q;
            }
          }
      if (next == best) break;
      best = next;
    }
  }
  spec = at(best);
  return eval(best);
}

}  // namespace detail

/// Joint polish of both pulses against CCZ: steepest ascent on the fine
/// (tau, f) lattice of each pulse, moving one pulse at a time, with strides
/// 5 and 1. Amplitudes are kept. If `final_model` is given, the climb is
/// repeated on it and the reported figures come from it.
inline TwoPulseResult refine_two_pulse(TwoPulseSpec& spec, const DressedModel& model,
                                       const CalibrationOptions& options = {},
                                       const DressedModel* final_model = nullptr) {
  static constexpr long kStrides[] = {5, 1};
  TwoPulseResult r = detail::climb_two_pulse(spec, model, options, kStrides);
  if (final_model != nullptr) r = detail::climb_two_pulse(spec, *final_model, options, kStrides);
  return r;
}

}  // namespace fluxccz

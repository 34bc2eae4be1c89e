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

// Pulse-level propagation of the driven dressed model and gate extraction.
//
// The Schrodinger equation
//     i d psi/dt = 2 pi [diag(E) + V(t) sin(2 pi f t) n_T] psi
// is integrated with fixed-step RK4 in the interaction picture of diag(E):
//     psi = P(t) y,  P(t) = exp(-2 pi i E t),
//     dy/dt = -2 pi i V(t) sin(2 pi f t) P(t)^dagger n_T P(t) y.
// The free evolution is exact, so the step only has to resolve the drive and
// the beat notes E_a - E_b +- f; no rotating-wave approximation is made.
// Returned states are in the lab frame.

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "fluxccz/common.hpp"
#include "fluxccz/composite.hpp"
#include "fluxccz/ptm.hpp"
#include "fluxccz/pulse.hpp"

namespace fluxccz {

/// A non-positive time step selects the largest step allowed by the
/// resolution contract 20 dt f_max <= 1.
inline constexpr double kDefaultTimeStep = 0.0;  // ns
inline constexpr double kNormDriftLimit = 1e-6;

/// Largest admissible step: f_max = highest dressed energy + carrier.
inline double max_time_step(const DressedModel& dressed, const DrivePulse& pulse) {
  return 1.0 / (20.0 * (dressed.energies.maxCoeff() + pulse.frequency));
}

inline double resolve_time_step(const DressedModel& dressed, const DrivePulse& pulse, double dt) {
  return dt > 0.0 ? dt : max_time_step(dressed, pulse);
}

namespace detail {

/// Split of the dressed states by total parity. Returns false if some state
/// is unlabeled or the operator couples states of equal parity.
inline bool parity_split(const DressedModel& dressed, const RealMatrix& op, std::vector<int>& even,
                         std::vector<int>& odd) {
  even.clear();
  odd.clear();
  for (int k = 0; k < dressed.size(); ++k) {
    int sum = 0;
    for (int q : dressed.labels[k]) {
      if (q < 0) return false;
      sum += q;
    }
    (sum % 2 == 0 ? even : odd).push_back(k);
  }
  const double limit = 1e-12 * op.cwiseAbs().maxCoeff();
  for (const auto* block : {&even, &odd})
    for (int a : *block)
      for (int b : *block)
        if (std::abs(op(a, b)) > limit) return false;
  return true;
}

/// Right-hand side of the interaction-picture equation. The charge operator
/// is purely imaginary in the gauge used by the composite model, so it is
/// stored as n_T = i B with B real antisymmetric and applied with real GEMMs.
/// When B only connects opposite total parity, only the off-diagonal block
/// C = B(even, odd) is stored.
class DriveRhs {
 public:
  DriveRhs(const DressedModel& dressed, const DrivePulse& pulse)
      : energies_(dressed.energies), pulse_(pulse) {
    const double scale = dressed.n_t.cwiseAbs().maxCoeff();
    imaginary_ = dressed.n_t.real().cwiseAbs().maxCoeff() <= 1e-12 * scale;
    if (imaginary_) {
      const RealMatrix b = dressed.n_t.imag();
      blocked_ = parity_split(dressed, b, even_, odd_) && !even_.empty() && !odd_.empty();
      if (blocked_) {
        c_ = b(even_, odd_);
      } else {
        b_ = b;
      }
    } else {
      n_ = dressed.n_t;
    }
  }

  void phases(double t, ComplexVector& p) const {
    p.resize(energies_.size());
    for (Eigen::Index a = 0; a < energies_.size(); ++a) p(a) = std::polar(1.0, -kTwoPi * energies_(a) * t);
  }

  /// out = dy/dt at time t, with p = phases(t).
  void operator()(double t, const ComplexVector& p, const ComplexMatrix& y, ComplexMatrix& out) {
    const double c = drive_signal(pulse_, t);
    if (c == 0.0) {
      out.setZero(y.rows(), y.cols());
      return;
    }
    lab_.noalias() = p.asDiagonal() * y;
    out.resize(y.rows(), y.cols());
    if (blocked_) {
      // -2 pi i c P^dag (i B) P y = 2 pi c P^dag B P y
      const auto ne = static_cast<Eigen::Index>(even_.size());
      const auto no = static_cast<Eigen::Index>(odd_.size());
      ye_.resize(ne, y.cols());
      yo_.resize(no, y.cols());
      for (Eigen::Index r = 0; r < ne; ++r) ye_.row(r) = lab_.row(even_[r]);
      for (Eigen::Index r = 0; r < no; ++r) yo_.row(r) = lab_.row(odd_[r]);
      re_.noalias() = c_ * yo_.real();
      im_.noalias() = c_ * yo_.imag();
      for (Eigen::Index r = 0; r < ne; ++r) {
        out.row(even_[r]).real() = re_.row(r);
        out.row(even_[r]).imag() = im_.row(r);
      }
      re_.noalias() = -c_.transpose() * ye_.real();
      im_.noalias() = -c_.transpose() * ye_.imag();
      for (Eigen::Index r = 0; r < no; ++r) {
        out.row(odd_[r]).real() = re_.row(r);
        out.row(odd_[r]).imag() = im_.row(r);
      }
      out = (kTwoPi * c) * (p.conjugate().asDiagonal() * out).eval();
    } else if (imaginary_) {
      re_.noalias() = b_ * lab_.real();
      im_.noalias() = b_ * lab_.imag();
      out.real() = re_;
      out.imag() = im_;
      out = (kTwoPi * c) * (p.conjugate().asDiagonal() * out).eval();
    } else {
      out.noalias() = n_ * lab_;
      out = (-kI * kTwoPi * c) * (p.conjugate().asDiagonal() * out).eval();
    }
  }

 private:
  RealVector energies_;
  DrivePulse pulse_;
  bool imaginary_ = false;
  bool blocked_ = false;
  std::vector<int> even_, odd_;
  RealMatrix b_, c_;
  ComplexMatrix n_;
  ComplexMatrix lab_, ye_, yo_;
  RealMatrix re_, im_;
};

}  // namespace detail

/// Integrate the driven system over [0, tau] from the given initial states
/// (columns, dressed basis). The step count is rounded up to an even number
/// so that observers can apply Simpson weights. `observe(s, t, states)` is
/// called on every grid point s = 0..steps with the lab-frame states.
/// Returns the final lab-frame states.
template <typename Observer>
ComplexMatrix propagate_observed(const DressedModel& dressed, const DrivePulse& pulse,
                                 const ComplexMatrix& initial, double dt, Observer&& observe) {
  pulse.validate();
  require(initial.rows() == dressed.size(), "propagate: initial states have wrong dimension");
  dt = resolve_time_step(dressed, pulse, dt);
  require(dt <= max_time_step(dressed, pulse) * (1.0 + 1e-12),
          "propagate: dt too large for the spectrum and carrier");

  long steps = static_cast<long>(std::ceil(pulse.duration / dt - 1e-9));
  steps += steps % 2;
  const double h = pulse.duration / static_cast<double>(steps);

  detail::DriveRhs rhs(dressed, pulse);
  ComplexMatrix y = initial;
  ComplexMatrix k1, k2, k3, k4, tmp;
  ComplexVector p0, pm, p1;
  rhs.phases(0.0, p0);
  constexpr bool kObserved = !std::is_same_v<std::decay_t<Observer>, std::nullptr_t>;
  if constexpr (kObserved) observe(0L, 0.0, static_cast<const ComplexMatrix&>(y));
  for (long s = 0; s < steps; ++s) {
    const double t = s * h;
    rhs.phases(t + 0.5 * h, pm);
    rhs.phases(t + h, p1);
    rhs(t, p0, y, k1);
    tmp = y + (0.5 * h) * k1;
    rhs(t + 0.5 * h, pm, tmp, k2);
    tmp = y + (0.5 * h) * k2;
    rhs(t + 0.5 * h, pm, tmp, k3);
    tmp = y + h * k3;
    rhs(t + h, p1, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    p0.swap(p1);
    if constexpr (kObserved) {
      tmp.noalias() = p0.asDiagonal() * y;
      observe(s + 1, (s + 1) * h, static_cast<const ComplexMatrix&>(tmp));
    }
  }

  for (Eigen::Index c = 0; c < y.cols(); ++c) {
    const double drift = std::abs(y.col(c).norm() - initial.col(c).norm());
    if (drift > kNormDriftLimit) {
      throw NumericalError("propagate: norm drift " + std::to_string(drift) +
                           " exceeds tolerance; reduce dt");
    }
  }
  return p0.asDiagonal() * y;
}

inline ComplexMatrix propagate(const DressedModel& dressed, const DrivePulse& pulse,
                               const ComplexMatrix& initial, double dt = kDefaultTimeStep) {
  return propagate_observed(dressed, pulse, initial, dt, nullptr);
}

/// Unit vectors on the given dressed indices.
inline ComplexMatrix basis_states(const DressedModel& dressed, std::span<const int> indices) {
  ComplexMatrix out = ComplexMatrix::Zero(dressed.size(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) out(indices[c], static_cast<Eigen::Index>(c)) = 1.0;
  return out;
}

/// Final states of the eight computational states |xyz0>, in binary order.
inline ComplexMatrix propagate_computational(const DressedModel& dressed, const DrivePulse& pulse,
                                             double dt = kDefaultTimeStep) {
  const auto idx = dressed.computational_indices(0);
  return propagate(dressed, pulse, basis_states(dressed, idx), dt);
}

/// Project final states on the computational dressed states:
/// U_ij = <psi_i | psi'_j>.
inline GateOperator project_gate(const ComplexMatrix& finals, const DressedModel& dressed) {
  require(finals.cols() == kGateDim && finals.rows() == dressed.size(),
          "project_gate: expected eight final states in the dressed basis");
  const auto idx = dressed.computational_indices(0);
  GateOperator u;
  for (int i = 0; i < kGateDim; ++i)
    for (int j = 0; j < kGateDim; ++j) u(i, j) = finals(idx[i], j);
  return u;
}

/// Fix the frame of a gate: remove the global phase so that U_00 is real and
/// positive, then apply virtual Z rotations exp(-i theta_q bit_q) after the
/// gate that zero the phases of |100>, |010> and |001>.
inline GateMatrix canonicalize(const GateOperator& raw) {
  if (std::abs(raw(0, 0)) < 1e-3) {
    throw NumericalError("canonicalize: |U_00| too small to define the global phase");
  }
  GateMatrix g;
  g.global_phase = std::arg(raw(0, 0));
  g.u = raw * std::polar(1.0, -g.global_phase);
  for (int q = 0; q < kNumQubits; ++q) g.frame_phases[q] = std::arg(g.u(1 << (2 - q), 1 << (2 - q)));
  for (int i = 0; i < kGateDim; ++i) {
    double angle = 0.0;
    for (int q = 0; q < kNumQubits; ++q)
      if ((i >> (2 - q)) & 1) angle += g.frame_phases[q];
    g.u.row(i) *= std::polar(1.0, -angle);
  }
  return g;
}

inline GateMatrix extract_gate(const ComplexMatrix& finals, const DressedModel& dressed) {
  return canonicalize(project_gate(finals, dressed));
}

/// Average population leaving the coupler-ground computational subspace.
inline double leakage(const ComplexMatrix& finals, const DressedModel& dressed) {
  const GateOperator u = project_gate(finals, dressed);
  return 1.0 - u.squaredNorm() / kGateDim;
}

/// Conditional phases (phi_011, phi_101, phi_110, phi_111) of a canonical
/// gate, in radians.
inline std::array<double, 4> conditional_phases(const GateMatrix& g) {
  return {g.phase(3), g.phase(5), g.phase(6), g.phase(7)};
}

/// Everything needed to judge one pulse.
struct GateEvaluation {
  GateMatrix gate;
  double fidelity = 0.0;
  double leakage = 0.0;
};

inline GateEvaluation evaluate_pulse(const DressedModel& dressed, const DrivePulse& pulse,
                                     const GateOperator& target, double dt = kDefaultTimeStep) {
  const ComplexMatrix finals = propagate_computational(dressed, pulse, dt);
  GateEvaluation e;
  e.gate = extract_gate(finals, dressed);
  e.fidelity = process_fidelity(to_ptm(e.gate), to_ptm(canonicalize(target).u));
  e.leakage = leakage(finals, dressed);
  return e;
}

/// One element of a gate sequence: a coupler pulse, or an ideal X on all
/// three data qubits (a relabeling of the computational basis).
struct SequenceStep {
  enum class Kind { kPulse, kAllX };
  Kind kind = Kind::kPulse;
  DrivePulse pulse{};

  static SequenceStep drive(const DrivePulse& p) { return {Kind::kPulse, p}; }
  static SequenceStep all_x() { return {Kind::kAllX, {}}; }
};

/// Uncorrected computational block of a single pulse.
inline GateOperator raw_gate(const DressedModel& dressed, const DrivePulse& pulse,
                             double dt = kDefaultTimeStep) {
  return project_gate(propagate_computational(dressed, pulse, dt), dressed);
}

/// Product of the steps in time order (first step acts first).
inline GateOperator sequence_gate(const DressedModel& dressed, std::span<const SequenceStep> steps,
                                  double dt = kDefaultTimeStep) {
  GateOperator u = GateOperator::Identity();
  for (const auto& step : steps) {
    const GateOperator g = step.kind == SequenceStep::Kind::kAllX ? all_x_gate() : raw_gate(dressed, step.pulse, dt);
    u = (g * u).eval();
  }
  return u;
}

/// Summed pulse durations; ideal X steps take no time.
inline double total_pulse_time(std::span<const SequenceStep> steps) {
  double t = 0.0;
  for (const auto& step : steps)
    if (step.kind == SequenceStep::Kind::kPulse) t += step.pulse.duration;
  return t;
}

inline GateEvaluation evaluate_raw(const GateOperator& raw, const GateOperator& target) {
  GateEvaluation e;
  e.gate = canonicalize(raw);
  e.fidelity = process_fidelity(to_ptm(e.gate), to_ptm(canonicalize(target).u));
  e.leakage = 1.0 - raw.squaredNorm() / kGateDim;
  return e;
}

inline GateEvaluation evaluate_sequence(const DressedModel& dressed, std::span<const SequenceStep> steps,
                                        const GateOperator& target, double dt = kDefaultTimeStep) {
  return evaluate_raw(sequence_gate(dressed, steps, dt), target);
}

}  // namespace fluxccz

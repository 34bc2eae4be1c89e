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

// Markovian decoherence during a gate:
//
//     d rho/dt = -2 pi i [H(t), rho] + sum_k D_k[rho],
//     D_k[rho] = L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho},
//
// with rates in 1/ns. Collapse operators act on the 0-1 subspace of one
// subsystem (zero on higher levels), are built in the bare product basis and
// rotated into the kept dressed states:
//
//     relaxation  L = |0><1| / sqrt(T1)
//     dephasing   L = (|0><0| - |1><1|) / sqrt(2 T_phi)
//
// Two integrators produce the process on the computational block.
//
//   kFirstOrder: the dissipator is treated to first order along the coherent
//     trajectory,
//         S = S_0 + int_0^tau U(tau,t) D[U(t,0) . U(t,0)^dag] U(tau,t)^dag dt.
//     With psi_i(t) = U(t,0)|i> and chi_a(t) = U(tau,t)^dag |a> the element
//     <a| S(|i><j|) |b> needs only the 8x8 overlaps chi^dag L_k psi,
//     chi^dag K psi and chi^dag psi (K = sum L^dag L), integrated with
//     Simpson's rule. The neglected terms are O((tau/T)^2), about 1e-6 for
//     the gate times and coherence times of interest. Cost: three state
//     propagations.
//
//   kExact: RK4 on the density matrices of the 36 matrix units |i><j|, i <= j,
//     in the interaction picture of the dressed energies; the remaining units
//     follow from S(|j><i|) = S(|i><j|)^dag. Cost grows as n^3 per unit and
//     step; intended for small models and as a cross-check.

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fluxccz/common.hpp"
#include "fluxccz/composite.hpp"
#include "fluxccz/dynamics.hpp"
#include "fluxccz/ptm.hpp"
#include "fluxccz/pulse.hpp"

namespace fluxccz {

/// Coherence times in microseconds per subsystem (F1, F2, F3, T); an empty
/// entry disables that channel.
struct NoiseModel {
  std::array<std::optional<double>, kNumSubsystems> t1_us{};
  std::array<std::optional<double>, kNumSubsystems> tphi_us{};

  void validate() const {
    for (int s = 0; s < kNumSubsystems; ++s) {
      require(!t1_us[s] || (*t1_us[s] > 0.0 && !std::isnan(*t1_us[s])), "noise: T1 must be positive");
      require(!tphi_us[s] || (*tphi_us[s] > 0.0 && !std::isnan(*tphi_us[s])),
              "noise: T_phi must be positive");
    }
  }
  bool empty() const {
    for (int s = 0; s < kNumSubsystems; ++s)
      if ((t1_us[s] && std::isfinite(*t1_us[s])) || (tphi_us[s] && std::isfinite(*tphi_us[s]))) return false;
    return true;
  }
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

struct CollapseOperator {
  enum class Kind { kRelaxation, kDephasing };
  int subsystem = 0;
  Kind kind = Kind::kRelaxation;
  ComplexMatrix op;  // dressed basis, sqrt(rate) included, rate in 1/ns
};

namespace detail {

/// V^T (local on site) V for the kept dressed vectors V.
inline ComplexMatrix dressed_site_operator(const DressedModel& dressed, const RealMatrix& local, int site) {
  const RealMatrix lv = apply_on_site<double>(local, site, dressed.levels, dressed.vectors);
  return (dressed.vectors.transpose() * lv).cast<Complex>();
}

}  // namespace detail

/// Collapse operators for every finite time in `noise`, in the dressed basis.
inline std::vector<CollapseOperator> collapse_operators(const NoiseModel& noise, const DressedModel& dressed) {
  noise.validate();
  require(dressed.vectors.cols() == dressed.size() && dressed.levels >= 2,
          "collapse_operators: dressed model carries no bare-basis vectors");
  std::vector<CollapseOperator> out;
  const int n = dressed.levels;
  for (int s = 0; s < kNumSubsystems; ++s) {
    if (noise.t1_us[s] && std::isfinite(*noise.t1_us[s])) {
      RealMatrix lower = RealMatrix::Zero(n, n);
      lower(0, 1) = 1.0 / std::sqrt(*noise.t1_us[s] * kNsPerUs);
      out.push_back({s, CollapseOperator::Kind::kRelaxation, detail::dressed_site_operator(dressed, lower, s)});
    }
    if (noise.tphi_us[s] && std::isfinite(*noise.tphi_us[s])) {
      RealMatrix z = RealMatrix::Zero(n, n);
      const double scale = 1.0 / std::sqrt(2.0 * *noise.tphi_us[s] * kNsPerUs);
      z(0, 0) = scale;
      z(1, 1) = -scale;
      out.push_back({s, CollapseOperator::Kind::kDephasing, detail::dressed_site_operator(dressed, z, s)});
    }
  }
  return out;
}

/// Linear map on computational-block density matrices, column-major vec.
struct Superoperator {
  SuperoperatorMatrix s = SuperoperatorMatrix::Identity();

  /// Image of the operator rho.
  GateOperator apply(const GateOperator& rho) const {
    GateOperator out;
    Eigen::Map<Eigen::Matrix<Complex, kPtmDim, 1>>(out.data()) =
        s * Eigen::Map<const Eigen::Matrix<Complex, kPtmDim, 1>>(rho.data());
    return out;
  }
  /// Choi matrix sum_ij |i><j| (x) S(|i><j|), indexed (i*8 + a, j*8 + b).
  SuperoperatorMatrix choi() const {
    SuperoperatorMatrix c;
    for (int i = 0; i < kGateDim; ++i)
      for (int j = 0; j < kGateDim; ++j)
        for (int a = 0; a < kGateDim; ++a)
          for (int b = 0; b < kGateDim; ++b) c(i * kGateDim + a, j * kGateDim + b) = s(a + kGateDim * b, i + kGateDim * j);
    return c;
  }
  double min_choi_eigenvalue() const {
    const SuperoperatorMatrix c = choi();
    const SuperoperatorMatrix h = 0.5 * (c + c.adjoint());
    return Eigen::SelfAdjointEigenSolver<SuperoperatorMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  }
  /// Largest trace gain max_i Tr S(|i><i|) - 1.
  double trace_increase() const {
    double worst = -1.0;
    for (int i = 0; i < kGateDim; ++i) {
      double tr = 0.0;
      for (int a = 0; a < kGateDim; ++a) tr += s(a + kGateDim * a, i + kGateDim * i).real();
      worst = std::max(worst, tr - 1.0);
    }
    return worst;
  }
  /// max |S(rho^dag) - S(rho)^dag| over matrix units.
  double hermiticity_defect() const {
    double worst = 0.0;
    for (int i = 0; i < kGateDim; ++i)
      for (int j = 0; j < kGateDim; ++j) {
        GateOperator e = GateOperator::Zero();
        e(i, j) = 1.0;
        worst = std::max(worst, (apply(e.adjoint()) - apply(e).adjoint()).cwiseAbs().maxCoeff());
      }
    return worst;
  }

  static Superoperator unitary(const GateOperator& u) { return {superoperator_of(u)}; }
  /// `next` applied after this map.
  Superoperator then(const Superoperator& next) const { return {next.s * s}; }
};

inline PTM to_ptm(const Superoperator& s) { return ptm_from_superoperator(s.s); }

inline double noisy_fidelity(const Superoperator& s, const PTM& ideal) { return process_fidelity(to_ptm(s), ideal); }

/// Throws NumericalError unless the map is trace non-increasing and
/// completely positive to 1e-6.
inline void check_physical(const Superoperator& s, const std::string& context) {
  const double gain = s.trace_increase();
  if (gain > 1e-6) throw NumericalError(context + ": trace increase " + std::to_string(gain));
  const double lambda = s.min_choi_eigenvalue();
  if (lambda < -1e-6) throw NumericalError(context + ": negative Choi eigenvalue " + std::to_string(lambda));
}

enum class LindbladMethod { kFirstOrder, kExact };

/// Process of one pulse on the computational block, uncorrected frame.
struct NoisyProcess {
  Superoperator map;
  /// Coherent part: the projected gate without dissipation.
  GateOperator coherent = GateOperator::Identity();
};

namespace detail {

inline ComplexMatrix jump_sum(std::span<const CollapseOperator> ops, Eigen::Index n) {
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  for (const auto& c : ops) k.noalias() += c.op.adjoint() * c.op;
  return k;
}

inline NoisyProcess first_order_process(const DressedModel& dressed, const DrivePulse& pulse,
                                        std::span<const CollapseOperator> ops, double dt) {
  const auto comp = dressed.computational_indices(0);
  const ComplexMatrix all = ComplexMatrix::Identity(dressed.size(), dressed.size());
  const ComplexMatrix u_final = propagate(dressed, pulse, all, dt);

  NoisyProcess out;
  for (int a = 0; a < kGateDim; ++a)
    for (int i = 0; i < kGateDim; ++i) out.coherent(a, i) = u_final(comp[a], comp[i]);
  out.map = Superoperator::unitary(out.coherent);
  if (ops.empty()) return out;

  // Columns: psi_i(0) = |i>, chi_a(0) = U(tau,0)^dag |a>.
  ComplexMatrix start(dressed.size(), 2 * kGateDim);
  for (int i = 0; i < kGateDim; ++i) {
    start.col(i) = all.col(comp[i]);
    start.col(kGateDim + i) = u_final.row(comp[i]).adjoint();
  }
  const ComplexMatrix k_sum = jump_sum(ops, dressed.size());

  SuperoperatorMatrix acc = SuperoperatorMatrix::Zero();
  SuperoperatorMatrix term;
  double h = 0.0;
  auto observe = [&](long s, double t, const ComplexMatrix& states) {
    if (s == 1) h = t;
    const auto psi = states.leftCols(kGateDim);
    const auto chi = states.rightCols(kGateDim);
    const GateOperator o = chi.adjoint() * psi;
    const GateOperator g = chi.adjoint() * (k_sum * psi);
    for (int b = 0; b < kGateDim; ++b)
      for (int j = 0; j < kGateDim; ++j)
        term.block<kGateDim, kGateDim>(b * kGateDim, j * kGateDim) =
            -0.5 * (std::conj(o(b, j)) * g + std::conj(g(b, j)) * o);
    for (const auto& c : ops) {
      const GateOperator m = chi.adjoint() * (c.op * psi);
      for (int b = 0; b < kGateDim; ++b)
        for (int j = 0; j < kGateDim; ++j)
          term.block<kGateDim, kGateDim>(b * kGateDim, j * kGateDim) += std::conj(m(b, j)) * m;
    }
    // Simpson weights 1, 4, 2, 4, ..., 2, 4, 1; the final point is
    // corrected after the loop.
    acc += (s == 0 ? 1.0 : (s % 2 == 1 ? 4.0 : 2.0)) * term;
  };
  propagate_observed(dressed, pulse, start, dt, observe);
  acc -= term;
  out.map.s += (h / 3.0) * acc;
  return out;
}

/// Evolves lab-frame density matrices (kept dressed basis) over the pulse with
/// RK4 in the interaction picture of the dressed energies. Returns them in the
/// lab frame at t = tau.
inline void evolve_density_matrices(const DressedModel& dressed, const DrivePulse& pulse,
                                    std::span<const CollapseOperator> ops, std::vector<ComplexMatrix>& rho,
                                    double dt) {
  pulse.validate();
  dt = resolve_time_step(dressed, pulse, dt);
  require(dt <= max_time_step(dressed, pulse) * (1.0 + 1e-12),
          "lindblad: dt too large for the spectrum and carrier");
  const Eigen::Index n = dressed.size();
  for (const auto& r : rho) require(r.rows() == n && r.cols() == n, "lindblad: density matrix has wrong dimension");
  const long steps = static_cast<long>(std::ceil(pulse.duration / dt - 1e-9));
  const double h = pulse.duration / static_cast<double>(steps);

  const ComplexMatrix k_sum = jump_sum(ops, n);
  const RealVector& e = dressed.energies;
  // Interaction-picture operators X~(a,b) = X(a,b) exp(2 pi i (E_a - E_b) t).
  struct Frame {
    double c = 0.0;
    ComplexMatrix n_t, k;
    std::vector<ComplexMatrix> l;
  };
  auto frame_at = [&](double t) {
    Frame f;
    f.c = drive_signal(pulse, t);
    ComplexMatrix phase(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) phase(a, b) = std::polar(1.0, kTwoPi * (e(a) - e(b)) * t);
    f.n_t = dressed.n_t.cwiseProduct(phase);
    f.k = k_sum.cwiseProduct(phase);
    for (const auto& c : ops) f.l.push_back(c.op.cwiseProduct(phase));
    return f;
  };
  auto rhs = [&](const Frame& f, const ComplexMatrix& r) {
    ComplexMatrix out = (-kI * kTwoPi * f.c) * (f.n_t * r - r * f.n_t);
    if (!ops.empty()) {
      out -= 0.5 * (f.k * r + r * f.k);
      for (const auto& l : f.l) out += l * r * l.adjoint();
    }
    return out;
  };

  Frame f0 = frame_at(0.0);
  for (long s = 0; s < steps; ++s) {
    const double t = s * h;
    const Frame fm = frame_at(t + 0.5 * h);
    Frame f1 = frame_at(t + h);
    for (auto& r : rho) {
      const ComplexMatrix k1 = rhs(f0, r);
      const ComplexMatrix k2 = rhs(fm, r + 0.5 * h * k1);
      const ComplexMatrix k3 = rhs(fm, r + 0.5 * h * k2);
      const ComplexMatrix k4 = rhs(f1, r + h * k3);
      r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    f0 = std::move(f1);
  }

  ComplexVector p(n);
  for (Eigen::Index a = 0; a < n; ++a) p(a) = std::polar(1.0, -kTwoPi * e(a) * pulse.duration);
  for (auto& r : rho) r = (p.asDiagonal() * r * p.conjugate().asDiagonal()).eval();
}

inline NoisyProcess exact_process(const DressedModel& dressed, const DrivePulse& pulse,
                                  std::span<const CollapseOperator> ops, double dt) {
  const auto comp = dressed.computational_indices(0);
  const Eigen::Index n = dressed.size();
  std::vector<std::array<int, 2>> units;
  for (int i = 0; i < kGateDim; ++i)
    for (int j = i; j < kGateDim; ++j) units.push_back({i, j});
  std::vector<ComplexMatrix> rho(units.size(), ComplexMatrix::Zero(n, n));
  for (std::size_t u = 0; u < units.size(); ++u) rho[u](comp[units[u][0]], comp[units[u][1]]) = 1.0;
  evolve_density_matrices(dressed, pulse, ops, rho, dt);

  NoisyProcess out;
  out.map.s.setZero();
  for (std::size_t u = 0; u < units.size(); ++u) {
    const int i = units[u][0];
    const int j = units[u][1];
    for (int a = 0; a < kGateDim; ++a)
      for (int b = 0; b < kGateDim; ++b) {
        const Complex v = rho[u](comp[a], comp[b]);
        out.map.s(a + kGateDim * b, i + kGateDim * j) = v;
        out.map.s(b + kGateDim * a, j + kGateDim * i) = std::conj(v);
      }
  }
  out.coherent = raw_gate(dressed, pulse, dt);
  return out;
}

}  // namespace detail

/// Process of one pulse with the given collapse operators. The result is
/// checked for trace gain and complete positivity.
inline NoisyProcess lindblad_propagate(const DressedModel& dressed, const DrivePulse& pulse,
                                       std::span<const CollapseOperator> ops, double dt = kDefaultTimeStep,
                                       LindbladMethod method = LindbladMethod::kFirstOrder) {
  for (const auto& c : ops)
    require(c.op.rows() == dressed.size() && c.op.cols() == dressed.size(),
            "lindblad_propagate: collapse operator has wrong dimension");
  NoisyProcess p = method == LindbladMethod::kExact ? detail::exact_process(dressed, pulse, ops, dt)
                                                    : detail::first_order_process(dressed, pulse, ops, dt);
  check_physical(p.map, "lindblad_propagate");
  return p;
}

/// Final density matrix over the kept dressed states for an arbitrary initial
/// one (exact integrator).
inline ComplexMatrix lindblad_evolve(const DressedModel& dressed, const DrivePulse& pulse,
                                     std::span<const CollapseOperator> ops, const ComplexMatrix& rho0,
                                     double dt = kDefaultTimeStep) {
  std::vector<ComplexMatrix> rho{rho0};
  detail::evolve_density_matrices(dressed, pulse, ops, rho, dt);
  return rho.front();
}

/// Process of a sequence of pulses and ideal X layers, in time order.
inline NoisyProcess lindblad_sequence(const DressedModel& dressed, std::span<const SequenceStep> steps,
                                      std::span<const CollapseOperator> ops, double dt = kDefaultTimeStep,
                                      LindbladMethod method = LindbladMethod::kFirstOrder) {
  NoisyProcess total;
  for (const auto& step : steps) {
    NoisyProcess p;
    if (step.kind == SequenceStep::Kind::kAllX) {
      p.coherent = all_x_gate();
      p.map = Superoperator::unitary(p.coherent);
    } else {
      p = lindblad_propagate(dressed, step.pulse, ops, dt, method);
    }
    total.map = total.map.then(p.map);
    total.coherent = (p.coherent * total.coherent).eval();
  }
  return total;
}

/// Apply the virtual-Z frame of `frame` (from canonicalize) after the process.
inline Superoperator apply_frame(const Superoperator& s, const GateMatrix& frame) {
  std::array<Complex, kGateDim> z{};
  for (int a = 0; a < kGateDim; ++a) {
    double angle = 0.0;
    for (int q = 0; q < kNumQubits; ++q)
      if ((a >> (2 - q)) & 1) angle += frame.frame_phases[q];
    z[a] = std::polar(1.0, -angle);
  }
  Superoperator out = s;
  for (int a = 0; a < kGateDim; ++a)
    for (int b = 0; b < kGateDim; ++b) out.s.row(a + kGateDim * b) *= z[a] * std::conj(z[b]);
  return out;
}

/// Fidelity of the frame-corrected process to the canonical form of
/// `target`. The frame is fixed by the coherent part, as for noiseless runs.
inline double process_gate_fidelity(const NoisyProcess& p, const GateOperator& target) {
  const Superoperator corrected = apply_frame(p.map, canonicalize(p.coherent));
  return noisy_fidelity(corrected, to_ptm(canonicalize(target).u));
}

/// A named set of coherence times, one column of a decoherence budget.
struct BudgetChannel {
  std::string name;
  NoiseModel noise;
};

/// Data-qubit relaxation, data-qubit dephasing, coupler relaxation, coupler
/// dephasing, and all of them together.
inline std::vector<BudgetChannel> standard_budget(double data_t1_us, double data_tphi_us, double coupler_t1_us,
                                                  double coupler_tphi_us) {
  NoiseModel data_t1, data_tphi, coupler_t1, coupler_tphi, all;
  for (int q = 0; q < kNumQubits; ++q) {
    data_t1.t1_us[q] = all.t1_us[q] = data_t1_us;
    data_tphi.tphi_us[q] = all.tphi_us[q] = data_tphi_us;
  }
  coupler_t1.t1_us[kTransmon] = all.t1_us[kTransmon] = coupler_t1_us;
  coupler_tphi.tphi_us[kTransmon] = all.tphi_us[kTransmon] = coupler_tphi_us;
  return {{"data_relaxation", data_t1},
          {"data_dephasing", data_tphi},
          {"coupler_relaxation", coupler_t1},
          {"coupler_dephasing", coupler_tphi},
          {"all", all}};
}

struct BudgetRow {
  std::string channel;
  double fidelity = 0.0;
  double delta_f = 0.0;  // noiseless minus noisy fidelity
};

/// Fidelity loss per channel for a gate sequence. The first row is the
/// noiseless reference (channel "none", delta_f = 0).
inline std::vector<BudgetRow> decoherence_budget(const DressedModel& dressed, std::span<const SequenceStep> steps,
                                                 const GateOperator& target,
                                                 std::span<const BudgetChannel> channels,
                                                 double dt = kDefaultTimeStep,
                                                 LindbladMethod method = LindbladMethod::kFirstOrder) {
  std::vector<BudgetRow> rows;
  const double f0 = process_gate_fidelity(lindblad_sequence(dressed, steps, {}, dt, method), target);
  rows.push_back({"none", f0, 0.0});
  for (const auto& ch : channels) {
    const auto ops = collapse_operators(ch.noise, dressed);
    const double f = process_gate_fidelity(lindblad_sequence(dressed, steps, ops, dt, method), target);
    rows.push_back({ch.name, f, f0 - f});
  }
  return rows;
}

}  // namespace fluxccz

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

// Three-qubit gate matrices, Pauli transfer matrices and process fidelity.
//
// Computational states are indexed by the binary number xyz with F1 as the
// most significant bit. Pauli strings are indexed p1*16 + p2*4 + p3 with
// p in {I, X, Y, Z} and the first factor acting on F1.

#include <array>

#include "fluxccz/common.hpp"

namespace fluxccz {

inline constexpr int kNumQubits = 3;
inline constexpr int kGateDim = 8;
inline constexpr int kPtmDim = 64;

using GateOperator = Eigen::Matrix<Complex, kGateDim, kGateDim>;
using PtmMatrix = Eigen::Matrix<double, kPtmDim, kPtmDim>;
/// Linear map on 8x8 operators acting on column-major vec(rho).
using SuperoperatorMatrix = Eigen::Matrix<Complex, kPtmDim, kPtmDim>;

/// Extracted computational-subspace operator, generally non-unitary.
struct GateMatrix {
  GateOperator u = GateOperator::Identity();
  /// Virtual-Z angles applied to F1, F2, F3.
  std::array<double, kNumQubits> frame_phases{};
  double global_phase = 0.0;

  /// arg of the diagonal element for computational state `bits`.
  double phase(int bits) const { return std::arg(u(bits, bits)); }
};

struct PTM {
  PtmMatrix r = PtmMatrix::Identity();
};

inline GateOperator ccz_gate() {
  GateOperator u = GateOperator::Identity();
  u(7, 7) = -1.0;
  return u;
}

/// Controlled-controlled phase: phase `phi` on |111>.
inline GateOperator ccphase_gate(double phi) {
  GateOperator u = GateOperator::Identity();
  u(7, 7) = std::polar(1.0, phi);
  return u;
}

/// I - |000><000| (1 - e^{i phi}): phase `phi` on |000>.
inline GateOperator ccphase_star_gate(double phi) {
  GateOperator u = GateOperator::Identity();
  u(0, 0) = std::polar(1.0, phi);
  return u;
}

/// X on all three qubits as a permutation of the computational basis.
inline GateOperator all_x_gate() {
  GateOperator u = GateOperator::Zero();
  for (int b = 0; b < kGateDim; ++b) u(b ^ 7, b) = 1.0;
  return u;
}

inline std::array<Eigen::Matrix2cd, 4> single_qubit_paulis() {
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, -kI, kI, 0;
  z << 1, 0, 0, -1;
  return {id, x, y, z};
}

inline const std::array<GateOperator, kPtmDim>& pauli_strings() {
  static const std::array<GateOperator, kPtmDim> strings = [] {
    const auto p = single_qubit_paulis();
    std::array<GateOperator, kPtmDim> out;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) {
          GateOperator m;
          for (int i = 0; i < kGateDim; ++i)
            for (int j = 0; j < kGateDim; ++j)
              m(i, j) = p[a]((i >> 2) & 1, (j >> 2) & 1) * p[b]((i >> 1) & 1, (j >> 1) & 1) *
                        p[c](i & 1, j & 1);
          out[a * 16 + b * 4 + c] = m;
        }
    return out;
  }();
  return strings;
}

/// R_PQ = Tr(P E(Q)) / 8 for a channel given as a superoperator.
inline PTM ptm_from_superoperator(const SuperoperatorMatrix& s) {
  const auto& paulis = pauli_strings();
  PTM out;
  for (int q = 0; q < kPtmDim; ++q) {
    const Eigen::Matrix<Complex, kPtmDim, 1> image =
        s * Eigen::Map<const Eigen::Matrix<Complex, kPtmDim, 1>>(paulis[q].data());
    const Eigen::Map<const GateOperator> eq(image.data());
    for (int p = 0; p < kPtmDim; ++p) {
      out.r(p, q) = (paulis[p].cwiseProduct(eq.transpose())).sum().real() / kGateDim;
    }
  }
  return out;
}

/// Superoperator of rho -> U rho U^dagger in column-major vec convention.
inline SuperoperatorMatrix superoperator_of(const GateOperator& u) {
  SuperoperatorMatrix s;
  for (int a = 0; a < kGateDim; ++a)
    for (int b = 0; b < kGateDim; ++b) s.block<kGateDim, kGateDim>(a * kGateDim, b * kGateDim) =
        std::conj(u(a, b)) * u;
  return s;
}

/// R_PQ = Tr(P U Q U^dagger) / 8.
inline PTM to_ptm(const GateOperator& u) {
  const auto& paulis = pauli_strings();
  PTM out;
  for (int q = 0; q < kPtmDim; ++q) {
    const GateOperator image = u * paulis[q] * u.adjoint();
    for (int p = 0; p < kPtmDim; ++p) {
      out.r(p, q) = (paulis[p].cwiseProduct(image.transpose())).sum().real() / kGateDim;
    }
  }
  return out;
}

inline PTM to_ptm(const GateMatrix& gate) { return to_ptm(gate.u); }

/// F = (Tr(R_ideal^T R) + 2^n) / (2^n (2^n + 1)) with n = 3.
inline double process_fidelity(const PTM& r, const PTM& ideal) {
  const double trace = (ideal.r.transpose() * r.r).trace();
  return (trace + kGateDim) / (kGateDim * (kGateDim + 1.0));
}

inline double gate_fidelity(const GateOperator& u, const GateOperator& ideal) {
  return process_fidelity(to_ptm(u), to_ptm(ideal));
}

}  // namespace fluxccz

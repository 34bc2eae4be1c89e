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

// Isolated fluxonium and transmon eigenproblems.
//
//   fluxonium:  H = 4 E_C n^2 + E_J (1 - cos phi) + E_L/2 (phi - phi_ext)^2
//   transmon:   H = 4 E_C n^2 + E_J (1 - cos phi)
//
// The fluxonium is discretized on a uniform phase grid with a three-point
// Laplacian, n = -i d/dphi. The transmon is solved in the charge basis where
// cos(phi) is the nearest-neighbour hopping (|n><n+1| + h.c.)/2.
//
// Flux bias: a fluxonium biased at half a flux quantum corresponds to
// phi_ext = pi in this convention. The alternative offset pi/2 moves f01 to
// ~7.4 GHz for the reference parameters and cannot be the operating point, so
// pi is the default.

#include <cmath>
#include <cstdlib>

#include "fluxccz/common.hpp"
#include "fluxccz/eigensolver.hpp"

namespace fluxccz {

struct FluxoniumParams {
  double e_c = 0.0;  // GHz
  double e_l = 0.0;  // GHz
  double e_j = 0.0;  // GHz
  double phi_ext = kPi;

  void validate() const {
    require(e_c > 0.0 && e_l > 0.0 && e_j > 0.0, "fluxonium energies must be positive");
    require(std::isfinite(e_c) && std::isfinite(e_l) && std::isfinite(e_j),
            "fluxonium energies must be finite");
    require(std::isfinite(phi_ext), "fluxonium phi_ext must be finite");
  }
  friend bool operator==(const FluxoniumParams&, const FluxoniumParams&) = default;
};

struct TransmonParams {
  double e_c = 0.0;  // GHz
  double e_j = 0.0;  // GHz

  void validate() const {
    require(e_c > 0.0 && e_j > 0.0, "transmon energies must be positive");
    require(std::isfinite(e_c) && std::isfinite(e_j), "transmon energies must be finite");
  }
  friend bool operator==(const TransmonParams&, const TransmonParams&) = default;
};

/// Uniform phase grid centred on phi_ext, spanning phi_ext +- half_width.
/// Centring keeps the grid mirror symmetric about the potential's symmetry
/// point, so parity selection rules hold to round-off.
struct PhaseGridSpec {
  double half_width = 8.0 * kPi;
  int points = 2001;

  double step() const { return 2.0 * half_width / (points - 1); }
  friend bool operator==(const PhaseGridSpec&, const PhaseGridSpec&) = default;
};

/// Eigenenergies (ground subtracted) and operator matrix elements in the
/// eigenbasis of one isolated circuit element.
struct SubsystemSolution {
  RealVector energies;
  ComplexMatrix n_matrix;
  ComplexMatrix phi_matrix;

  int n_levels() const { return static_cast<int>(energies.size()); }
  double f01() const { return energies(1) - energies(0); }
  double anharmonicity() const { return energies(2) - 2.0 * energies(1); }
};

namespace detail {

/// Fix the sign of each eigenvector so that its largest-magnitude component
/// is positive.
inline void canonicalize_signs(RealMatrix& vectors) {
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    Eigen::Index arg = 0;
    vectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, k) < 0.0) vectors.col(k) *= -1.0;
  }
}

}  // namespace detail

inline SubsystemSolution solve_fluxonium(const FluxoniumParams& params, int n_levels,
                                         const PhaseGridSpec& grid = {}) {
  params.validate();
  require(n_levels >= 2, "solve_fluxonium: need at least two levels");
  require(grid.points >= 1001, "solve_fluxonium: phase grid needs at least 1001 points");
  require(grid.half_width >= 6.0 * kPi - 1e-12,
          "solve_fluxonium: phase grid must span at least +-6pi");
  require(n_levels < grid.points, "solve_fluxonium: more levels than grid points");

  const int npts = grid.points;
  const double h = grid.step();
  const double kinetic = 4.0 * params.e_c / (h * h);

  RealVector phi(npts);
  RealVector diagonal(npts);
  for (int m = 0; m < npts; ++m) {
    phi(m) = params.phi_ext - grid.half_width + m * h;
    const double shifted = phi(m) - params.phi_ext;
    diagonal(m) = 2.0 * kinetic + params.e_j * (1.0 - std::cos(phi(m))) +
                  0.5 * params.e_l * shifted * shifted;
  }
  const RealVector off = RealVector::Constant(npts - 1, -kinetic);

  EigenPairs eig = lowest_eigenpairs_tridiagonal(diagonal, off, n_levels);
  detail::canonicalize_signs(eig.vectors);

  // Continuum amplitude of the ground state at the grid edges.
  const double edge = std::max(std::abs(eig.vectors(0, 0)), std::abs(eig.vectors(npts - 1, 0))) /
                      std::sqrt(h);
  if (edge > 1e-8) {
    throw NumericalError("solve_fluxonium: ground state does not vanish at the grid edge (" +
                         std::to_string(edge) + "); enlarge the phase grid");
  }

  const RealMatrix& v = eig.vectors;
  // Central difference d/dphi; antisymmetric, so -i*D is exactly Hermitian.
  RealMatrix dv = RealMatrix::Zero(npts, n_levels);
  for (int m = 0; m < npts; ++m) {
    if (m + 1 < npts) dv.row(m) += v.row(m + 1);
    if (m > 0) dv.row(m) -= v.row(m - 1);
  }
  dv /= 2.0 * h;
  const RealMatrix derivative = v.transpose() * dv;
  const RealMatrix position = v.transpose() * phi.asDiagonal() * v;

  SubsystemSolution out;
  out.energies = eig.values.array() - eig.values(0);
  out.n_matrix = -kI * derivative.cast<Complex>();
  // Symmetrize away round-off so the Hermiticity contract holds exactly.
  out.n_matrix = 0.5 * (out.n_matrix + out.n_matrix.adjoint()).eval();
  out.phi_matrix = (0.5 * (position + position.transpose())).cast<Complex>();
  return out;
}

inline SubsystemSolution solve_transmon(const TransmonParams& params, int n_levels,
                                        int charge_cutoff = 30) {
  params.validate();
  require(n_levels >= 2, "solve_transmon: need at least two levels");
  require(charge_cutoff >= 20, "solve_transmon: charge cutoff must be at least 20");
  const int dim = 2 * charge_cutoff + 1;
  require(n_levels <= dim, "solve_transmon: more levels than charge states");

  RealVector charge(dim);
  RealVector diagonal(dim);
  for (int k = 0; k < dim; ++k) {
    charge(k) = k - charge_cutoff;
    diagonal(k) = 4.0 * params.e_c * charge(k) * charge(k) + params.e_j;
  }
  const RealVector off = RealVector::Constant(dim - 1, -0.5 * params.e_j);

  EigenPairs eig = lowest_eigenpairs_tridiagonal(diagonal, off, n_levels);
  detail::canonicalize_signs(eig.vectors);

  const double edge = std::max(std::abs(eig.vectors(0, 0)), std::abs(eig.vectors(dim - 1, 0)));
  if (edge > 1e-8) {
    throw NumericalError("solve_transmon: ground state reaches the charge cutoff (" +
                         std::to_string(edge) + "); increase the cutoff");
  }

  const RealMatrix& v = eig.vectors;
  RealMatrix n_real = v.transpose() * charge.asDiagonal() * v;
  n_real = 0.5 * (n_real + n_real.transpose()).eval();

  SubsystemSolution out;
  out.energies = eig.values.array() - eig.values(0);
  out.n_matrix = n_real.cast<Complex>();
  // phi is not single valued in the charge basis; its matrix elements follow
  // from [H, phi] = -8i E_C n, i.e. phi_jk = -8i E_C n_jk / (E_j - E_k).
  out.phi_matrix = ComplexMatrix::Zero(n_levels, n_levels);
  for (int j = 0; j < n_levels; ++j) {
    for (int k = 0; k < n_levels; ++k) {
      const double gap = out.energies(j) - out.energies(k);
      if (j != k && std::abs(gap) > 1e-12) {
        out.phi_matrix(j, k) = -8.0 * kI * params.e_c * n_real(j, k) / gap;
      }
    }
  }
  return out;
}

}  // namespace fluxccz

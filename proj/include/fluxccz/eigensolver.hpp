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

// Thin wrappers around the LAPACK MRRR eigensolvers. Only the lowest
// eigenpairs are ever needed, so both routines take a count and return the
// `count` smallest eigenvalues in ascending order.

#include <algorithm>
#include <string>
#include <vector>

#include <lapacke.h>

#include "fluxccz/common.hpp"

namespace fluxccz {

struct EigenPairs {
  RealVector values;   // ascending
  RealMatrix vectors;  // columns
};

/// Lowest `count` eigenpairs of the symmetric tridiagonal matrix with the
/// given diagonal and off-diagonal.
inline EigenPairs lowest_eigenpairs_tridiagonal(const RealVector& diagonal,
                                                const RealVector& off_diagonal,
                                                int count) {
  const lapack_int n = static_cast<lapack_int>(diagonal.size());
  require(n >= 1 && off_diagonal.size() == n - 1, "tridiagonal: inconsistent sizes");
  require(count >= 1 && count <= n, "tridiagonal: eigenpair count out of range");

  std::vector<double> d(diagonal.data(), diagonal.data() + n);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::copy(off_diagonal.data(), off_diagonal.data() + (n - 1), e.begin());

  lapack_int found = 0;
  RealVector w(n);
  RealMatrix z(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, count, 0.0,
                     &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != count) {
    throw NumericalError("dstevr failed (info=" + std::to_string(info) + ")");
  }
  return {w.head(count), std::move(z)};
}

/// Lowest `count` eigenpairs of a dense real symmetric matrix. The matrix is
/// taken by value because LAPACK destroys its input.
inline EigenPairs lowest_eigenpairs_symmetric(RealMatrix a, int count) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  require(a.cols() == n, "symmetric eigensolver: matrix must be square");
  require(count >= 1 && count <= n, "symmetric eigensolver: eigenpair count out of range");

  lapack_int found = 0;
  RealVector w(n);
  RealMatrix z(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, count, 0.0,
                     &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != count) {
    throw NumericalError("dsyevr failed (info=" + std::to_string(info) + ")");
  }
  return {w.head(count), std::move(z)};
}

}  // namespace fluxccz

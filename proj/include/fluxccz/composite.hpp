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

// Three fluxoniums and a transmon coupler with pairwise charge coupling
//
//   H = sum_i H_i + sum_{i<j} g_ij n_i n_j ,
//
// assembled in the product basis of the subsystem eigenstates, ordered
// (F1, F2, F3, T) with the transmon index running fastest.
//
// Phase gauge: fluxonium charge operators are purely imaginary in their real
// eigenbasis. The transmon eigenstates are rephased by i^k, which makes its
// charge operator purely imaginary as well (it only connects states of
// opposite parity). Every coupling term is then a product of two imaginary
// matrices and the composite Hamiltonian is real symmetric. The gauge only
// changes the phases of basis states, never energies or overlaps.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fluxccz/common.hpp"
#include "fluxccz/eigensolver.hpp"
#include "fluxccz/spectrum.hpp"

namespace fluxccz {

inline constexpr int kNumSubsystems = 4;
inline constexpr int kTransmon = 3;

/// Subsystem level indices (f1, f2, f3, t).
using BareLabel = std::array<int, kNumSubsystems>;

inline std::string to_string(const BareLabel& label) {
  std::string s = "|";
  for (int v : label) s += v < 0 ? std::string("?") : std::to_string(v);
  return s + ">";
}

/// Design capacitances in fF. Informational only; no quantity is derived from
/// them.
struct Capacitances {
  std::array<double, kNumSubsystems> self_fF{12.88, 12.88, 12.88, 67.1};
  double fluxonium_transmon_fF = 3.22;
  friend bool operator==(const Capacitances&, const Capacitances&) = default;
};

struct DeviceConfig {
  std::array<FluxoniumParams, 3> fluxoniums{};
  TransmonParams transmon{};
  /// Coupling strengths g_ij / h in GHz, symmetric with zero diagonal.
  std::array<std::array<double, kNumSubsystems>, kNumSubsystems> g{};
  Capacitances capacitances{};

  double coupling(int i, int j) const { return g[i][j]; }
  void set_coupling(int i, int j, double value) {
    g[i][j] = value;
    g[j][i] = value;
  }

  void validate() const {
    for (const auto& f : fluxoniums) f.validate();
    transmon.validate();
    for (int i = 0; i < kNumSubsystems; ++i) {
      require(g[i][i] == 0.0, "coupling matrix must have zero diagonal");
      for (int j = 0; j < kNumSubsystems; ++j) {
        require(std::isfinite(g[i][j]), "coupling strengths must be finite");
        require(g[i][j] == g[j][i], "coupling matrix must be symmetric");
      }
    }
  }
  friend bool operator==(const DeviceConfig&, const DeviceConfig&) = default;
};

/// Three fluxoniums detuned by ~22 MHz, a 7.075 GHz transmon coupler,
/// 600 MHz fluxonium-coupler and 150 MHz fluxonium-fluxonium couplings.
inline DeviceConfig reference_device() {
  DeviceConfig d;
  d.fluxoniums = {FluxoniumParams{1.53, 1.2, 6.35, kPi}, FluxoniumParams{1.53, 1.2, 6.25, kPi},
                  FluxoniumParams{1.53, 1.2, 6.15, kPi}};
  d.transmon = TransmonParams{0.3, 22.75};
  for (int i = 0; i < 3; ++i) {
    d.set_coupling(i, kTransmon, 0.6);
    for (int j = i + 1; j < 3; ++j) d.set_coupling(i, j, 0.15);
  }
  return d;
}

struct SpectrumNumerics {
  PhaseGridSpec grid{};
  int charge_cutoff = 30;
  friend bool operator==(const SpectrumNumerics&, const SpectrumNumerics&) = default;
};

/// y = (1 x .. x local x .. x 1) x for `local` acting on `site`, applied
/// column by column.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> apply_on_site(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& local, int site, int levels,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& x) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::Index stride = 1;
  for (int i = site + 1; i < kNumSubsystems; ++i) stride *= levels;
  const Eigen::Index block = stride * levels;
  require(x.rows() % block == 0, "apply_on_site: dimension mismatch");
  const Eigen::Index outer = x.rows() / block;
  Mat y = Mat::Zero(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index o = 0; o < outer; ++o) {
      for (Eigen::Index inner = 0; inner < stride; ++inner) {
        const Eigen::Index base = o * block + inner;
        for (int a = 0; a < levels; ++a) {
          Scalar acc{0};
          for (int b = 0; b < levels; ++b) acc += local(a, b) * x(base + b * stride, c);
          y(base + a * stride, c) = acc;
        }
      }
    }
  }
  return y;
}

/// A single-site operator embedded in the four-body product space.
struct LiftedOperator {
  int site = 0;
  int levels = 0;
  ComplexMatrix local;

  Eigen::Index dim() const {
    Eigen::Index d = 1;
    for (int i = 0; i < kNumSubsystems; ++i) d *= levels;
    return d;
  }
  ComplexMatrix apply(const ComplexMatrix& x) const {
    return apply_on_site<Complex>(local, site, levels, x);
  }
  ComplexMatrix to_dense() const { return apply(ComplexMatrix::Identity(dim(), dim())); }
};

struct CompositeModel {
  int levels = 0;
  /// Per-subsystem solutions in the gauge described at the top of this file.
  std::array<SubsystemSolution, kNumSubsystems> subsystems;
  /// Real symmetric Hamiltonian / h in GHz.
  RealMatrix h;
  std::array<LiftedOperator, kNumSubsystems> n_ops;
  std::vector<BareLabel> basis_labels;
  /// True when every charge operator obeys the parity selection rule, which
  /// makes total parity (sum of levels mod 2) a conserved quantity.
  bool parity_conserving = false;

  int dim() const { return static_cast<int>(basis_labels.size()); }
  int index_of(const BareLabel& label) const {
    int idx = 0;
    for (int v : label) idx = idx * levels + v;
    return idx;
  }
};

namespace detail {

inline BareLabel label_of(int index, int levels) {
  BareLabel label{};
  for (int s = kNumSubsystems - 1; s >= 0; --s) {
    label[s] = index % levels;
    index /= levels;
  }
  return label;
}

/// Largest matrix element between states of equal parity, relative to the
/// largest element overall.
inline double parity_defect(const ComplexMatrix& op) {
  double same = 0.0;
  const double scale = op.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < op.rows(); ++j)
    for (Eigen::Index k = 0; k < op.cols(); ++k)
      if ((j + k) % 2 == 0) same = std::max(same, std::abs(op(j, k)));
  return scale > 0.0 ? same / scale : 0.0;
}

/// Rephase |k> -> i^k |k>.
inline SubsystemSolution apply_quarter_turn_gauge(SubsystemSolution s) {
  const int n = s.n_levels();
  ComplexVector phase(n);
  for (int k = 0; k < n; ++k) phase(k) = std::pow(kI, k);
  s.n_matrix = (phase.conjugate().asDiagonal() * s.n_matrix * phase.asDiagonal()).eval();
  s.phi_matrix = (phase.conjugate().asDiagonal() * s.phi_matrix * phase.asDiagonal()).eval();
  return s;
}

}  // namespace detail

inline constexpr double kParityTolerance = 1e-9;

inline CompositeModel build_composite(const DeviceConfig& config, int levels_per_subsystem,
                                      const SpectrumNumerics& numerics = {}) {
  config.validate();
  require(levels_per_subsystem >= 4 && levels_per_subsystem <= 12,
          "build_composite: levels_per_subsystem must lie in [4, 12]");
  const int L = levels_per_subsystem;
  Eigen::Index dim = 1;
  for (int s = 0; s < kNumSubsystems; ++s) dim *= L;
  require(dim <= 20 * 20 * 20 * 20, "build_composite: dimension overflow");

  CompositeModel model;
  model.levels = L;
  for (int f = 0; f < 3; ++f) {
    model.subsystems[f] = solve_fluxonium(config.fluxoniums[f], L, numerics.grid);
  }
  SubsystemSolution transmon = solve_transmon(config.transmon, L, numerics.charge_cutoff);
  if (detail::parity_defect(transmon.n_matrix) > kParityTolerance) {
    throw InvalidArgument("build_composite: transmon charge operator breaks parity");
  }
  model.subsystems[kTransmon] = detail::apply_quarter_turn_gauge(std::move(transmon));

  // Imaginary parts of the (purely imaginary) charge operators.
  std::array<RealMatrix, kNumSubsystems> charge_im;
  model.parity_conserving = true;
  for (int s = 0; s < kNumSubsystems; ++s) {
    auto& n = model.subsystems[s].n_matrix;
    const double scale = n.cwiseAbs().maxCoeff();
    if (n.real().cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw InvalidArgument("build_composite: charge operator of subsystem " + std::to_string(s) +
                            " is not gauge-imaginary");
    }
    n = (kI * n.imag().cast<Complex>()).eval();
    charge_im[s] = n.imag();
    if (detail::parity_defect(n) > kParityTolerance) model.parity_conserving = false;
    model.n_ops[s] = LiftedOperator{s, L, n};
  }

  model.basis_labels.resize(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    model.basis_labels[i] = detail::label_of(static_cast<int>(i), L);
  }

  model.h = RealMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const BareLabel& a = model.basis_labels[i];
    double e = 0.0;
    for (int s = 0; s < kNumSubsystems; ++s) e += model.subsystems[s].energies(a[s]);
    model.h(i, i) = e;
  }

  // g (i A) x (i B) = -g A x B on the two sites, identity elsewhere.
  for (int p = 0; p < kNumSubsystems; ++p) {
    for (int q = p + 1; q < kNumSubsystems; ++q) {
      const double g = config.coupling(p, q);
      if (g == 0.0) continue;
      Eigen::Index stride_p = 1, stride_q = 1;
      for (int s = p + 1; s < kNumSubsystems; ++s) stride_p *= L;
      for (int s = q + 1; s < kNumSubsystems; ++s) stride_q *= L;
      for (Eigen::Index col = 0; col < dim; ++col) {
        const BareLabel& b = model.basis_labels[col];
        const Eigen::Index rest = col - b[p] * stride_p - b[q] * stride_q;
        for (int ap = 0; ap < L; ++ap) {
          const double cp = charge_im[p](ap, b[p]);
          if (cp == 0.0) continue;
          for (int aq = 0; aq < L; ++aq) {
            const double cq = charge_im[q](aq, b[q]);
            model.h(rest + ap * stride_p + aq * stride_q, col) -= g * cp * cq;
          }
        }
      }
    }
  }
  return model;
}

/// Diagonalized composite system restricted to a set of low-lying dressed
/// states.
struct DressedModel {
  int levels = 0;
  /// Dressed energies / h in GHz relative to the composite ground state.
  RealVector energies;
  /// Dominant bare label of each dressed state; {-1,-1,-1,-1} if unassigned.
  std::vector<BareLabel> labels;
  /// Squared overlap with the assigned bare state.
  RealVector overlap_quality;
  /// Transmon charge operator in the dressed basis.
  ComplexMatrix n_t;
  /// Bare-basis components of the kept dressed states (dim x size()).
  RealMatrix vectors;

  int size() const { return static_cast<int>(energies.size()); }

  /// Dressed index carrying `label`, or -1.
  int find(const BareLabel& label) const {
    for (int k = 0; k < size(); ++k)
      if (labels[k] == label) return k;
    return -1;
  }
  int index_of(const BareLabel& label) const {
    const int k = find(label);
    if (k < 0) throw LabelingError("no dressed state labeled " + to_string(label));
    return k;
  }
  double energy(const BareLabel& label) const { return energies(index_of(label)); }

  /// Dressed indices of |xyz c> ordered by the binary number xyz (F1 most
  /// significant).
  std::array<int, 8> computational_indices(int coupler_level = 0) const {
    std::array<int, 8> out{};
    for (int b = 0; b < 8; ++b) {
      out[b] = index_of(BareLabel{(b >> 2) & 1, (b >> 1) & 1, b & 1, coupler_level});
    }
    return out;
  }
};

/// Computational label |xyz c> for the 3-bit index xyz.
inline BareLabel computational_label(int bits, int coupler_level = 0) {
  return BareLabel{(bits >> 2) & 1, (bits >> 1) & 1, bits & 1, coupler_level};
}

namespace detail {

struct Candidate {
  double overlap;
  int dressed;
  int bare;
};

/// Greedy maximum-overlap assignment. Candidates are processed in order of
/// decreasing overlap; overlaps within 1e-6 of each other count as ties and
/// go to the lower dressed index first. A bare label is used at most once.
inline void assign_labels(const RealMatrix& vectors, const std::vector<BareLabel>& basis,
                          std::vector<BareLabel>& labels, RealVector& quality) {
  const int dim = static_cast<int>(vectors.rows());
  const int keep = static_cast<int>(vectors.cols());
  std::vector<Candidate> candidates;
  for (int k = 0; k < keep; ++k) {
    Eigen::Index best = 0;
    vectors.col(k).cwiseAbs2().maxCoeff(&best);
    for (int b = 0; b < dim; ++b) {
      const double ov = vectors(b, k) * vectors(b, k);
      if (ov >= 1e-3 || b == best) candidates.push_back({ov, k, b});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.overlap != y.overlap) return x.overlap > y.overlap;
    if (x.dressed != y.dressed) return x.dressed < y.dressed;
    return x.bare < y.bare;
  });
  for (std::size_t start = 0; start < candidates.size();) {
    std::size_t stop = start + 1;
    while (stop < candidates.size() && candidates[start].overlap - candidates[stop].overlap < 1e-6)
      ++stop;
    std::stable_sort(candidates.begin() + start, candidates.begin() + stop,
                     [](const Candidate& x, const Candidate& y) { return x.dressed < y.dressed; });
    start = stop;
  }

  labels.assign(keep, BareLabel{-1, -1, -1, -1});
  quality = RealVector::Zero(keep);
  std::vector<char> dressed_done(keep, 0);
  std::vector<char> bare_used(dim, 0);
  for (const auto& c : candidates) {
    if (dressed_done[c.dressed] || bare_used[c.bare]) continue;
    dressed_done[c.dressed] = 1;
    bare_used[c.bare] = 1;
    labels[c.dressed] = basis[c.bare];
    quality(c.dressed) = c.overlap;
  }
}

inline void check_computational_labels(const DressedModel& d) {
  for (int c = 0; c <= 1; ++c) {
    for (int b = 0; b < 8; ++b) {
      const BareLabel label = computational_label(b, c);
      const int k = d.find(label);
      if (k < 0) throw LabelingError("computational state " + to_string(label) + " not labeled");
      if (d.overlap_quality(k) <= 0.5) {
        throw LabelingError("computational state " + to_string(label) +
                            " is strongly hybridized (overlap " +
                            std::to_string(d.overlap_quality(k)) + ")");
      }
    }
  }
}

}  // namespace detail

inline DressedModel diagonalize_and_label(const CompositeModel& model, int n_keep) {
  const int dim = model.dim();
  require(n_keep >= 16 && n_keep <= dim, "diagonalize_and_label: n_keep must lie in [16, dim]");

  RealVector values;
  RealMatrix vectors;
  if (model.parity_conserving) {
    std::array<std::vector<int>, 2> sectors;
    for (int i = 0; i < dim; ++i) {
      const auto& a = model.basis_labels[i];
      sectors[(a[0] + a[1] + a[2] + a[3]) % 2].push_back(i);
    }
    std::vector<double> all_values;
    std::vector<std::pair<int, int>> origin;  // (sector, column)
    std::array<EigenPairs, 2> parts;
    for (int p = 0; p < 2; ++p) {
      const auto& idx = sectors[p];
      const int count = std::min<int>(n_keep, static_cast<int>(idx.size()));
      parts[p] = lowest_eigenpairs_symmetric(model.h(idx, idx), count);
      for (int c = 0; c < count; ++c) {
        all_values.push_back(parts[p].values(c));
        origin.emplace_back(p, c);
      }
    }
    std::vector<int> order(all_values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return all_values[x] < all_values[y]; });
    values.resize(n_keep);
    vectors = RealMatrix::Zero(dim, n_keep);
    for (int k = 0; k < n_keep; ++k) {
      const auto [p, c] = origin[order[k]];
      values(k) = all_values[order[k]];
      const auto& idx = sectors[p];
      for (std::size_t r = 0; r < idx.size(); ++r) vectors(idx[r], k) = parts[p].vectors(r, c);
    }
  } else {
    EigenPairs eig = lowest_eigenpairs_symmetric(model.h, n_keep);
    values = std::move(eig.values);
    vectors = std::move(eig.vectors);
  }
  detail::canonicalize_signs(vectors);

  DressedModel out;
  out.levels = model.levels;
  out.energies = values.array() - values(0);
  detail::assign_labels(vectors, model.basis_labels, out.labels, out.overlap_quality);
  const RealMatrix charge_t = model.n_ops[kTransmon].local.imag();
  const RealMatrix applied = apply_on_site<double>(charge_t, kTransmon, model.levels, vectors);
  RealMatrix nt = vectors.transpose() * applied;
  nt = 0.5 * (nt - nt.transpose()).eval();
  out.n_t = kI * nt.cast<Complex>();
  out.vectors = std::move(vectors);
  detail::check_computational_labels(out);
  return out;
}

/// Keep the 16 computational-sector states plus the lowest remaining states
/// up to `n_keep`, in ascending energy order.
inline DressedModel truncate(const DressedModel& d, int n_keep) {
  require(n_keep >= 16 && n_keep <= d.size(), "truncate: n_keep must lie in [16, size]");
  std::vector<int> keep;
  std::vector<char> taken(d.size(), 0);
  for (int c = 0; c <= 1; ++c)
    for (int idx : d.computational_indices(c)) taken[idx] = 1;
  int others = n_keep - 16;
  for (int k = 0; k < d.size() && others > 0; ++k) {
    if (!taken[k]) {
      taken[k] = 1;
      --others;
    }
  }
  for (int k = 0; k < d.size(); ++k)
    if (taken[k]) keep.push_back(k);

  DressedModel out;
  out.levels = d.levels;
  out.energies = d.energies(keep);
  out.overlap_quality = d.overlap_quality(keep);
  out.n_t = d.n_t(keep, keep);
  out.vectors = d.vectors(Eigen::all, keep);
  for (int k : keep) out.labels.push_back(d.labels[k]);
  return out;
}

/// Coupler transitions conditioned on the fluxonium state, and the residual
/// longitudinal couplings of the idle device.
struct SpectrumSummary {
  std::array<double, 8> f{};        // GHz, f[xyz] = E|xyz1> - E|xyz0>
  std::array<double, 3> zeta_zz{};  // Hz, pairs (F1,F2), (F1,F3), (F2,F3)
  double zeta_zzz = 0.0;            // Hz
  double delta = 0.0;               // GHz, f_111 - f_110
};

inline constexpr std::array<std::array<int, 2>, 3> kQubitPairs{{{0, 1}, {0, 2}, {1, 2}}};

inline SpectrumSummary coupler_transition_table(const DressedModel& d) {
  SpectrumSummary s;
  std::array<double, 8> e0{};
  for (int b = 0; b < 8; ++b) {
    e0[b] = d.energy(computational_label(b, 0));
    s.f[b] = d.energy(computational_label(b, 1)) - e0[b];
  }
  auto bit = [](int qubit) { return 1 << (2 - qubit); };
  for (int p = 0; p < 3; ++p) {
    const int i = bit(kQubitPairs[p][0]);
    const int j = bit(kQubitPairs[p][1]);
    s.zeta_zz[p] = (e0[i | j] - e0[i] - e0[j] + e0[0]) * kHzPerGHz;
  }
  s.zeta_zzz = (e0[7] - e0[6] - e0[5] - e0[3] + e0[4] + e0[2] + e0[1] - e0[0]) * kHzPerGHz;
  s.delta = s.f[7] - s.f[6];
  return s;
}

}  // namespace fluxccz

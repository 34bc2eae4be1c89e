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

// Fabrication spread: every junction critical current is scaled by an
// independent factor uniform in [1 - eps, 1 + eps]. E_J of each junction and
// E_L of each fluxonium (junction-array inductance) scale linearly with it;
// E_C and the couplings are untouched. Each sample reruns the static
// spectrum analysis.
//
// Sample k draws from its own generator seeded by (seed, k), so results do
// not depend on evaluation order.

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fluxccz/common.hpp"
#include "fluxccz/composite.hpp"

namespace fluxccz {

inline constexpr int kSpreadFactors = 7;

struct MonteCarloSpec {
  double epsilon = 0.01;
  int n_samples = 200;
  std::uint64_t seed = 1;
  int levels_per_subsystem = 6;

  void validate() const {
    require(epsilon >= 0.0 && epsilon < 0.5, "monte carlo: epsilon must lie in [0, 0.5)");
    require(n_samples >= 1, "monte carlo: need at least one sample");
    require(levels_per_subsystem >= 4 && levels_per_subsystem <= 12, "monte carlo: levels must lie in [4, 12]");
  }
};

struct SampleOutcome {
  std::array<double, 3> zeta_zz{};  // Hz
  double zeta_zzz = 0.0;            // Hz
  double delta = 0.0;               // GHz
  /// E_J(F1), E_L(F1), E_J(F2), E_L(F2), E_J(F3), E_L(F3), E_J(T).
  std::array<double, kSpreadFactors> factors{};
  bool ok = true;
  std::string error;
};

/// Scale factors of sample k.
inline std::array<double, kSpreadFactors> spread_factors(const MonteCarloSpec& spec, std::uint64_t k) {
  spec.validate();
  std::array<double, kSpreadFactors> f;
  f.fill(1.0);
  if (spec.epsilon == 0.0) return f;
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(1.0 - spec.epsilon, 1.0 + spec.epsilon);
  for (auto& v : f) v = u(rng);
  return f;
}

inline DeviceConfig apply_factors(DeviceConfig config, const std::array<double, kSpreadFactors>& f) {
  for (int q = 0; q < 3; ++q) {
    config.fluxoniums[q].e_j *= f[2 * q];
    config.fluxoniums[q].e_l *= f[2 * q + 1];
  }
  config.transmon.e_j *= f[6];
  return config;
}

inline DeviceConfig sample_device(const DeviceConfig& config, const MonteCarloSpec& spec, std::uint64_t k) {
  return apply_factors(config, spread_factors(spec, k));
}

/// Static summary with only as many dressed states as labeling needs.
inline SpectrumSummary quick_summary(const DeviceConfig& config, int levels, const SpectrumNumerics& numerics = {}) {
  const CompositeModel model = build_composite(config, levels, numerics);
  return coupler_transition_table(diagonalize_and_label(model, std::min<int>(32, static_cast<int>(model.dim()))));
}

struct MonteCarloResult {
  MonteCarloSpec spec;
  SpectrumSummary designed;
  std::vector<SampleOutcome> samples;  // ordered by sample index
  int failures = 0;
};

inline MonteCarloResult monte_carlo(const DeviceConfig& config, const MonteCarloSpec& spec,
                                    const SpectrumNumerics& numerics = {}) {
  spec.validate();
  config.validate();
  MonteCarloResult r;
  r.spec = spec;
  r.designed = quick_summary(config, spec.levels_per_subsystem, numerics);
  r.samples.resize(static_cast<std::size_t>(spec.n_samples));
  for (int k = 0; k < spec.n_samples; ++k) {
    SampleOutcome& out = r.samples[static_cast<std::size_t>(k)];
    out.factors = spread_factors(spec, static_cast<std::uint64_t>(k));
    try {
      const SpectrumSummary s = quick_summary(apply_factors(config, out.factors), spec.levels_per_subsystem, numerics);
      out.zeta_zz = s.zeta_zz;
      out.zeta_zzz = s.zeta_zzz;
      out.delta = s.delta;
    } catch (const NumericalError& e) {
      out.ok = false;
      out.error = e.what();
      ++r.failures;
    }
  }
  return r;
}

struct CdfPoint {
  double value = 0.0;
  double probability = 0.0;
};

/// Empirical CDF: sorted values with probability (rank + 1) / n.
inline std::vector<CdfPoint> empirical_cdf(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<CdfPoint> out;
  out.reserve(values.size());
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.push_back({values[i], (i + 1) / n});
  return out;
}

/// Linear-interpolated quantile of unsorted data, q in [0, 1].
inline double quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile: empty sample");
  require(q >= 0.0 && q <= 1.0, "quantile: q must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

/// Names and extractors of the reported quantities, in output order.
struct MonteCarloQuantity {
  const char* name;
  double (*get)(const SampleOutcome&);
  double (*designed)(const SpectrumSummary&);
};

inline const std::array<MonteCarloQuantity, 5>& monte_carlo_quantities() {
  static const std::array<MonteCarloQuantity, 5> q{{
      {"zeta_zz_12_hz", [](const SampleOutcome& s) { return s.zeta_zz[0]; },
       [](const SpectrumSummary& s) { return s.zeta_zz[0]; }},
      {"zeta_zz_13_hz", [](const SampleOutcome& s) { return s.zeta_zz[1]; },
       [](const SpectrumSummary& s) { return s.zeta_zz[1]; }},
      {"zeta_zz_23_hz", [](const SampleOutcome& s) { return s.zeta_zz[2]; },
       [](const SpectrumSummary& s) { return s.zeta_zz[2]; }},
      {"zeta_zzz_hz", [](const SampleOutcome& s) { return s.zeta_zzz; },
       [](const SpectrumSummary& s) { return s.zeta_zzz; }},
      {"delta_ghz", [](const SampleOutcome& s) { return s.delta; }, [](const SpectrumSummary& s) { return s.delta; }},
  }};
  return q;
}

/// Values of one quantity over the successful samples.
inline std::vector<double> successful_values(const MonteCarloResult& r, const MonteCarloQuantity& q) {
  std::vector<double> v;
  for (const auto& s : r.samples)
    if (s.ok) v.push_back(q.get(s));
  return v;
}

}  // namespace fluxccz

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


#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "fluxccz/robustness.hpp"

namespace fluxccz {
namespace {

TEST(Factors, ZeroSpreadIsIdentity) {
  MonteCarloSpec spec;
  spec.epsilon = 0.0;
  for (std::uint64_t k : {0u, 1u, 99u})
    for (double f : spread_factors(spec, k)) EXPECT_EQ(f, 1.0);
  const DeviceConfig c = reference_device();
  EXPECT_EQ(sample_device(c, spec, 3), c);
}

TEST(Factors, DeterministicPerSampleIndex) {
  MonteCarloSpec spec;
  spec.seed = 42;
  EXPECT_EQ(spread_factors(spec, 17), spread_factors(spec, 17));
  EXPECT_NE(spread_factors(spec, 17), spread_factors(spec, 18));
  MonteCarloSpec other = spec;
  other.seed = 43;
  EXPECT_NE(spread_factors(spec, 17), spread_factors(other, 17));
}

TEST(Factors, UniformOnTheInterval) {
  MonteCarloSpec spec;
  spec.epsilon = 0.01;
  double lo = 2.0, hi = 0.0, sum = 0.0, sq = 0.0;
  long n = 0;
  for (std::uint64_t k = 0; k < 10000; ++k)
    for (double f : spread_factors(spec, k)) {
      lo = std::min(lo, f);
      hi = std::max(hi, f);
      sum += f;
      sq += (f - 1.0) * (f - 1.0);
      ++n;
    }
  EXPECT_GE(lo, 0.99);
  EXPECT_LE(hi, 1.01);
  EXPECT_LT(lo, 0.9901);
  EXPECT_GT(hi, 1.0099);
  EXPECT_NEAR(sum / n, 1.0, 1e-3 * 0.01);
  // Variance of U(-e, e) is e^2 / 3.
  EXPECT_NEAR(sq / n, 1e-4 / 3.0, 0.02 * 1e-4 / 3.0);
}

TEST(Factors, AppliedToTheRightParameters) {
  std::array<double, kSpreadFactors> f{1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7};
  const DeviceConfig c = reference_device();
  const DeviceConfig s = apply_factors(c, f);
  for (int q = 0; q < 3; ++q) {
    EXPECT_DOUBLE_EQ(s.fluxoniums[q].e_j, c.fluxoniums[q].e_j * f[2 * q]);
    EXPECT_DOUBLE_EQ(s.fluxoniums[q].e_l, c.fluxoniums[q].e_l * f[2 * q + 1]);
    EXPECT_EQ(s.fluxoniums[q].e_c, c.fluxoniums[q].e_c);
  }
  EXPECT_DOUBLE_EQ(s.transmon.e_j, c.transmon.e_j * 1.7);
  EXPECT_EQ(s.transmon.e_c, c.transmon.e_c);
}

TEST(Factors, RejectsBadSpec) {
  MonteCarloSpec spec;
  spec.epsilon = -0.1;
  EXPECT_THROW(spread_factors(spec, 0), InvalidArgument);
  spec.epsilon = 0.01;
  spec.n_samples = 0;
  EXPECT_THROW(spec.validate(), InvalidArgument);
}

TEST(Cdf, SingleSampleIsAStep) {
  const auto cdf = empirical_cdf({3.5});
  ASSERT_EQ(cdf.size(), 1u);
  EXPECT_EQ(cdf[0].value, 3.5);
  EXPECT_EQ(cdf[0].probability, 1.0);
}

TEST(Cdf, MonotoneAndEndsAtOne) {
  const auto cdf = empirical_cdf({4.0, -1.0, 2.0, 2.0, 7.0});
  ASSERT_EQ(cdf.size(), 5u);
  for (std::size_t k = 1; k < cdf.size(); ++k) {
    EXPECT_LE(cdf[k - 1].value, cdf[k].value);
    EXPECT_LT(cdf[k - 1].probability, cdf[k].probability);
  }
  EXPECT_EQ(cdf.front().value, -1.0);
  EXPECT_DOUBLE_EQ(cdf.front().probability, 0.2);
  EXPECT_EQ(cdf.back().probability, 1.0);
}

TEST(Cdf, Quantiles) {
  const std::vector<double> v{5.0, 1.0, 3.0, 2.0, 4.0};
  EXPECT_EQ(quantile(v, 0.0), 1.0);
  EXPECT_EQ(quantile(v, 0.5), 3.0);
  EXPECT_EQ(quantile(v, 1.0), 5.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.125), 1.5);
  EXPECT_THROW(quantile({}, 0.5), InvalidArgument);
}

class SmallMonteCarlo : public ::testing::Test {
 protected:
  static MonteCarloResult run(double epsilon, int n) {
    MonteCarloSpec spec;
    spec.epsilon = epsilon;
    spec.n_samples = n;
    spec.levels_per_subsystem = 4;
    return monte_carlo(reference_device(), spec);
  }
};

TEST_F(SmallMonteCarlo, ZeroSpreadReproducesDesign) {
  const MonteCarloResult r = run(0.0, 3);
  EXPECT_EQ(r.failures, 0);
  for (const auto& s : r.samples) {
    EXPECT_EQ(s.delta, r.designed.delta);
    EXPECT_EQ(s.zeta_zzz, r.designed.zeta_zzz);
  }
}

TEST_F(SmallMonteCarlo, TinySpreadConvergesToDesign) {
  const MonteCarloResult r = run(1e-4, 9);
  ASSERT_EQ(r.failures, 0);
  for (const auto& q : monte_carlo_quantities()) {
    const double median = quantile(successful_values(r, q), 0.5);
    const double designed = q.designed(r.designed);
    EXPECT_LT(std::abs(median - designed), 1e-2 * std::abs(designed) + 1.0) << q.name;
  }
  const double median_delta = quantile(successful_values(r, monte_carlo_quantities()[4]), 0.5);
  EXPECT_LT(std::abs(median_delta / r.designed.delta - 1.0), 1e-3);
}

TEST_F(SmallMonteCarlo, DesignedDeviceHasSmallCrosstalk) {
  const MonteCarloResult r = run(0.0, 1);
  for (double z : r.designed.zeta_zz) {
    EXPECT_LT(std::abs(z), 2.0 * 5e3);
    EXPECT_GT(std::abs(z), 0.5 * 5e3 / 4.0);
  }
  EXPECT_GT(r.designed.delta, 0.08);
  EXPECT_LT(r.designed.delta, 0.14);
}

TEST_F(SmallMonteCarlo, SpreadWidensDistribution) {
  const MonteCarloResult a = run(0.005, 12);
  const MonteCarloResult b = run(0.02, 12);
  const auto& q = monte_carlo_quantities()[4];
  auto iqr = [&](const MonteCarloResult& r) {
    const auto v = successful_values(r, q);
    return quantile(v, 0.75) - quantile(v, 0.25);
  };
  EXPECT_GT(iqr(b), iqr(a));
}

}  // namespace
}  // namespace fluxccz

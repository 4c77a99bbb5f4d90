#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hermscal/error.hpp"
#include "hermscal/spectral_model.hpp"
#include "oracles.hpp"

using namespace hermscal;

TEST(Delta, Values) {
  EXPECT_DOUBLE_EQ(delta(1, 0.4), 0.4);
  EXPECT_NEAR(delta(2, 0.4), 0.3, 1e-15);
  EXPECT_NEAR(delta(3, 0.4), 0.2, 1e-15);
  EXPECT_THROW(delta(0, 0.4), DomainError);
  EXPECT_THROW(delta(1, 0.5), DomainError);
}

TEST(LongMemory, Condition) {
  EXPECT_TRUE(is_long_memory(2, 0.3));
  EXPECT_FALSE(is_long_memory(3, 0.3));
  EXPECT_FALSE(is_long_memory(5, 0.4));
  EXPECT_TRUE(is_long_memory(4, 0.4));
  const auto e = memory_exponents(2, 0.45, 1);
  EXPECT_NEAR(e.delta, 0.4, 1e-15);
  EXPECT_NEAR(e.d0, 1.4, 1e-15);
}

TEST(SpectralDensity, PointValues) {
  const SpectralModel m(0.25, ShortRangeFactor::constant(1.0), false);
  EXPECT_NEAR(spectral_density(m, oracle::pi / 2), std::pow(2.0, -0.25), 1e-14);
  EXPECT_EQ(spectral_density(m, 0.0), std::numeric_limits<double>::infinity());

  const SpectralModel n(0.4, ShortRangeFactor::constant(1.0 / (2 * oracle::pi)), true);
  const double c = n.scale() / (2 * oracle::pi);
  EXPECT_NEAR(spectral_density(n, oracle::pi), c * std::pow(2.0, -0.8), 1e-14);
  EXPECT_THROW(spectral_density(n, -oracle::pi), DomainError);
}

TEST(SpectralDensity, NormalizationScaleIsInvariantToFstarLevel) {
  const SpectralModel a(0.3, ShortRangeFactor::constant(1.0), true);
  const SpectralModel b(0.3, ShortRangeFactor::constant(7.5), true);
  EXPECT_NEAR(a.fstar_at_zero(), b.fstar_at_zero(), 1e-14);
}

TEST(ShortRange, TableInterpolatesAndSymmetrizes) {
  const auto t = ShortRangeFactor::table({0.0, oracle::pi}, {1.0, 3.0});
  EXPECT_NEAR(t(oracle::pi / 2), 2.0, 1e-14);
  EXPECT_NEAR(t(-oracle::pi / 2), 2.0, 1e-14);
  const auto full = ShortRangeFactor::table({-oracle::pi, oracle::pi}, {1.0, 3.0});
  EXPECT_NEAR(full(1.0), 2.0, 1e-14);  // (f(1) + f(−1))/2
  EXPECT_THROW(ShortRangeFactor::table({0.0, 1.0}, {1.0, -1.0}), DomainError);
}

TEST(Autocovariance, FarimaKernelMatchesClosedForm) {
  for (double d : {0.05, 0.25, 0.4, 0.49}) {
    const auto c = farima_kernel_coefficients(d, 300);
    for (long k : {0L, 1L, 2L, 17L, 300L})
      EXPECT_NEAR(c[k] / oracle::farima_acvf(d, k), 1.0, 1e-12) << "d=" << d << " k=" << k;
  }
}

TEST(Autocovariance, NormalizedVarianceIsOne) {
  for (double d : {0.1, 0.3, 0.45}) {
    const auto g = autocovariance(SpectralModel::farima(d), 4);
    EXPECT_NEAR(g[0], 1.0, 1e-6);
  }
  const SpectralModel m(0.35, ShortRangeFactor::table({0, 1, oracle::pi}, {2.0, 1.0, 0.5}), true);
  EXPECT_NEAR(autocovariance(m, 0)[0], 1.0, 1e-6);
}

TEST(Autocovariance, TableFactorMatchesDirectIntegral) {
  const auto fs = ShortRangeFactor::table({0, 0.5, 1.5, oracle::pi}, {2.0, 1.2, 0.7, 0.4});
  const SpectralModel m(0.4, fs, false);
  const auto g = autocovariance(m, 64);
  for (long k : {0L, 1L, 5L, 20L, 64L}) {
    const double ref = oracle::spectral_integral(0.4, k, [&](double l) { return fs(l); });
    EXPECT_NEAR(g[k], ref, 1e-6 * std::abs(ref) + 1e-7) << "k=" << k;
  }
}

TEST(Autocovariance, LargeLagPowerLaw) {
  const auto g = autocovariance(SpectralModel::farima(0.4), 512);
  EXPECT_GT(g[100], 0.0);
  EXPECT_NEAR(g[512] / g[256], std::pow(2.0, -0.2), 0.03 * std::pow(2.0, -0.2));
  // cross-check against a direct numerical integral at the large lag
  const auto m = SpectralModel::farima(0.4);
  const double ref = oracle::spectral_integral(0.4, 256, [&](double) { return m.scale(); });
  EXPECT_NEAR(g[256], ref, 1e-6);
}

TEST(Autocovariance, MonotoneInD) {
  const auto lo = autocovariance(SpectralModel::farima(0.1), 50);
  const auto hi = autocovariance(SpectralModel::farima(0.4), 50);
  EXPECT_LT(lo[50], hi[50]);
}

TEST(SpectralModel, JsonRoundTrip) {
  const auto m = SpectralModel::from_json(
      {{"d", 0.3}, {"fstar", {{"kind", "table"}, {"lambda", {0.0, oracle::pi}}, {"value", {1, 2}}}},
       {"normalized", false}});
  nlohmann::json j = m;
  const auto back = SpectralModel::from_json(j);
  EXPECT_DOUBLE_EQ(back.d(), 0.3);
  EXPECT_FALSE(back.normalized());
  EXPECT_DOUBLE_EQ(back.fstar(1.0), m.fstar(1.0));
  EXPECT_THROW(SpectralModel::from_json({{"d", 0.6}}), DomainError);
  EXPECT_THROW(SpectralModel::from_json({{"fstar", 1}}), SpecError);
}

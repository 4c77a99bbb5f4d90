#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "hermscal/error.hpp"
#include "hermscal/estimator.hpp"
#include "hermscal/stats.hpp"

using namespace hermscal;

namespace {

const double kC = 1.0 / (2.0 * std::log(2.0));

void expect_constraints(const EstimatorWeights& w) {
  double s = 0, si = 0;
  for (std::size_t i = 0; i < w.w.size(); ++i) {
    s += w.w[i];
    si += i * w.w[i];
  }
  EXPECT_NEAR(s, 0.0, 1e-12);
  EXPECT_NEAR(si, kC, 1e-12);
}

ScalogramTable power_law(double c, double d0, int jmax) {
  ScalogramTable t;
  for (int j = 1; j <= jmax; ++j) t.rows.push_back({j, 1000, c * std::pow(2.0, 2 * j * d0)});
  return t;
}

double sum_sq(const std::vector<double>& w) {
  return std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
}

}  // namespace

TEST(Weights, TwoPoint) {
  const auto w = regression_weights(2, WeightMode::MinimalTwoPoint);
  ASSERT_EQ(w.w.size(), 2u);
  EXPECT_NEAR(w.w[0], -0.72134752044448170, 1e-15);
  EXPECT_NEAR(w.w[1], 0.72134752044448170, 1e-15);
}

TEST(Weights, ConstraintsHoldForEveryMode) {
  for (int p : {2, 3, 4, 6}) {
    expect_constraints(regression_weights(p, WeightMode::MinimalTwoPoint));
    expect_constraints(regression_weights(p, WeightMode::LeastSquares));
  }
  const auto n = regression_weights(4, WeightMode::Nulling, 0.4);
  expect_constraints(n);
  EXPECT_NEAR(limit_multiplier(n, 0.4), 0.0, 1e-12);
  EXPECT_THROW(regression_weights(2, WeightMode::Nulling, 0.4), DomainError);
  EXPECT_THROW(regression_weights(1, WeightMode::LeastSquares), DomainError);
}

TEST(Weights, LeastSquaresIsMinimumNorm) {
  const auto w = regression_weights(3, WeightMode::LeastSquares);
  const double a = 1.0 / (4.0 * std::log(2.0));
  EXPECT_NEAR(w.w[0], -a, 1e-15);
  EXPECT_NEAR(w.w[1], 0.0, 1e-15);
  EXPECT_NEAR(w.w[2], a, 1e-15);
  // The constraint set for p = 3 is the line w(t) = (t − c, c − 2t, t),
  // since w0 + w1 + w2 = 0 and w1 + 2 w2 = c. Scan it.
  double best = 1e300, best_t = 0;
  for (double t = -2; t <= 2; t += 1e-5) {
    const double n = sum_sq({t - kC, kC - 2 * t, t});
    if (n < best) best = n, best_t = t;
  }
  EXPECT_NEAR(best_t, a, 2e-5);
  EXPECT_LE(sum_sq(w.w), best + 1e-12);
}

TEST(Estimate, ExactPowerLaw) {
  const auto t = power_law(3.7, 0.3, 10);
  for (auto w : {regression_weights(2, WeightMode::MinimalTwoPoint),
                 regression_weights(3, WeightMode::LeastSquares),
                 regression_weights(4, WeightMode::Nulling, 0.35)}) {
    const auto r = estimate_d0(t, 4, w);
    EXPECT_NEAR(r.d0_hat, 0.3, 1e-10);
    for (double e : r.residuals) EXPECT_NEAR(e, 0.0, 1e-10);
  }
  EXPECT_THROW(estimate_d0(t, 9, regression_weights(3, WeightMode::LeastSquares)), ScaleUnavailable);
}

TEST(Estimate, DefaultJ0) {
  // haar, N = 2^18: n_10 = 255 ≥ 128 and n_11 = 126
  EXPECT_EQ(default_j0(1 << 18, 2, 2), 9);
  EXPECT_EQ(default_j0(1 << 18, 2, 3), 8);
}

TEST(Estimate, RosenblattCaseMean) {
  ProcessConfig c{SpectralModel::farima(0.4), 2, 0, 1 << 18, 41};
  const auto e = wavelet_spectrum_mc(c, make_filter_bank("haar", 7), {5, 6, 7}, 100);
  const auto w = regression_weights(3, WeightMode::LeastSquares);
  std::vector<double> d;
  for (const auto& t : e.tables) d.push_back(estimate_d0(t, 5, w).d0_hat);
  EXPECT_NEAR(stats::mean(d), 0.3, 0.05);
}

TEST(Estimate, IntegratedGaussianMean) {
  ProcessConfig c{SpectralModel::farima(0.4), 1, 1, 1 << 18, 42};
  const auto b = make_filter_bank("db2", 9);
  const int j0 = default_j0(c.N, b.T(), 2);
  std::vector<int> sc;
  for (int j = 1; j <= j0 + 1; ++j) sc.push_back(j);
  const auto e = wavelet_spectrum_mc(c, b, sc, 100);
  const auto w = regression_weights(2, WeightMode::LeastSquares);
  std::vector<double> d;
  for (const auto& t : e.tables) d.push_back(estimate_d0(t, j0, w).d0_hat);
  EXPECT_NEAR(stats::mean(d), 1.4, 0.05);
}

TEST(Rate, SmallGaussianRun) {
  RateConfig rc;
  rc.process = {SpectralModel::farima(0.4), 1, 0, 0, 43};
  rc.Ns = {1 << 12, 1 << 13, 1 << 14, 1 << 15};
  rc.replicates = 60;
  const auto r = rate_experiment(rc);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_DOUBLE_EQ(r.expected_exponent, -0.5);
  EXPECT_EQ(r.rows[0].j, 6);
  EXPECT_LT(r.rows[3].sd_d0_hat, r.rows[0].sd_d0_hat);
  EXPECT_LT(r.rows[3].sd_fluctuation, r.rows[0].sd_fluctuation);
  EXPECT_TRUE(std::isfinite(r.d0_exponent));
  rc.Ns.pop_back();
  EXPECT_THROW(rate_experiment(rc), DomainError);
}

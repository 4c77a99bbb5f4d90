#pragma once

#include <span>
#include <vector>

namespace hermscal::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
double standard_error(std::span<const double> x);
/// Adjusted Fisher–Pearson skewness G1.
double skewness(std::span<const double> x);
/// Standard error of G1 under normality.
double skewness_se(std::size_t n);
/// (x − mean) / sd.
std::vector<double> studentize(std::span<const double> x);
double correlation(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};
LinearFit ols(std::span<const double> x, std::span<const double> y);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
/// Two-sample Kolmogorov–Smirnov test, asymptotic p-value with the
/// Stephens small-sample correction.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);
/// Kolmogorov survival function Q(λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}.
double kolmogorov_q(double lambda);

}  // namespace hermscal::stats

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hermscal/gaussian_synth.hpp"
#include "hermscal/scalogram.hpp"
#include "hermscal/wavelet_bank.hpp"

namespace hermscal {

enum class WeightMode { MinimalTwoPoint, LeastSquares, Nulling };

std::string to_string(WeightMode m);
WeightMode weight_mode_from_string(const std::string& s);

/// Σ w_i = 0 and Σ i·w_i = 1/(2 ln 2).
struct EstimatorWeights {
  int p = 2;
  std::vector<double> w;
  WeightMode mode = WeightMode::LeastSquares;
  double nulling_d = std::numeric_limits<double>::quiet_NaN();
};

/// minimal_two_point puts ±1/(2 ln 2)/(p−1) on the end scales; least_squares
/// is the minimum-norm solution; nulling additionally forces
/// Σ w_i 2^{(1−2d)i} = 0 at d = nulling_d (needs p ≥ 3).
EstimatorWeights regression_weights(int p, WeightMode mode,
                                    double nulling_d = std::numeric_limits<double>::quiet_NaN());

/// Σ_i w_i 2^{(1−2d)i}, the multiplier of the Rosenblatt limit of d̂0.
double limit_multiplier(const EstimatorWeights& w, double d);

struct EstimateReport {
  double d0_hat = 0.0;
  int j0 = 0;
  EstimatorWeights weights;
  std::vector<int> scales;
  std::vector<long> n_j;
  std::vector<double> log_sigma2;
  // ln σ̂² minus the fitted line ln c + 2 ln2 · d̂0 · j.
  std::vector<double> residuals;
};

/// d̂0 = Σ_i w_i ln σ̂²_{j0+i}.
EstimateReport estimate_d0(const ScalogramTable& table, int j0, const EstimatorWeights& w,
                           long n_min = 32);

/// Largest j with n_j ≥ n_min, minus (p − 1).
int default_j0(std::size_t N, std::size_t T, int p, long n_min = 128);

nlohmann::json to_json(const EstimateReport& r);

struct RateRow {
  std::size_t N = 0;
  long n_j = 0;
  int j = 0;
  double mean_d0_hat = 0.0;
  double sd_d0_hat = 0.0;
  double skewness = 0.0;
  double sd_fluctuation = 0.0;  // SD of σ̂²_j / σ²_j − 1, σ²_j the replicate mean
  std::vector<double> d0_hat;  // per replicate
};

struct RateReport {
  std::vector<RateRow> rows;
  double fitted_exponent = 0.0;   // slope of ln SD(σ̂²_j/σ²_j − 1) on ln n_j
  double expected_exponent = 0.0; // 2d−1 (q0 ≥ 2) or −1/2 (q0 = 1)
  double exponent_se = 0.0;
  // Same regression for SD(d̂0). The weights shrink the Rosenblatt part of
  // d̂0 by Σ w_i 2^{(1−2d)i}, so at moderate n_j this can sit near −1/2 even
  // for q0 ≥ 2.
  double d0_exponent = 0.0;
  double d0_exponent_se = 0.0;
};

struct RateConfig {
  ProcessConfig process;  // N is taken from Ns
  std::vector<std::size_t> Ns;
  std::string family = "haar";
  std::size_t replicates = 100;
  EstimatorWeights weights = regression_weights(2, WeightMode::MinimalTwoPoint);
  // Defaults to ⌊log2 N / 2⌋.
  std::function<int(std::size_t)> j_rule;
  unsigned workers = 1;
};

RateReport rate_experiment(const RateConfig& cfg);

/// N,n_j,j,mean_d0_hat,sd_d0_hat,sd_fluctuation
void write_rate_csv(const std::string& path, const RateReport& r);

}  // namespace hermscal

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace hermscal {

enum class RosenblattMethod { PartialSum, SpectralGrid };

std::string to_string(RosenblattMethod m);
RosenblattMethod rosenblatt_method_from_string(const std::string& s);

struct RosenblattOptions {
  // partial_sum
  std::size_t n_internal = std::size_t{1} << 16;
  // spectral_grid: cells [0, eps], geometric up to 1 with ratio rho, then
  // uniform of width step up to extent (positive half-line, mirrored).
  double grid_eps = 1e-8;
  double grid_ratio = 1.1;
  double grid_step = 0.1;
  double grid_extent = 96.0;
  bool check_convergence = true;
  double convergence_tolerance = 0.02;
  // Add an independent Gaussian carrying the variance missing from the
  // finite construction, relative to the exact limit.
  bool compensate = true;
  unsigned workers = 1;
};

struct RosenblattSamples {
  std::vector<double> samples;
  double d = 0.0;
  RosenblattMethod method = RosenblattMethod::PartialSum;
  std::uint64_t seed = 0;
  double target_variance = 0.0;    // exact variance of the limit in this normalization
  double captured_variance = 0.0;  // variance of the uncompensated construction
  double refined_variance = 0.0;   // spectral only: captured variance at the refined grid
  std::size_t size_parameter = 0;  // n (partial sum) or number of cells (spectral)
  // spectral only: exact skewness of the construction, compensation included
  double skewness = std::numeric_limits<double>::quiet_NaN();

  std::vector<double> studentized() const;
};

/// Samples of Z_d(1) up to scale.
///
/// partial_sum: n^{−2d} Σ_{t≤n} H_2(G_t) for a unit-variance FARIMA(0,d,0) path G.
/// spectral_grid: the off-diagonal double Wiener–Itô integral of
/// (e^{i(x+y)}−1)/(i(x+y)) |x|^{−d}|y|^{−d}, discretized on symmetric cells and
/// reduced to Σ μ_i (ζ_i² − 1) by an eigen-decomposition.
RosenblattSamples rosenblatt_oracle_sample(double d, RosenblattMethod method,
                                           std::size_t replicates, std::uint64_t seed,
                                           const RosenblattOptions& opts = {});

/// Var Z_d(1) for the spectral normalization: 2 Γ_2 ∫ 4 sin²(s/2) |s|^{−1−4d} ds.
double rosenblatt_spectral_variance(double d);

}  // namespace hermscal

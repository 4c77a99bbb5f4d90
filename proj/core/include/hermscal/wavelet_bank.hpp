#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hermscal {

/// Per-level dyadic wavelet filters g_j, j = 1..levels, with γ_j = 2^j.
///
/// g_j(t) is stored for t = 0..T_j−1. The base filters follow the
/// orthonormal convention Σh = √2, g[n] = (−1)^n h[L−1−n].
struct FilterBank {
  std::string family;
  int levels = 0;
  std::vector<double> lowpass;
  std::vector<double> highpass;
  std::vector<std::vector<double>> g;  // g[j−1] holds g_j
  int M = 0;                           // vanishing moments
  double alpha = 0.0;                  // tabulated Fourier decay exponent (NaN if unknown)
  double alpha_fitted = 0.0;
  std::vector<std::string> warnings;
  // Autocorrelations of lowpass/highpass, i.e. |H|² and |G|² as cosine series.
  std::vector<double> lowpass_acf;
  std::vector<double> highpass_acf;

  /// Base wavelet support length, the T of the coefficient count.
  std::size_t T() const { return lowpass.size(); }
  const std::vector<double>& level(int j) const;
  std::size_t support(int j) const { return level(j).size(); }
};

std::vector<std::string> available_families();

/// Builds g_1..g_{J_max} by the cascade g_j = a_{j−1} ⊗ (g ↑ 2^{j−1}).
/// Throws AdmissibilityError when the family has fewer than M_required
/// vanishing moments.
FilterBank make_filter_bank(const std::string& family, int J_max, double M_required = 0.0);

/// Bank from an arbitrary orthonormal lowpass filter. M is counted numerically.
FilterBank make_filter_bank_from_lowpass(std::vector<double> lowpass, int J_max,
                                         std::string family = "user");

struct AdmissibilityReport {
  int M = 0;
  int K = 0;
  int q0 = 1;
  double d = 0.0;
  double delta = 0.0;
  double required = 0.0;  // K + δ(q0)
  bool pass = false;
  double alpha = 0.0;
  // Smallest C with |ĝ_j(λ)| ≤ C 2^{j/2}|2^jλ|^M/(1+2^j|λ|)^{α+M} on a λ-grid.
  double decay_constant = 0.0;
  std::vector<double> decay_constant_per_level;
};

AdmissibilityReport check_admissibility(const FilterBank& bank, int q0, double d, int K);

/// W_k = Σ_t h(γk − t) Y_t with Y indexed t = 1..N and taps[i] = h(offset + i).
struct CoefficientSeries {
  int j = 0;
  long k0 = 0;  // location index of values[0]
  std::vector<double> values;
};

struct CoefficientTable {
  std::size_t N = 0;
  std::size_t T = 0;
  std::string family;
  std::vector<CoefficientSeries> scales;  // scales[j−1]

  const CoefficientSeries& at(int j) const;
  int max_level() const { return static_cast<int>(scales.size()); }
};

/// Pyramid (filter and downsample) transform; keeps the first n_j
/// boundary-free coefficients per scale.
CoefficientTable dwt_details(std::span<const double> y, const FilterBank& bank, int J_max);

/// Naive convolution, all boundary-free k. Reference for the pyramid and
/// entry point for non-dyadic γ.
CoefficientSeries direct_wavelet_coeffs(std::span<const double> y, std::span<const double> taps,
                                        long gamma, long offset = 0);

/// ĝ_j(ω) = Σ_t g_j(t) e^{−itω}.
std::complex<double> transfer(const FilterBank& bank, int j, double omega);

struct HInfinityOptions {
  double tolerance = 1e-4;
  int max_level = 20;
  double lambda_max = 64.0 * 3.14159265358979323846;
};

/// 2^{−j/2} ĝ_j(2^{−j}λ) at the first level j where the modulus stops moving
/// by more than `tolerance`. Only the modulus is phase-free.
std::complex<double> h_infty_eval(const FilterBank& bank, double lambda,
                                  const HInfinityOptions& opts = {});

/// |ĥ∞(λ)|² from the infinite product, converged to ~1e−14 relative.
double h_infty_modulus2(const FilterBank& bank, double lambda);

struct DecayFit {
  double C = 0.0;
  double alpha = 0.0;
};
/// Power-law fit of the octave-band maxima of |ĥ∞| over [4π, 64π].
DecayFit fit_h_infty_decay(const FilterBank& bank);

struct MultivariateFilter {
  int ell = 1;
  int u = 0;
  int v = 0;
  long offset = 0;  // taps[i] = h_{ℓ,j}(offset + i)
  std::vector<double> taps;
};

/// h_{ℓ,j}(t) = g_{j−u}(t + 2^{j−u} v), ℓ = 2^u + v, for ℓ = 1..2^p − 1.
/// g_0 is the unit impulse.
std::vector<MultivariateFilter> multiscale_to_multivariate(const FilterBank& bank, int j, int p);

nlohmann::json bank_to_json(const FilterBank& bank);
FilterBank bank_from_json(const nlohmann::json& j);
void write_coefficients_csv(const std::string& path, const CoefficientTable& table);

}  // namespace hermscal

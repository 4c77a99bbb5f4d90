#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <vector>

#include <nlohmann/json.hpp>

#include "hermscal/spectral_model.hpp"
#include "hermscal/wavelet_bank.hpp"

namespace hermscal {

/// |g(s)|² for an even gain g, with what the L_p quadrature needs to know.
struct GainFunction {
  std::function<double(double)> modulus2;
  // |g| vanishes beyond this point.
  double support = std::numeric_limits<double>::infinity();
  // |g(s)| ≍ |s|^{−alpha} as s → ∞ (used for the tail correction).
  double alpha = 0.0;
  // Positive abscissae where g is not smooth.
  std::vector<double> breakpoints;
};

GainFunction h_infty_gain(const FilterBank& bank);

struct LpOptions {
  double lambda_max = 64.0 * std::numbers::pi;
  double panel = std::numbers::pi / 2.0;
  double tolerance = 1e-4;  // relative quadrature residual
};

struct LpResult {
  double value = 0.0;
  double gamma_factor = 1.0;  // Γ_p
  double radial = 0.0;        // ∫ |g(s)|² |s|^{p−1−2pd−2K} ds
  double residual = 0.0;      // relative quadrature error estimate
  double tail_fraction = 0.0; // share of the radial integral from the tail correction
};

/// Γ_p = Π_{i=2}^{p} ∫ |t|^{p−i−2d(p−i+1)} |1−t|^{−2d} dt.
double gamma_factor(int p, double d);

/// L_p(g) = ∫_{R^p} |g(Σu)|² |Σu|^{−2K} Π|u_i|^{−2d} du via the radial reduction.
LpResult compute_L_p(const GainFunction& g, int p, double d, int K, const LpOptions& opts = {});
LpResult compute_L_p(const FilterBank& bank, int p, double d, int K, const LpOptions& opts = {});

struct GaussianVariance {
  double value = 0.0;
  double remainder_bound = 0.0;  // relative bound on the p-truncation error
  int p_trunc = 0;
};

/// Γ_{1,1}, the limit variance of n_j^{1/2} 2^{−2j(d+K)} (σ̂²_j − σ²_j) for q0 = 1:
/// 4π f*(0)² ∫_{−π}^{π} A(λ)² dλ, A(λ) = Σ_{|p|≤P} |λ+2pπ|^{−2(K+d)} |ĥ∞(λ+2pπ)|².
GaussianVariance gaussian_limit_variance(const FilterBank& bank, double fstar0, double d, int K,
                                         int p_trunc = 8);

struct LimitConstants {
  int q0 = 1;
  int K = 0;
  double d = 0.0;
  double delta = 0.0;
  double fstar0 = 0.0;
  std::map<int, double> L;  // p ↦ L_p(ĥ∞), p ∈ {q0−1, q0}
  double gamma11 = std::numeric_limits<double>::quiet_NaN();
};

LimitConstants compute_limit_constants(const SpectralModel& model, const FilterBank& bank, int q0,
                                       int K, const LpOptions& opts = {});

/// q0! f*(0)^{q0} L_{q0} 2^{2j(δ(q0)+K)}.
double predicted_spectrum(const LimitConstants& c, int j);

/// 2^{(2d−1)u} L_{q0−1} / (q0! L_{q0}) for each u.
std::vector<double> limit_scale_profile(const LimitConstants& c, const std::vector<int>& u_range);

/// {"L": {"p": v}, "Gamma11": v, "profile": [...]}
nlohmann::json constants_to_json(const LimitConstants& c, const std::vector<int>& u_range = {0, 1, 2, 3});

/// D_n(u) = n^{−1} Σ_{k<n} e^{iku}.
std::complex<double> dirichlet_kernel(long n, double u);

/// Representative of x in (−π, π].
double wrap_angle(double x);

struct DirichletBoundRow {
  long n = 0;
  double sup = 0.0;
  double theta_at_sup = 0.0;
};

struct DirichletBoundReport {
  double bound = std::numbers::pi + 0.01;
  std::vector<DirichletBoundRow> rows;
  bool pass = true;
};

/// Supremum of (1 + |n{θ/n}|)|D_n(θ/n)| over θ ∈ [−10πn, 10πn] on a grid of
/// step π/points_per_pi.
DirichletBoundReport dirichlet_bound_check(const std::vector<long>& n_set, int points_per_pi = 512);

}  // namespace hermscal

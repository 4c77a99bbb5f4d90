#pragma once

#include <cstddef>
#include <limits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace hermscal {

/// Short-range factor f*(λ) of the Gaussian spectral density.
///
/// Either a positive constant or a table of (λ, value) nodes that is linearly
/// interpolated. Tables may cover [0, π] (mirrored) or [−π, π]; evaluation is
/// always symmetrized as (f*(λ) + f*(−λ)) / 2.
class ShortRangeFactor {
 public:
  struct Constant {
    double value = 1.0;
  };
  struct Table {
    std::vector<double> lambda;
    std::vector<double> value;
  };

  ShortRangeFactor() : repr_(Constant{}) {}
  static ShortRangeFactor constant(double value);
  static ShortRangeFactor table(std::vector<double> lambda, std::vector<double> value);

  double operator()(double lambda) const;
  bool is_constant() const { return std::holds_alternative<Constant>(repr_); }
  const std::variant<Constant, Table>& repr() const { return repr_; }

 private:
  explicit ShortRangeFactor(std::variant<Constant, Table> r) : repr_(std::move(r)) {}
  double interpolate(double lambda) const;
  std::variant<Constant, Table> repr_;
};

/// Gaussian input law: f(λ) = |1 − e^{−iλ}|^{−2d} · c · f*(λ).
///
/// `c` is 1 unless the model is variance normalized, in which case it is
/// chosen so that ∫_{−π}^{π} f = 1 (unit-variance X).
class SpectralModel {
 public:
  SpectralModel(double d, ShortRangeFactor fstar, bool normalized);

  /// FARIMA(0,d,0)-shaped model with unit variance.
  static SpectralModel farima(double d) { return {d, ShortRangeFactor::constant(1.0), true}; }

  double d() const { return d_; }
  bool normalized() const { return normalized_; }
  const ShortRangeFactor& raw_fstar() const { return fstar_; }
  double scale() const { return scale_; }

  /// Effective short-range factor c·f*(λ), including normalization.
  double fstar(double lambda) const { return scale_ * fstar_(lambda); }
  double fstar_at_zero() const { return fstar(0.0); }

  friend void to_json(nlohmann::json& j, const SpectralModel& m);
  static SpectralModel from_json(const nlohmann::json& j);

 private:
  double d_;
  ShortRangeFactor fstar_;
  bool normalized_;
  double scale_ = 1.0;
};

struct MemoryExponents {
  int q0;
  int K;
  double d;
  double delta;       // q0·d − (q0−1)/2
  double delta_plus;  // max(delta, 0)
  double d0;          // delta + K
  bool long_memory;   // q0 < 1/(1−2d)
};

/// δ(q) = q·d − (q−1)/2, the memory exponent of H_q(X).
double delta(int q, double d);
bool is_long_memory(int q0, double d);
MemoryExponents memory_exponents(int q0, double d, int K);

/// f(λ) for λ ∈ (−π, π]; +∞ at λ = 0.
double spectral_density(const SpectralModel& model, double lambda);

/// ∫_{−π}^{π} f(λ) dλ for the model before any normalization.
double unnormalized_variance(double d, const ShortRangeFactor& fstar);

struct AutocovarianceOptions {
  // Minimum grid refinement relative to max_lag for the tabulated part.
  std::size_t grid_factor = 64;
  std::size_t max_grid = std::size_t{1} << 24;
  double tolerance = 1e-6;
};

/// γ(k) = ∫ e^{ikλ} f(λ) dλ for k = 0..max_lag.
///
/// The pole is handled by splitting f = c·f*(0)·F + c·F·(f* − f*(0)) with
/// F(λ) = |1 − e^{−iλ}|^{−2d}. The Fourier coefficients of F are exact
/// (FARIMA(0,d,0) recursion); the bounded remainder goes through an
/// open-grid midpoint rule evaluated with a DCT, checked against a doubled
/// grid.
std::vector<double> autocovariance(const SpectralModel& model, std::size_t max_lag,
                                   const AutocovarianceOptions& opts = {});

/// Exact Fourier coefficients ∫ e^{ikλ}|1 − e^{−iλ}|^{−2d} dλ, k = 0..max_lag.
std::vector<double> farima_kernel_coefficients(double d, std::size_t max_lag);

}  // namespace hermscal

#include "hermscal/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "hermscal/error.hpp"

namespace hermscal {
namespace {

constexpr double kPi = std::numbers::pi;

void require_d(double d) {
  if (!(d > 0.0 && d < 0.5))
    throw DomainError("memory parameter d must lie in (0, 1/2), got " + std::to_string(d));
}

// |1 − e^{−iλ}|^{−2d}
double farima_kernel(double d, double lambda) {
  return std::pow(2.0 * std::abs(std::sin(0.5 * lambda)), -2.0 * d);
}

// Midpoint-rule cosine coefficients of F·(f* − f*(0)) on an open grid of
// `grid` cells over (0, π); returns lags 0..max_lag.
std::vector<double> remainder_on_grid(double d, const ShortRangeFactor& fstar,
                                      std::size_t max_lag, std::size_t grid) {
  const double h = kPi / static_cast<double>(grid);
  const double f0 = fstar(0.0);
  std::vector<double> x(grid), y(grid);
  for (std::size_t m = 0; m < grid; ++m) {
    const double lam = (static_cast<double>(m) + 0.5) * h;
    x[m] = farima_kernel(d, lam) * (fstar(lam) - f0);
  }
  detail::dct2(x, y);
  std::vector<double> out(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) out[k] = h * y[k];
  return out;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Fourier coefficients of the bounded remainder, 0 for constant f*.
std::vector<double> remainder_coefficients(double d, const ShortRangeFactor& fstar,
                                           std::size_t max_lag,
                                           const AutocovarianceOptions& opts,
                                           double reference) {
  if (fstar.is_constant()) return std::vector<double>(max_lag + 1, 0.0);
  std::size_t grid = next_pow2(std::max<std::size_t>(opts.grid_factor * std::max<std::size_t>(max_lag, 1), 4096));
  grid = std::min(grid, opts.max_grid);
  if (grid < 2 * (max_lag + 1))
    throw NumericalError("autocovariance: grid cap too small for requested lag range");
  // The symmetrized f* has a kink at 0, so the midpoint error leads with
  // h^{2−2d}; extrapolate that term away and compare successive estimates.
  const double gain = std::pow(2.0, 2.0 - 2.0 * d) - 1.0;
  auto extrapolate = [&](const std::vector<double>& fine, const std::vector<double>& coarse) {
    std::vector<double> r(fine.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = fine[k] + (fine[k] - coarse[k]) / gain;
    return r;
  };
  auto coarse = remainder_on_grid(d, fstar, max_lag, grid / 2);
  auto fine = remainder_on_grid(d, fstar, max_lag, grid);
  auto prev = extrapolate(fine, coarse);
  while (true) {
    if (grid * 2 > opts.max_grid)
      throw NumericalError("autocovariance: grid cap reached before convergence");
    grid *= 2;
    coarse = std::move(fine);
    fine = remainder_on_grid(d, fstar, max_lag, grid);
    auto cur = extrapolate(fine, coarse);
    double worst = 0.0;
    for (std::size_t k = 0; k <= max_lag; ++k) worst = std::max(worst, std::abs(cur[k] - prev[k]));
    const double rel = worst / std::abs(reference);
    if (rel <= opts.tolerance) return cur;
    if (grid * 2 > opts.max_grid)
      throw ConvergenceError("autocovariance: grid refinement changed γ by " + std::to_string(rel) +
                                 " (relative), grid=" + std::to_string(grid),
                             rel);
    prev = std::move(cur);
  }
}

}  // namespace

ShortRangeFactor ShortRangeFactor::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw DomainError("constant short-range factor must be positive and finite");
  return ShortRangeFactor(Constant{value});
}

ShortRangeFactor ShortRangeFactor::table(std::vector<double> lambda, std::vector<double> value) {
  if (lambda.size() != value.size() || lambda.size() < 2)
    throw DomainError("short-range table needs ≥ 2 nodes and matching lengths");
  for (std::size_t i = 1; i < lambda.size(); ++i)
    if (!(lambda[i] > lambda[i - 1])) throw DomainError("short-range table nodes must increase");
  for (double v : value)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw DomainError("short-range table values must be finite and non-negative");
  const double eps = 1e-9;
  if (lambda.front() >= -eps) {
    if (lambda.front() > eps) throw DomainError("short-range table must start at 0 or at -pi");
  } else if (lambda.front() > -kPi + eps) {
    throw DomainError("two-sided short-range table must start at -pi");
  }
  if (lambda.back() < kPi - eps) throw DomainError("short-range table must extend to pi");
  ShortRangeFactor f(Table{std::move(lambda), std::move(value)});
  if (!(f(0.0) > 0.0)) throw DomainError("short-range factor must be positive at 0");
  return f;
}

double ShortRangeFactor::interpolate(double lambda) const {
  const auto& t = std::get<Table>(repr_);
  if (t.lambda.front() >= -1e-9) lambda = std::abs(lambda);
  if (lambda <= t.lambda.front()) return t.value.front();
  if (lambda >= t.lambda.back()) return t.value.back();
  auto it = std::upper_bound(t.lambda.begin(), t.lambda.end(), lambda);
  const std::size_t i = static_cast<std::size_t>(it - t.lambda.begin());
  const double w = (lambda - t.lambda[i - 1]) / (t.lambda[i] - t.lambda[i - 1]);
  return (1.0 - w) * t.value[i - 1] + w * t.value[i];
}

double ShortRangeFactor::operator()(double lambda) const {
  if (const auto* c = std::get_if<Constant>(&repr_)) return c->value;
  return 0.5 * (interpolate(lambda) + interpolate(-lambda));
}

SpectralModel::SpectralModel(double d, ShortRangeFactor fstar, bool normalized)
    : d_(d), fstar_(std::move(fstar)), normalized_(normalized) {
  require_d(d);
  if (normalized_) scale_ = 1.0 / unnormalized_variance(d_, fstar_);
}

void to_json(nlohmann::json& j, const SpectralModel& m) {
  nlohmann::json fs;
  if (const auto* c = std::get_if<ShortRangeFactor::Constant>(&m.fstar_.repr())) {
    fs = {{"kind", "constant"}, {"value", c->value}};
  } else {
    const auto& t = std::get<ShortRangeFactor::Table>(m.fstar_.repr());
    fs = {{"kind", "table"}, {"lambda", t.lambda}, {"value", t.value}};
  }
  j = {{"d", m.d_}, {"fstar", fs}, {"normalized", m.normalized_}};
}

SpectralModel SpectralModel::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d")) throw SpecError("/d", "missing memory parameter");
  if (!j.at("d").is_number()) throw SpecError("/d", "must be a number");
  const double d = j.at("d").get<double>();
  ShortRangeFactor fs = ShortRangeFactor::constant(1.0);
  if (j.contains("fstar")) {
    const auto& f = j.at("fstar");
    const std::string kind = f.value("kind", "constant");
    if (kind == "constant") {
      fs = ShortRangeFactor::constant(f.value("value", 1.0));
    } else if (kind == "table") {
      if (!f.contains("lambda") || !f.contains("value"))
        throw SpecError("/fstar", "table needs 'lambda' and 'value' arrays");
      fs = ShortRangeFactor::table(f.at("lambda").get<std::vector<double>>(),
                                   f.at("value").get<std::vector<double>>());
    } else {
      throw SpecError("/fstar/kind", "unknown kind '" + kind + "'");
    }
  }
  return SpectralModel(d, std::move(fs), j.value("normalized", true));
}

double delta(int q, double d) {
  if (q < 1) throw DomainError("Hermite rank q must be ≥ 1");
  require_d(d);
  return q * d - 0.5 * (q - 1);
}

bool is_long_memory(int q0, double d) {
  const double dq = delta(q0, d);
  return dq > 0.0 && dq < 0.5;
}

MemoryExponents memory_exponents(int q0, double d, int K) {
  if (K < 0) throw DomainError("integration order K must be ≥ 0");
  const double dq = delta(q0, d);
  return {q0, K, d, dq, std::max(dq, 0.0), dq + K, is_long_memory(q0, d)};
}

double spectral_density(const SpectralModel& model, double lambda) {
  if (!(lambda > -kPi && lambda <= kPi))
    throw DomainError("spectral_density: λ must lie in (-pi, pi]");
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  return farima_kernel(model.d(), lambda) * model.fstar(lambda);
}

std::vector<double> farima_kernel_coefficients(double d, std::size_t max_lag) {
  require_d(d);
  std::vector<double> c(max_lag + 1);
  c[0] = 2.0 * kPi * std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
  for (std::size_t k = 0; k < max_lag; ++k) {
    const double kk = static_cast<double>(k);
    c[k + 1] = c[k] * (kk + d) / (kk + 1.0 - d);
  }
  return c;
}

double unnormalized_variance(double d, const ShortRangeFactor& fstar) {
  const double base = fstar(0.0) * farima_kernel_coefficients(d, 0)[0];
  return base + remainder_coefficients(d, fstar, 0, {}, base)[0];
}

std::vector<double> autocovariance(const SpectralModel& model, std::size_t max_lag,
                                   const AutocovarianceOptions& opts) {
  auto gamma = farima_kernel_coefficients(model.d(), max_lag);
  const double f0 = model.raw_fstar()(0.0);
  const auto rem = remainder_coefficients(model.d(), model.raw_fstar(), max_lag, opts,
                                          f0 * gamma[0]);
  for (std::size_t k = 0; k <= max_lag; ++k)
    gamma[k] = model.scale() * (f0 * gamma[k] + rem[k]);
  return gamma;
}

}  // namespace hermscal

#include "hermscal/rosenblatt.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

#include "hermscal/error.hpp"
#include "hermscal/gaussian_synth.hpp"
#include "hermscal/random.hpp"
#include "hermscal/stats.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace hermscal {
namespace {

constexpr double kPi = std::numbers::pi;

struct Grid {
  std::vector<double> center;
  std::vector<double> weight;  // sqrt(width/2) · sqrt(cell mean of |u|^{−2d})
};

Grid make_grid(double d, double eps, double ratio, double step, double extent) {
  if (!(eps > 0 && eps < 1 && ratio > 1 && step > 0 && extent > 1))
    throw DomainError("spectral grid: need 0 < eps < 1 < extent, ratio > 1, step > 0");
  std::vector<double> edges{0.0, eps};
  while (edges.back() * ratio < 1.0) edges.push_back(edges.back() * ratio);
  edges.push_back(1.0);
  const auto n_uniform = static_cast<long>(std::floor((extent - 1.0) / step + 1e-9));
  for (long i = 1; i <= n_uniform; ++i) edges.push_back(1.0 + step * static_cast<double>(i));

  Grid g;
  const double e = 1.0 - 2.0 * d;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1], w = hi - lo;
    const double cell_mean = (std::pow(hi, e) - std::pow(lo, e)) / (e * w);
    g.center.push_back(0.5 * (lo + hi));
    g.weight.push_back(std::sqrt(w / 2.0) * std::sqrt(cell_mean));
  }
  return g;
}

std::complex<double> kernel(double x) {
  if (std::abs(x) < 1e-8) return {1.0 - x * x / 6.0, x / 2.0};
  return (std::polar(1.0, x) - 1.0) / std::complex<double>(0.0, x);
}

// Real symmetric 2M×2M form in (ξ_1..ξ_M, η_1..η_M). The diagonal cells
// stay in: on a cell A×(−A) the double integral is the Wick product
// |W(A)|² − |A|, and the −1 in Σ μ(ζ²−1) supplies that centering. Dropping
// them loses the whole first cell, where |u|^{−2d} is barely integrable.
Eigen::MatrixXd quadratic_form(const Grid& g) {
  const auto M = static_cast<Eigen::Index>(g.center.size());
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * M, 2 * M);
  for (Eigen::Index m = 0; m < M; ++m)
    for (Eigen::Index n = 0; n < M; ++n) {
      const double f = 2.0 * g.weight[m] * g.weight[n];
      const auto A = f * kernel(g.center[m] + g.center[n]);
      const auto B = f * kernel(g.center[m] - g.center[n]);
      Q(m, n) = A.real() + B.real();
      Q(M + m, M + n) = B.real() - A.real();
      Q(m, M + n) = B.imag() - A.imag();
      Q(M + m, n) = -A.imag() - B.imag();
    }
  return Q;
}

double frobenius_variance(const Grid& g) {
  const std::size_t M = g.center.size();
  double s = 0;
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t n = 0; n < M; ++n) {
      const double f = 2.0 * g.weight[m] * g.weight[n];
      const auto A = f * kernel(g.center[m] + g.center[n]);
      const auto B = f * kernel(g.center[m] - g.center[n]);
      const double a = A.real() + B.real(), b = B.real() - A.real(), c = B.imag() - A.imag(),
                   e = -A.imag() - B.imag();
      s += a * a + b * b + c * c + e * e;
    }
  return 2.0 * s;
}

void check_d(double d) {
  if (!(d > 0.25 && d < 0.5)) throw DomainError("Rosenblatt oracle requires 1/4 < d < 1/2");
}

}  // namespace

std::string to_string(RosenblattMethod m) {
  return m == RosenblattMethod::PartialSum ? "partial_sum" : "spectral_grid";
}

RosenblattMethod rosenblatt_method_from_string(const std::string& s) {
  if (s == "partial_sum") return RosenblattMethod::PartialSum;
  if (s == "spectral_grid") return RosenblattMethod::SpectralGrid;
  throw DomainError("unknown Rosenblatt method '" + s + "'");
}

std::vector<double> RosenblattSamples::studentized() const { return stats::studentize(samples); }

double rosenblatt_spectral_variance(double d) {
  check_d(d);
  // ∫_R 4 sin²(s/2) |s|^{−1−4d} ds = −4 Γ(−4d) cos(2πd)
  const double radial = -4.0 * std::tgamma(-4.0 * d) * std::cos(2.0 * kPi * d);
  const double g2 = detail::power_pair_integral(-2.0 * d, -2.0 * d).value;
  return 2.0 * g2 * radial;
}

RosenblattSamples rosenblatt_oracle_sample(double d, RosenblattMethod method,
                                           std::size_t replicates, std::uint64_t seed,
                                           const RosenblattOptions& opts) {
  check_d(d);
  if (replicates < 1) throw DomainError("rosenblatt_oracle_sample: replicates must be ≥ 1");
  RosenblattSamples out;
  out.d = d;
  out.method = method;
  out.seed = seed;
  out.samples.resize(replicates);

  if (method == RosenblattMethod::PartialSum) {
    const std::size_t n = opts.n_internal;
    if (n < 16) throw DomainError("partial_sum: n_internal too small");
    const auto model = SpectralModel::farima(d);
    CirculantEmbedding emb(model, n);
    const auto& gam = emb.autocovariance();
    // exact finite-n variance 2 n^{−4d} Σ_{s,t} γ(s−t)² and its limit
    double S = static_cast<double>(n) * gam[0] * gam[0];
    for (std::size_t k = 1; k < n; ++k)
      S += 2.0 * static_cast<double>(n - k) * gam[k] * gam[k];
    const double scale = std::pow(static_cast<double>(n), -2.0 * d);
    out.captured_variance = 2.0 * scale * scale * S;
    const double C = gam[0] * std::tgamma(1.0 - d) / std::tgamma(d);
    out.target_variance = 4.0 * C * C / ((4.0 * d - 1.0) * 4.0 * d);
    out.size_parameter = n;

    detail::parallel_for(replicates, opts.workers, [&](std::size_t r) {
      KeyedStream rng(seed, r, StreamId::RosenblattPartialSum);
      const auto x = emb.sample(rng);
      double s = 0;
      for (double v : x) s += v * v - 1.0;
      out.samples[r] = scale * s;
    });
  } else {
    const Grid g = make_grid(d, opts.grid_eps, opts.grid_ratio, opts.grid_step, opts.grid_extent);
    out.size_parameter = g.center.size();
    const Eigen::MatrixXd Q = quadratic_form(g);
    out.captured_variance = 2.0 * Q.squaredNorm();
    out.target_variance = rosenblatt_spectral_variance(d);
    if (opts.check_convergence) {
      const Grid fine = make_grid(d, opts.grid_eps / 2, std::sqrt(opts.grid_ratio),
                                  opts.grid_step / 2, opts.grid_extent);
      out.refined_variance = frobenius_variance(fine);
      const double change =
          std::abs(out.refined_variance - out.captured_variance) / out.refined_variance;
      if (change > opts.convergence_tolerance)
        throw ConvergenceError("spectral_grid: variance moved by " + std::to_string(change) +
                                   " under grid refinement; grid too coarse",
                               change);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("spectral_grid: eigen-solve failed");
    const Eigen::VectorXd mu = es.eigenvalues();
    const double v = std::max(out.target_variance, out.captured_variance);
    out.skewness = 8.0 * mu.array().cube().sum() / std::pow(opts.compensate ? v : out.captured_variance, 1.5);
    detail::parallel_for(replicates, opts.workers, [&](std::size_t r) {
      KeyedStream rng(seed, r, StreamId::RosenblattSpectral);
      double s = 0;
      for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double z = rng.normal();
        s += mu[i] * (z * z - 1.0);
      }
      out.samples[r] = s;
    });
  }

  if (opts.compensate) {
    const double missing = out.target_variance - out.captured_variance;
    if (missing > 0) {
      const double sd = std::sqrt(missing);
      for (std::size_t r = 0; r < replicates; ++r) {
        KeyedStream rng(seed, r,
                        method == RosenblattMethod::PartialSum ? StreamId::Compensation
                                                               : StreamId::CompensationSpectral);
        out.samples[r] += sd * rng.normal();
      }
    }
  }
  return out;
}

}  // namespace hermscal

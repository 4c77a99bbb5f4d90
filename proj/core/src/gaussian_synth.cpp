#include "hermscal/gaussian_synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "fft.hpp"
#include "hermscal/error.hpp"

namespace hermscal {

CirculantEmbedding::CirculantEmbedding(const SpectralModel& model, std::size_t N, Options opts)
    : n_(N) {
  if (N < 2) throw DomainError("sample_gaussian: N must be ≥ 2");
  m_ = 2;
  while (m_ < 2 * (N - 1)) m_ <<= 1;
  const std::size_t half = m_ / 2;
  auto gamma = hermscal::autocovariance(model, half);

  std::vector<double> eig(half + 1);
  detail::dct1(gamma, eig);
  gamma.resize(N);
  gamma_ = std::move(gamma);

  max_eig_ = *std::max_element(eig.begin(), eig.end());
  min_eig_ = *std::min_element(eig.begin(), eig.end());
  if (min_eig_ < -opts.clip_tolerance * max_eig_)
    throw EmbeddingError("circulant embedding is not non-negative definite: min eigenvalue " +
                             std::to_string(min_eig_) + ", max " + std::to_string(max_eig_),
                         min_eig_);
  amplitude_.resize(half + 1);
  const double inv_m = 1.0 / static_cast<double>(m_);
  for (std::size_t k = 0; k <= half; ++k) {
    if (eig[k] < 0.0) {
      eig[k] = 0.0;
      ++clipped_;
    }
    amplitude_[k] = std::sqrt(eig[k] * inv_m);
  }
}

std::vector<double> CirculantEmbedding::sample(KeyedStream& rng) const {
  std::vector<std::complex<double>> z(m_);
  const std::size_t half = m_ / 2;
  for (std::size_t k = 0; k < m_; ++k) {
    const double a = amplitude_[k <= half ? k : m_ - k];
    const double re = rng.normal();
    const double im = rng.normal();
    z[k] = {a * re, a * im};
  }
  detail::fft_forward(z);
  std::vector<double> x(n_);
  for (std::size_t t = 0; t < n_; ++t) x[t] = z[t].real();
  return x;
}

GaussianPath sample_gaussian(const SpectralModel& model, std::size_t N, std::uint64_t seed,
                             std::uint64_t replicate) {
  CirculantEmbedding emb(model, N);
  KeyedStream rng(seed, replicate, StreamId::Gaussian);
  return {emb.sample(rng), model.d(), seed, replicate};
}

double hermite_eval(int q, double x) {
  if (q < 0) throw DomainError("hermite_eval: q must be ≥ 0");
  if (q == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < q; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> hermite_transform(std::span<const double> x, int q0) {
  if (q0 < 1) throw DomainError("hermite_transform: q0 must be ≥ 1");
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [q0](double v) { return hermite_eval(q0, v); });
  return out;
}

std::vector<double> integrate_K(std::span<const double> s, int K) {
  if (K < 0) throw DomainError("integrate_K: K must be ≥ 0");
  std::vector<double> y(s.begin(), s.end());
  for (int r = 0; r < K; ++r)
    for (std::size_t t = 1; t < y.size(); ++t) y[t] += y[t - 1];
  return y;
}

std::vector<double> difference_K(std::span<const double> y, int K) {
  if (K < 0) throw DomainError("difference_K: K must be ≥ 0");
  std::vector<double> v(y.begin(), y.end());
  for (int r = 0; r < K; ++r) {
    if (v.size() < 2) return {};
    for (std::size_t t = v.size() - 1; t >= 1; --t) v[t] -= v[t - 1];
    v.erase(v.begin());
  }
  return v;
}

namespace {
void check_config(const ProcessConfig& c) {
  if (c.q0 < 1) throw DomainError("ProcessConfig: q0 must be ≥ 1");
  if (c.K < 0) throw DomainError("ProcessConfig: K must be ≥ 0");
  if (!c.allow_short_memory && !is_long_memory(c.q0, c.model.d()))
    throw DomainError("ProcessConfig: H_q0(X) is not long-range dependent (q0=" +
                      std::to_string(c.q0) + ", d=" + std::to_string(c.model.d()) + ")");
}
}  // namespace

Synthesizer::Synthesizer(ProcessConfig config)
    : config_((check_config(config), std::move(config))), embedding_(config_.model, config_.N) {}

GaussianPath Synthesizer::gaussian(std::uint64_t replicate) const {
  KeyedStream rng(config_.seed, replicate, StreamId::Gaussian);
  return {embedding_.sample(rng), config_.model.d(), config_.seed, replicate};
}

HermitePath Synthesizer::path(std::uint64_t replicate) const {
  auto x = gaussian(replicate);
  auto y = integrate_K(hermite_transform(x.samples, config_.q0), config_.K);
  return {std::move(y), config_.q0, config_.K, config_.seed, replicate};
}

HermitePath synthesize_Y(const ProcessConfig& config, std::uint64_t replicate) {
  return Synthesizer(config).path(replicate);
}

}  // namespace hermscal

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hermscal/random.hpp"
#include "hermscal/spectral_model.hpp"

namespace hermscal {

/// Everything needed to reproduce one synthetic path of Y = Δ^{−K} H_{q0}(X).
struct ProcessConfig {
  SpectralModel model = SpectralModel::farima(0.4);
  int q0 = 1;
  int K = 0;
  std::size_t N = 1024;
  std::uint64_t seed = 0;
  // Contrast experiments may deliberately use q0 ≥ 1/(1−2d).
  bool allow_short_memory = false;

  MemoryExponents exponents() const { return memory_exponents(q0, model.d(), K); }
};

struct GaussianPath {
  std::vector<double> samples;  // X_1..X_N
  double d = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
};

struct HermitePath {
  std::vector<double> samples;  // Y_1..Y_N
  int q0 = 1;
  int K = 0;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
};

/// Davies–Harte style exact synthesis of a stationary Gaussian vector.
///
/// The Toeplitz covariance γ(0..N−1) is embedded in a circulant of size
/// m = next power of two ≥ 2(N−1); its eigenvalues come from one DCT-I.
/// Negative eigenvalues down to −clip_tolerance·max are clipped to 0, more
/// negative ones raise EmbeddingError.
class CirculantEmbedding {
 public:
  struct Options {
    double clip_tolerance = 1e-8;
  };

  CirculantEmbedding(const SpectralModel& model, std::size_t N, Options opts);
  CirculantEmbedding(const SpectralModel& model, std::size_t N)
      : CirculantEmbedding(model, N, Options{}) {}

  std::size_t length() const { return n_; }
  std::size_t embedding_size() const { return m_; }
  double min_eigenvalue() const { return min_eig_; }
  double max_eigenvalue() const { return max_eig_; }
  std::size_t clipped() const { return clipped_; }
  const std::vector<double>& autocovariance() const { return gamma_; }

  std::vector<double> sample(KeyedStream& rng) const;

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<double> gamma_;
  std::vector<double> amplitude_;  // sqrt(λ_k / m), k = 0..m/2
  double min_eig_ = 0.0;
  double max_eig_ = 0.0;
  std::size_t clipped_ = 0;
};

GaussianPath sample_gaussian(const SpectralModel& model, std::size_t N, std::uint64_t seed,
                             std::uint64_t replicate = 0);

/// Probabilists' Hermite polynomial He_q(x) (leading coefficient 1).
double hermite_eval(int q, double x);
std::vector<double> hermite_transform(std::span<const double> x, int q0);

/// Applies the running sum K times with zero initial conditions.
std::vector<double> integrate_K(std::span<const double> s, int K);
/// (Δ^K y)_t for t = K..n−1 (length n − K).
std::vector<double> difference_K(std::span<const double> y, int K);

/// Reusable generator for many replicates of one ProcessConfig.
class Synthesizer {
 public:
  explicit Synthesizer(ProcessConfig config);

  const ProcessConfig& config() const { return config_; }
  const CirculantEmbedding& embedding() const { return embedding_; }

  GaussianPath gaussian(std::uint64_t replicate) const;
  HermitePath path(std::uint64_t replicate) const;

 private:
  ProcessConfig config_;
  CirculantEmbedding embedding_;
};

HermitePath synthesize_Y(const ProcessConfig& config, std::uint64_t replicate = 0);

// CSV (single column "value") and HSC1 binary block.
void write_path_csv(const std::string& path, std::span<const double> values);
void write_path_binary(const std::string& path, std::span<const double> values);
std::vector<double> read_path_binary(const std::string& path);

}  // namespace hermscal

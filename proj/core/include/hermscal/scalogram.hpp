#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hermscal/gaussian_synth.hpp"
#include "hermscal/wavelet_bank.hpp"

namespace hermscal {

struct CoefficientCount {
  long n = 0;
  bool available = false;
};

/// n_j = ⌊2^{−j}(N − T + 1) − T + 1⌋; non-positive counts come back as 0 with
/// available = false.
CoefficientCount n_coeffs(std::size_t N, std::size_t T, int j);

struct ScaleEnergy {
  int j = 0;
  long n_j = 0;
  double sigma2_hat = 0.0;
};

struct ScalogramTable {
  std::size_t N = 0;
  std::size_t T = 0;
  std::string family;
  std::uint64_t replicate = 0;
  std::vector<ScaleEnergy> rows;  // contiguous, increasing j

  const ScaleEnergy& at(int j) const;
  double sigma2(int j) const { return at(j).sigma2_hat; }
  int j_min() const { return rows.empty() ? 0 : rows.front().j; }
  int j_max() const { return rows.empty() ? -1 : rows.back().j; }
};

/// σ̂²_j = n_j^{−1} Σ_{k<n_j} W²_{j,k} for every scale of the table.
ScalogramTable scalogram(const CoefficientTable& coeffs);

enum class ReferenceMode { ReplicateMean, Supplied };

struct FluctuationMatrix {
  std::vector<int> scales;
  std::vector<double> reference;            // σ²_j per scale
  std::vector<std::vector<double>> values;  // [replicate][scale] σ̂²/σ² − 1
  std::vector<std::uint64_t> replicates;

  std::vector<double> column(int j) const;
};

FluctuationMatrix centered_fluctuations(std::span<const ScalogramTable> tables,
                                        const std::vector<int>& scales,
                                        ReferenceMode mode = ReferenceMode::ReplicateMean,
                                        const std::vector<double>& supplied = {});

struct SpectrumEstimate {
  std::vector<int> scales;
  std::vector<double> mean;
  std::vector<double> se;
  std::vector<ScalogramTable> tables;
};

/// Monte Carlo wavelet spectrum: replicate mean and standard error of σ̂²_j.
SpectrumEstimate wavelet_spectrum_mc(const ProcessConfig& config, const FilterBank& bank,
                                     const std::vector<int>& scales, std::size_t replicates,
                                     unsigned workers = 1);
/// Same, with explicit replicate ids (repeats allowed).
SpectrumEstimate wavelet_spectrum_mc(const ProcessConfig& config, const FilterBank& bank,
                                     const std::vector<int>& scales,
                                     const std::vector<std::uint64_t>& replicate_ids,
                                     unsigned workers = 1);

SpectrumEstimate summarize_spectrum(std::vector<ScalogramTable> tables,
                                    const std::vector<int>& scales);

/// replicate,j,n_j,sigma2_hat,sigma2_ref,fluctuation
void write_scalogram_csv(const std::string& path, std::span<const ScalogramTable> tables,
                         const FluctuationMatrix& fluct);

}  // namespace hermscal

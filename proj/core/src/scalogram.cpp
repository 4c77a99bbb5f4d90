#include "hermscal/scalogram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>

#include "hermscal/error.hpp"
#include "parallel.hpp"

namespace hermscal {

CoefficientCount n_coeffs(std::size_t N, std::size_t T, int j) {
  if (N < 1 || T < 1 || j < 0) throw DomainError("n_coeffs: need N ≥ 1, T ≥ 1, j ≥ 0");
  const long num = static_cast<long>(N) - static_cast<long>(T) + 1;
  const long den = 1L << j;
  const long q = num >= 0 ? num / den : -((-num + den - 1) / den);
  const long n = q - (static_cast<long>(T) - 1);
  if (n <= 0) return {0, false};
  return {n, true};
}

const ScaleEnergy& ScalogramTable::at(int j) const {
  if (rows.empty() || j < j_min() || j > j_max())
    throw ScaleUnavailable("scalogram has no scale " + std::to_string(j));
  return rows[static_cast<std::size_t>(j - j_min())];
}

ScalogramTable scalogram(const CoefficientTable& coeffs) {
  ScalogramTable t;
  t.N = coeffs.N;
  t.T = coeffs.T;
  t.family = coeffs.family;
  for (const auto& s : coeffs.scales) {
    if (s.values.empty()) throw ScaleUnavailable("empty scale " + std::to_string(s.j));
    double acc = 0;
    for (double w : s.values) acc += w * w;
    t.rows.push_back({s.j, static_cast<long>(s.values.size()),
                      acc / static_cast<double>(s.values.size())});
  }
  return t;
}

std::vector<double> FluctuationMatrix::column(int j) const {
  auto it = std::find(scales.begin(), scales.end(), j);
  if (it == scales.end()) throw ScaleUnavailable("fluctuations have no scale " + std::to_string(j));
  const auto c = static_cast<std::size_t>(it - scales.begin());
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& row : values) out.push_back(row[c]);
  return out;
}

FluctuationMatrix centered_fluctuations(std::span<const ScalogramTable> tables,
                                        const std::vector<int>& scales, ReferenceMode mode,
                                        const std::vector<double>& supplied) {
  FluctuationMatrix f;
  f.scales = scales;
  if (mode == ReferenceMode::Supplied) {
    if (supplied.size() != scales.size())
      throw DomainError("centered_fluctuations: one reference per scale required");
    f.reference = supplied;
  } else {
    if (tables.empty()) throw DomainError("centered_fluctuations: no replicates");
    for (int j : scales) {
      double acc = 0;
      for (const auto& t : tables) acc += t.sigma2(j);
      f.reference.push_back(acc / static_cast<double>(tables.size()));
    }
  }
  for (double r : f.reference)
    if (!(r > 0.0)) throw DomainError("centered_fluctuations: degenerate reference σ²_j = 0");
  for (const auto& t : tables) {
    std::vector<double> row;
    for (std::size_t s = 0; s < scales.size(); ++s)
      row.push_back(t.sigma2(scales[s]) / f.reference[s] - 1.0);
    f.values.push_back(std::move(row));
    f.replicates.push_back(t.replicate);
  }
  return f;
}

SpectrumEstimate summarize_spectrum(std::vector<ScalogramTable> tables,
                                    const std::vector<int>& scales) {
  SpectrumEstimate e;
  e.scales = scales;
  const double R = static_cast<double>(tables.size());
  for (int j : scales) {
    double m = 0;
    for (const auto& t : tables) m += t.sigma2(j);
    m /= R;
    double ss = 0;
    for (const auto& t : tables) ss += (t.sigma2(j) - m) * (t.sigma2(j) - m);
    e.mean.push_back(m);
    e.se.push_back(R > 1 ? std::sqrt(ss / (R - 1) / R) : 0.0);
  }
  e.tables = std::move(tables);
  return e;
}

SpectrumEstimate wavelet_spectrum_mc(const ProcessConfig& config, const FilterBank& bank,
                                     const std::vector<int>& scales,
                                     const std::vector<std::uint64_t>& replicate_ids,
                                     unsigned workers) {
  if (replicate_ids.size() < 2) throw DomainError("wavelet_spectrum_mc: need ≥ 2 replicates");
  if (scales.empty()) throw DomainError("wavelet_spectrum_mc: no scales");
  const int jmax = *std::max_element(scales.begin(), scales.end());
  Synthesizer synth(config);
  std::vector<ScalogramTable> tables(replicate_ids.size());
  detail::parallel_for(replicate_ids.size(), workers, [&](std::size_t i) {
    auto path = synth.path(replicate_ids[i]);
    tables[i] = scalogram(dwt_details(path.samples, bank, jmax));
    tables[i].replicate = replicate_ids[i];
  });
  return summarize_spectrum(std::move(tables), scales);
}

SpectrumEstimate wavelet_spectrum_mc(const ProcessConfig& config, const FilterBank& bank,
                                     const std::vector<int>& scales, std::size_t replicates,
                                     unsigned workers) {
  std::vector<std::uint64_t> ids(replicates);
  std::iota(ids.begin(), ids.end(), std::uint64_t{0});
  return wavelet_spectrum_mc(config, bank, scales, ids, workers);
}

void write_scalogram_csv(const std::string& path, std::span<const ScalogramTable> tables,
                         const FluctuationMatrix& fluct) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "replicate,j,n_j,sigma2_hat,sigma2_ref,fluctuation\n" << std::setprecision(17);
  for (std::size_t r = 0; r < tables.size(); ++r)
    for (std::size_t s = 0; s < fluct.scales.size(); ++s) {
      const auto& row = tables[r].at(fluct.scales[s]);
      out << tables[r].replicate << ',' << row.j << ',' << row.n_j << ',' << row.sigma2_hat << ','
          << fluct.reference[s] << ',' << fluct.values[r][s] << '\n';
    }
}

}  // namespace hermscal

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "hermscal/scalogram.hpp"
#include "hermscal/stats.hpp"

using namespace hermscal;

namespace {

std::vector<int> range(int a, int b) {
  std::vector<int> v(b - a + 1);
  std::iota(v.begin(), v.end(), a);
  return v;
}

double log2_slope(const SpectrumEstimate& e) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < e.scales.size(); ++i) {
    x.push_back(e.scales[i]);
    y.push_back(std::log2(e.mean[i]));
  }
  return stats::ols(x, y).slope;
}

}  // namespace

TEST(CoefficientCount, Examples) {
  EXPECT_EQ(n_coeffs(1024, 8, 3).n, 120);
  EXPECT_TRUE(n_coeffs(1024, 8, 3).available);
  EXPECT_EQ(n_coeffs(16, 2, 0).n, 14);
  const auto c = n_coeffs(64, 8, 3);
  EXPECT_EQ(c.n, 0);
  EXPECT_FALSE(c.available);
}

TEST(Scalogram, MeanOfSquares) {
  CoefficientTable t;
  t.N = 64;
  t.T = 2;
  t.scales = {{1, 1, {0, 0, 0}}, {2, 1, {1, -1, 1, -1}}};
  const auto s = scalogram(t);
  EXPECT_EQ(s.sigma2(1), 0.0);
  EXPECT_EQ(s.sigma2(2), 1.0);
  EXPECT_EQ(s.at(2).n_j, 4);
}

TEST(Fluctuations, ZeroWhenReferenceMatches) {
  ScalogramTable t;
  t.rows = {{1, 10, 2.0}, {2, 5, 3.0}};
  std::vector<ScalogramTable> tabs(3, t);
  const auto f = centered_fluctuations(tabs, {1, 2}, ReferenceMode::Supplied, {2.0, 3.0});
  for (const auto& row : f.values)
    for (double v : row) EXPECT_EQ(v, 0.0);
  const auto g = centered_fluctuations(tabs, {1, 2});
  for (double v : g.column(2)) EXPECT_EQ(v, 0.0);
}

TEST(SpectrumMc, RepeatedReplicateHasZeroSe) {
  ProcessConfig c{SpectralModel::farima(0.4), 1, 0, 1024, 5};
  const auto e = wavelet_spectrum_mc(c, make_filter_bank("haar", 4), {1, 2, 3}, {7, 7});
  for (double se : e.se) EXPECT_EQ(se, 0.0);
}

TEST(SpectrumMc, WorkerCountInvariant) {
  ProcessConfig c{SpectralModel::farima(0.4), 2, 0, 4096, 8};
  const auto bank = make_filter_bank("db2", 5);
  const auto a = wavelet_spectrum_mc(c, bank, range(1, 5), 12, 1);
  const auto b = wavelet_spectrum_mc(c, bank, range(1, 5), 12, 3);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.se, b.se);
}

TEST(SpectrumMc, GaussianSlope) {
  ProcessConfig c{SpectralModel::farima(0.4), 1, 0, 1 << 16, 21};
  const auto e = wavelet_spectrum_mc(c, make_filter_bank("haar", 8), range(4, 8), 100);
  for (std::size_t i = 1; i < e.mean.size(); ++i) EXPECT_GT(e.mean[i], e.mean[i - 1]);
  EXPECT_NEAR(log2_slope(e), 0.8, 0.15);
}

TEST(SpectrumMc, RosenblattRatioBetweenScales) {
  ProcessConfig c{SpectralModel::farima(0.4), 2, 0, 1 << 16, 22};
  const auto e = wavelet_spectrum_mc(c, make_filter_bank("haar", 8), range(4, 8), 100);
  const double expect = std::pow(2.0, 0.6);
  for (std::size_t i = 1; i < e.mean.size(); ++i)
    EXPECT_NEAR(e.mean[i] / e.mean[i - 1], expect, 0.1 * expect) << "j=" << e.scales[i];
}

TEST(SpectrumMc, IntegrationShiftsSlopeByTwo) {
  const auto bank = make_filter_bank("db2", 8);
  ProcessConfig c0{SpectralModel::farima(0.4), 1, 0, 1 << 16, 23};
  ProcessConfig c1 = c0;
  c1.K = 1;
  const double s0 = log2_slope(wavelet_spectrum_mc(c0, bank, range(4, 8), 100));
  const double s1 = log2_slope(wavelet_spectrum_mc(c1, bank, range(4, 8), 100));
  EXPECT_NEAR(s1 - s0, 2.0, 0.15);
}

TEST(SpectrumMc, CsvIsDeterministic) {
  ProcessConfig c{SpectralModel::farima(0.35), 2, 0, 2048, 4};
  const auto bank = make_filter_bank("haar", 4);
  const auto dir = std::filesystem::temp_directory_path();
  std::string text[2];
  for (int i = 0; i < 2; ++i) {
    const auto e = wavelet_spectrum_mc(c, bank, range(1, 4), 5, i + 1);
    const auto path = (dir / ("hermscal_scalo_" + std::to_string(i) + ".csv")).string();
    write_scalogram_csv(path, e.tables, centered_fluctuations(e.tables, range(1, 4)));
    std::ifstream in(path);
    text[i].assign(std::istreambuf_iterator<char>(in), {});
    std::filesystem::remove(path);
  }
  EXPECT_EQ(text[0], text[1]);
  EXPECT_EQ(text[0].substr(0, text[0].find('\n')),
            "replicate,j,n_j,sigma2_hat,sigma2_ref,fluctuation");
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hermscal/error.hpp"
#include "hermscal/wavelet_bank.hpp"
#include "oracles.hpp"

using namespace hermscal;

namespace {

std::vector<double> random_path(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<double> y(n);
  for (auto& v : y) v = z(rng);
  return y;
}

double moment(const std::vector<double>& g, int k) {
  double acc = 0, scale = 0;
  for (std::size_t t = 0; t < g.size(); ++t) {
    acc += g[t] * std::pow(double(t), k);
    scale += std::abs(g[t]) * std::pow(double(t), k);
  }
  return acc / scale;
}

}  // namespace

TEST(FilterBank, HaarLevelOne) {
  const auto b = make_filter_bank("haar", 1);
  ASSERT_EQ(b.level(1).size(), 2u);
  EXPECT_NEAR(b.level(1)[0], 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(b.level(1)[1], -1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(b.M, 1);
}

TEST(FilterBank, HaarSupportDoubles) {
  const auto b = make_filter_bank("haar", 3);
  for (int j = 1; j <= 3; ++j) EXPECT_EQ(b.support(j), std::size_t(1) << j);
}

TEST(FilterBank, MomentsVanish) {
  for (const auto& fam : available_families()) {
    const auto b = make_filter_bank(fam, 8);
    for (int j = 1; j <= 8; ++j)
      for (int k = 0; k < b.M; ++k)
        EXPECT_LT(std::abs(moment(b.level(j), k)), 1e-8) << fam << " j=" << j << " k=" << k;
    // the M-th moment does not vanish
    EXPECT_GT(std::abs(moment(b.level(3), b.M)), 1e-6) << fam;
  }
}

TEST(FilterBank, UnknownFamilyAndMomentRequirement) {
  EXPECT_THROW(make_filter_bank("sym9", 3), DomainError);
  EXPECT_THROW(make_filter_bank("haar", 3, 1.3), AdmissibilityError);
  EXPECT_NO_THROW(make_filter_bank("db2", 3, 1.3));
}

TEST(FilterBank, UserLowpassCountsMoments) {
  const auto ref = make_filter_bank("db3", 4);
  const auto b = make_filter_bank_from_lowpass(ref.lowpass, 4);
  EXPECT_EQ(b.M, 3);
  for (int j = 1; j <= 4; ++j)
    for (std::size_t t = 0; t < b.support(j); ++t) EXPECT_NEAR(b.level(j)[t], ref.level(j)[t], 1e-14);
  EXPECT_THROW(make_filter_bank_from_lowpass({1.0, 0.5}, 2), DomainError);
}

TEST(Admissibility, MomentArithmetic) {
  EXPECT_TRUE(check_admissibility(make_filter_bank("haar", 4), 2, 0.4, 0).pass);
  EXPECT_FALSE(check_admissibility(make_filter_bank("haar", 4), 1, 0.3, 1).pass);
  const auto r = check_admissibility(make_filter_bank("db4", 4), 3, 0.45, 2);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.required, 2.35, 1e-12);
  EXPECT_TRUE(std::isfinite(r.decay_constant));
  EXPECT_GT(r.decay_constant, 0.0);
}

TEST(Dwt, AnnihilatesPolynomials) {
  const std::vector<double> c(512, 3.7);
  for (const auto& fam : available_families()) {
    const auto t = dwt_details(c, make_filter_bank(fam, 5), 5);
    for (const auto& s : t.scales)
      for (double w : s.values) EXPECT_NEAR(w, 0.0, 1e-10) << fam;
  }
  std::vector<double> ramp(512);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.25 * (i + 1);
  const auto t = dwt_details(ramp, make_filter_bank("db2", 5), 5);
  for (const auto& s : t.scales)
    for (double w : s.values) EXPECT_NEAR(w, 0.0, 1e-8);
}

TEST(Dwt, PyramidMatchesDirectConvolution) {
  const auto y = random_path(4096, 1);
  for (const auto& fam : available_families()) {
    const auto b = make_filter_bank(fam, 6);
    const auto table = dwt_details(y, b, 6);
    for (int j = 1; j <= 6; ++j) {
      long k0;
      const auto ref = oracle::naive_coeffs(y, b.level(j), 1L << j, k0);
      const auto& s = table.at(j);
      ASSERT_GE(s.k0, k0);
      ASSERT_LE(s.values.size() + (s.k0 - k0), ref.size());
      for (std::size_t i = 0; i < s.values.size(); ++i)
        EXPECT_NEAR(s.values[i], ref[i + (s.k0 - k0)], 1e-12) << fam << " j=" << j;
    }
  }
}

TEST(Dwt, DirectMatchesNaive) {
  const auto y = random_path(300, 2);
  const auto b = make_filter_bank("db3", 3);
  const auto s = direct_wavelet_coeffs(y, b.level(3), 8);
  long k0;
  const auto ref = oracle::naive_coeffs(y, b.level(3), 8, k0);
  EXPECT_EQ(s.k0, k0);
  ASSERT_EQ(s.values.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(s.values[i], ref[i], 1e-13);
}

TEST(Dwt, ImpulseReadsOffTaps) {
  const auto b = make_filter_bank("db2", 2);
  const auto& g = b.level(2);
  std::vector<double> y(64, 0.0);
  const long t0 = 30;
  y[t0 - 1] = 1.0;
  const auto s = direct_wavelet_coeffs(y, g, 4);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const long k = s.k0 + long(i), idx = 4 * k - t0;
    const double expect = (idx >= 0 && idx < long(g.size())) ? g[idx] : 0.0;
    EXPECT_DOUBLE_EQ(s.values[i], expect);
  }
  const auto h = make_filter_bank("haar", 1);
  std::vector<double> e(8, 0.0);
  e[0] = 1.0;
  const auto s1 = direct_wavelet_coeffs(e, h.level(1), 2);
  EXPECT_EQ(s1.k0, 1);
  EXPECT_DOUBLE_EQ(s1.values[0], h.level(1)[1]);
}

TEST(Dwt, UnavailableScaleThrows) {
  const std::vector<double> y(64, 1.0);
  EXPECT_THROW(dwt_details(y, make_filter_bank("db4", 6), 6), ScaleUnavailable);
}

TEST(Transfer, MatchesDirectSum) {
  const auto b = make_filter_bank("db2", 4);
  for (double w : {0.1, 1.3, 2.9}) {
    std::complex<double> ref = 0;
    for (std::size_t t = 0; t < b.support(4); ++t)
      ref += b.level(4)[t] * std::exp(std::complex<double>(0, -double(t) * w));
    EXPECT_NEAR(std::abs(transfer(b, 4, w) - ref), 0.0, 1e-12);
  }
}

TEST(HInfinity, ZeroAtOrigin) {
  for (const auto& fam : available_families()) {
    EXPECT_NEAR(std::abs(h_infty_eval(make_filter_bank(fam, 2), 0.0)), 0.0, 1e-14);
    EXPECT_NEAR(h_infty_modulus2(make_filter_bank(fam, 2), 0.0), 0.0, 1e-14);
  }
}

TEST(HInfinity, HaarClosedForm) {
  const auto b = make_filter_bank("haar", 2);
  for (double l : {2 * oracle::pi, 0.3, 1.0, 5.0, 17.0, 100.0}) {
    const double ref = oracle::haar_psi_modulus(l);
    EXPECT_NEAR(std::sqrt(h_infty_modulus2(b, l)), ref, 1e-12 + 1e-12 * ref) << l;
    EXPECT_NEAR(std::abs(h_infty_eval(b, l)), ref, 2e-4) << l;
  }
}

TEST(HInfinity, DecayEnvelope) {
  const auto b = make_filter_bank("db3", 2);
  const auto fit = fit_h_infty_decay(b);
  EXPECT_NEAR(fit.alpha, b.alpha, 0.25);
  // |ĥ∞| ≤ C (1+|λ|)^{−α} over a large-λ sweep, with the fitted constants
  for (double l = 64 * oracle::pi; l < 512 * oracle::pi; l += 0.37) {
    EXPECT_LE(std::sqrt(h_infty_modulus2(b, l)), 1.05 * fit.C * std::pow(1 + l, -fit.alpha)) << l;
  }
}

TEST(Multivariate, SingleFilterForPOne) {
  const auto b = make_filter_bank("db2", 4);
  const auto f = multiscale_to_multivariate(b, 4, 1);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].taps, b.level(4));
  EXPECT_EQ(f[0].offset, 0);
}

TEST(Multivariate, ShiftedFilter) {
  const auto b = make_filter_bank("haar", 4);
  const auto f = multiscale_to_multivariate(b, 4, 2);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[2].ell, 3);
  EXPECT_EQ(f[2].u, 1);
  EXPECT_EQ(f[2].v, 1);
  EXPECT_EQ(f[2].taps, b.level(3));
  EXPECT_EQ(f[2].offset, -8);
}

TEST(Multivariate, CoefficientIdentity) {
  const auto y = random_path(2048, 3);
  const auto b = make_filter_bank("db2", 6);
  const int j = 6, p = 3;
  const auto table = dwt_details(y, b, j);
  const auto filters = multiscale_to_multivariate(b, j, p);
  for (const auto& f : filters) {
    const auto s = direct_wavelet_coeffs(y, f.taps, 1L << j, f.offset);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const long k = s.k0 + long(i);
      double ref;
      if (f.u == j) {
        // g_0 is the unit impulse: W = Y_{2^u k + v}
        const long t = (1L << f.u) * k + f.v;
        if (t < 1 || t > long(y.size())) continue;
        ref = y[t - 1];
      } else {
        const auto& sc = table.at(j - f.u);
        const long idx = (1L << f.u) * k + f.v - sc.k0;
        if (idx < 0 || idx >= long(sc.values.size())) continue;
        ref = sc.values[idx];
      }
      EXPECT_NEAR(s.values[i], ref, 1e-12) << "ell=" << f.ell << " k=" << k;
    }
  }
}

TEST(BankJson, RoundTrip) {
  const auto b = make_filter_bank("db3", 4);
  const auto back = bank_from_json(bank_to_json(b));
  EXPECT_EQ(back.family, "db3");
  EXPECT_EQ(back.level(4), b.level(4));
  auto j = bank_to_json(b);
  j["family"] = "custom";
  const auto user = bank_from_json(j);
  EXPECT_EQ(user.M, 3);
  for (std::size_t t = 0; t < b.support(2); ++t) EXPECT_NEAR(user.level(2)[t], b.level(2)[t], 1e-14);
  j["taps"]["g2"][0] = 0.5;
  EXPECT_THROW(bank_from_json(j), DomainError);
}

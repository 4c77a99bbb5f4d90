#include "hermscal/wavelet_bank.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>

#include "hermscal/error.hpp"
#include "hermscal/scalogram.hpp"
#include "hermscal/spectral_model.hpp"

namespace hermscal {
namespace {

constexpr double kPi = std::numbers::pi;

struct Family {
  const char* name;
  int M;
  double alpha;
  std::vector<double> taps;
};

// Daubechies lowpass (reconstruction) filters, extremal phase.
const std::vector<Family>& families() {
  static const std::vector<Family> f = {
      {"haar", 1, 1.0, {0.7071067811865476, 0.7071067811865476}},
      {"db2", 2, 1.3390,
       {0.48296291314453416, 0.8365163037378079, 0.2241438680420134, -0.12940952255126037}},
      {"db3", 3, 1.6360,
       {0.33267055295008263, 0.8068915093110925, 0.45987750211849154, -0.13501102001025458,
        -0.08544127388202666, 0.03522629188570953}},
      {"db4", 4, 1.9125,
       {0.2303778133088965, 0.7148465705529157, 0.6308807679298589, -0.027983769416859854,
        -0.18703481171909309, 0.030841381835560764, 0.0328830116668852,
        -0.010597401785069032}},
  };
  return f;
}

// Structural checksum: Σh = √2, Σh[n]h[n+2k] = δ_k.
void verify_orthonormal(const std::vector<double>& h, double tol) {
  if (h.size() < 2 || h.size() % 2) throw DomainError("lowpass filter must have even length");
  double s = 0;
  for (double v : h) s += v;
  if (std::abs(s - std::numbers::sqrt2) > tol)
    throw DomainError("lowpass filter does not sum to √2");
  for (std::size_t k = 0; k < h.size(); k += 2) {
    double acc = 0;
    for (std::size_t n = 0; n + k < h.size(); ++n) acc += h[n] * h[n + k];
    if (std::abs(acc - (k == 0 ? 1.0 : 0.0)) > tol)
      throw DomainError("lowpass filter is not orthonormal under even shifts");
  }
}

std::vector<double> qmf(const std::vector<double>& h) {
  const std::size_t L = h.size();
  std::vector<double> g(L);
  for (std::size_t n = 0; n < L; ++n) g[n] = (n % 2 ? -1.0 : 1.0) * h[L - 1 - n];
  return g;
}

std::vector<double> convolve_upsampled(const std::vector<double>& a, const std::vector<double>& f,
                                       std::size_t step) {
  std::vector<double> out(a.size() + (f.size() - 1) * step, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t n = 0; n < f.size(); ++n) out[i + n * step] += a[i] * f[n];
  return out;
}

int count_moments(const std::vector<double>& g) {
  int M = 0;
  for (int k = 0; k < static_cast<int>(g.size()); ++k) {
    double s = 0, scale = 0;
    for (std::size_t t = 0; t < g.size(); ++t) {
      const double p = std::pow(static_cast<double>(t), k);
      s += g[t] * p;
      scale += std::abs(g[t]) * p;
    }
    if (std::abs(s) > 1e-8 * scale) break;
    M = k + 1;
  }
  return M;
}

std::vector<double> autocorrelation(const std::vector<double>& f) {
  std::vector<double> r(f.size(), 0.0);
  for (std::size_t k = 0; k < f.size(); ++k)
    for (std::size_t n = 0; n + k < f.size(); ++n) r[k] += f[n] * f[n + k];
  return r;
}

// |F(ω)|² from the autocorrelation r.
double power(const std::vector<double>& r, double w) {
  double s = r[0];
  for (std::size_t k = 1; k < r.size(); ++k) s += 2.0 * r[k] * std::cos(static_cast<double>(k) * w);
  return std::max(s, 0.0);
}

std::complex<double> dtft(const std::vector<double>& f, double w) {
  std::complex<double> s{0.0, 0.0};
  for (std::size_t n = 0; n < f.size(); ++n)
    s += f[n] * std::polar(1.0, -static_cast<double>(n) * w);
  return s;
}

FilterBank build(std::string family, std::vector<double> h, int J_max, int M, double alpha) {
  if (J_max < 1) throw DomainError("make_filter_bank: J_max must be ≥ 1");
  FilterBank b;
  b.family = std::move(family);
  b.levels = J_max;
  b.lowpass = std::move(h);
  b.highpass = qmf(b.lowpass);
  b.M = M;
  b.alpha = alpha;
  b.lowpass_acf = autocorrelation(b.lowpass);
  b.highpass_acf = autocorrelation(b.highpass);

  std::vector<double> a{1.0};
  for (int j = 1; j <= J_max; ++j) {
    const std::size_t step = std::size_t{1} << (j - 1);
    b.g.push_back(convolve_upsampled(a, b.highpass, step));
    if (j < J_max) a = convolve_upsampled(a, b.lowpass, step);
  }
  auto fit = fit_h_infty_decay(b);
  b.alpha_fitted = fit.alpha;
  if (std::isnan(b.alpha)) {
    b.alpha = fit.alpha;
  } else if (std::abs(fit.alpha - b.alpha) > 0.2 * b.alpha) {
    b.warnings.push_back("fitted Fourier decay exponent " + std::to_string(fit.alpha) +
                         " differs from tabulated " + std::to_string(b.alpha) + " by over 20%");
  }
  return b;
}

long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
long ceil_div(long a, long b) { return -floor_div(-a, b); }

}  // namespace

const std::vector<double>& FilterBank::level(int j) const {
  if (j < 1 || j > levels)
    throw ScaleUnavailable("filter bank " + family + " has no level " + std::to_string(j));
  return g[static_cast<std::size_t>(j - 1)];
}

std::vector<std::string> available_families() {
  std::vector<std::string> names;
  for (const auto& f : families()) names.emplace_back(f.name);
  return names;
}

FilterBank make_filter_bank(const std::string& family, int J_max, double M_required) {
  const std::string key = family == "db1" ? "haar" : family;
  auto it = std::find_if(families().begin(), families().end(),
                         [&](const Family& f) { return key == f.name; });
  if (it == families().end()) throw DomainError("unknown wavelet family '" + family + "'");
  if (it->M < M_required)
    throw AdmissibilityError(family + " has M=" + std::to_string(it->M) +
                             " vanishing moments, fewer than the required " +
                             std::to_string(M_required));
  verify_orthonormal(it->taps, 1e-14);
  return build(it->name, it->taps, J_max, it->M, it->alpha);
}

FilterBank make_filter_bank_from_lowpass(std::vector<double> lowpass, int J_max,
                                         std::string family) {
  verify_orthonormal(lowpass, 1e-10);
  const int M = count_moments(qmf(lowpass));
  return build(std::move(family), std::move(lowpass), J_max, M,
               std::numeric_limits<double>::quiet_NaN());
}

AdmissibilityReport check_admissibility(const FilterBank& bank, int q0, double d, int K) {
  AdmissibilityReport r;
  r.M = bank.M;
  r.K = K;
  r.q0 = q0;
  r.d = d;
  r.delta = delta(q0, d);
  r.required = K + r.delta;
  r.pass = bank.M >= r.required;
  r.alpha = bank.alpha;

  constexpr int kGrid = 1024;
  for (int j = 1; j <= bank.levels; ++j) {
    const double gj = std::ldexp(1.0, j);
    double C = 0;
    for (int i = 1; i <= kGrid; ++i) {
      // Log-spaced from 1e−3/γ_j up to π to see both the moment and decay regimes.
      const double lam = std::exp(std::log(1e-3 / gj) +
                                  (std::log(kPi) - std::log(1e-3 / gj)) * i / kGrid);
      const double x = gj * lam;
      const double bound = std::sqrt(gj) * std::pow(x, bank.M) / std::pow(1.0 + x, r.alpha + bank.M);
      C = std::max(C, std::abs(transfer(bank, j, lam)) / bound);
    }
    r.decay_constant_per_level.push_back(C);
    r.decay_constant = std::max(r.decay_constant, C);
  }
  return r;
}

const CoefficientSeries& CoefficientTable::at(int j) const {
  if (j < 1 || j > max_level()) throw ScaleUnavailable("scale " + std::to_string(j) + " not in table");
  return scales[static_cast<std::size_t>(j - 1)];
}

CoefficientTable dwt_details(std::span<const double> y, const FilterBank& bank, int J_max) {
  const long N = static_cast<long>(y.size());
  const long L = static_cast<long>(bank.T());
  if (J_max < 1) throw DomainError("dwt_details: J_max must be ≥ 1");
  CoefficientTable table;
  table.N = y.size();
  table.T = bank.T();
  table.family = bank.family;

  for (int j = 1; j <= J_max; ++j)
    if (!n_coeffs(table.N, table.T, j).available)
      throw ScaleUnavailable("N=" + std::to_string(N) + " leaves no coefficients at scale " +
                             std::to_string(j));

  // a holds boundary-free approximation values at positions lo..hi.
  std::vector<double> a(y.begin(), y.end());
  long lo = 1, hi = N;
  for (int j = 1; j <= J_max; ++j) {
    const long nlo = ceil_div(lo + L - 1, 2);
    const long nhi = floor_div(hi, 2);
    const long count = nhi - nlo + 1;
    const long nj = n_coeffs(table.N, table.T, j).n;
    if (count < nj) throw NumericalError("dwt_details: pyramid range shorter than n_j");

    CoefficientSeries s;
    s.j = j;
    s.k0 = nlo;
    s.values.resize(static_cast<std::size_t>(nj));
    const bool more = j < J_max;
    std::vector<double> next(more ? static_cast<std::size_t>(count) : 0);
    for (long k = nlo; k <= nhi; ++k) {
      const long base = 2 * k - lo;  // index of position 2k within a
      double dv = 0, av = 0;
      for (long n = 0; n < L; ++n) {
        const double x = a[static_cast<std::size_t>(base - n)];
        dv += bank.highpass[static_cast<std::size_t>(n)] * x;
        av += bank.lowpass[static_cast<std::size_t>(n)] * x;
      }
      if (k - nlo < nj) s.values[static_cast<std::size_t>(k - nlo)] = dv;
      if (more) next[static_cast<std::size_t>(k - nlo)] = av;
      else if (k - nlo + 1 >= nj) break;
    }
    table.scales.push_back(std::move(s));
    if (more) {
      a = std::move(next);
      lo = nlo;
      hi = nhi;
    }
  }
  return table;
}

CoefficientSeries direct_wavelet_coeffs(std::span<const double> y, std::span<const double> taps,
                                        long gamma, long offset) {
  if (gamma < 1) throw DomainError("direct_wavelet_coeffs: γ must be ≥ 1");
  if (taps.empty()) throw DomainError("direct_wavelet_coeffs: empty filter");
  const long N = static_cast<long>(y.size());
  const long L = static_cast<long>(taps.size());
  const long kmin = ceil_div(offset + L, gamma);
  const long kmax = floor_div(N + offset, gamma);
  if (kmax < kmin) throw ScaleUnavailable("direct_wavelet_coeffs: no boundary-free coefficient");
  CoefficientSeries s;
  s.k0 = kmin;
  s.values.reserve(static_cast<std::size_t>(kmax - kmin + 1));
  for (long k = kmin; k <= kmax; ++k) {
    double acc = 0;
    for (long i = 0; i < L; ++i) {
      const long t = gamma * k - offset - i;
      acc += taps[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(t - 1)];
    }
    s.values.push_back(acc);
  }
  return s;
}

std::complex<double> transfer(const FilterBank& bank, int j, double omega) {
  if (j < 1) throw DomainError("transfer: j must be ≥ 1");
  // ĝ_j(ω) = G(2^{j−1}ω) Π_{i<j−1} H(2^i ω)
  std::complex<double> v = dtft(bank.highpass, std::ldexp(omega, j - 1));
  for (int i = 0; i < j - 1; ++i) v *= dtft(bank.lowpass, std::ldexp(omega, i));
  return v;
}

std::complex<double> h_infty_eval(const FilterBank& bank, double lambda,
                                  const HInfinityOptions& opts) {
  if (std::abs(lambda) > opts.lambda_max)
    throw DomainError("h_infty_eval: |λ| exceeds λ_max");
  std::complex<double> v = dtft(bank.highpass, lambda / 2) / std::numbers::sqrt2;
  double prev = std::abs(v);
  double residual = std::numeric_limits<double>::infinity();
  for (int m = 2; m <= opts.max_level; ++m) {
    v *= dtft(bank.lowpass, std::ldexp(lambda, -m)) / std::numbers::sqrt2;
    const double cur = std::abs(v);
    residual = std::abs(cur - prev);
    // a factor near 1 at λ/2^m ≈ 2πk says nothing about the tail
    if (residual < opts.tolerance && std::ldexp(std::abs(lambda), -m) <= 1.0) return v;
    prev = cur;
  }
  throw ConvergenceError("h_infty_eval: no convergence by level " + std::to_string(opts.max_level),
                         residual);
}

double h_infty_modulus2(const FilterBank& bank, double lambda) {
  const auto& rh = bank.lowpass_acf;
  const auto& rg = bank.highpass_acf;
  double v = 0.5 * power(rg, lambda / 2);
  if (v == 0.0) return 0.0;
  for (int m = 2; m < 400; ++m) {
    const double f = 0.5 * power(rh, std::ldexp(lambda, -m));
    v *= f;
    if (std::abs(f - 1.0) < 1e-16) break;
  }
  return v;
}

DecayFit fit_h_infty_decay(const FilterBank& bank) {
  constexpr int kPerBand = 512;
  std::vector<double> lx, ly;
  for (int k = 2; k <= 5; ++k) {
    const double a = std::ldexp(kPi, k), b = 2 * a;
    double best = 0, at = a;
    for (int i = 0; i <= kPerBand; ++i) {
      const double lam = a + (b - a) * i / kPerBand;
      const double m = h_infty_modulus2(bank, lam);
      if (m > best) {
        best = m;
        at = lam;
      }
    }
    lx.push_back(std::log(at));
    ly.push_back(0.5 * std::log(best));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  return {std::exp(my - slope * mx), -slope};
}

std::vector<MultivariateFilter> multiscale_to_multivariate(const FilterBank& bank, int j, int p) {
  if (p < 1) throw std::out_of_range("multiscale_to_multivariate: p must be ≥ 1");
  if (j < p - 1 || j > bank.levels)
    throw std::out_of_range("multiscale_to_multivariate: need p−1 ≤ j ≤ levels");
  std::vector<MultivariateFilter> out;
  static const std::vector<double> impulse{1.0};
  for (int u = 0; u < p; ++u) {
    const int level = j - u;
    const std::vector<double>& g = level == 0 ? impulse : bank.level(level);
    for (int v = 0; v < (1 << u); ++v) {
      MultivariateFilter f;
      f.ell = (1 << u) + v;
      f.u = u;
      f.v = v;
      f.offset = -(static_cast<long>(v) << level);
      f.taps = g;
      out.push_back(std::move(f));
    }
  }
  return out;
}

nlohmann::json bank_to_json(const FilterBank& bank) {
  nlohmann::json taps = nlohmann::json::object();
  for (int j = 1; j <= bank.levels; ++j) taps["g" + std::to_string(j)] = bank.level(j);
  return {{"family", bank.family}, {"levels", bank.levels}, {"taps", taps}};
}

FilterBank bank_from_json(const nlohmann::json& j) {
  const auto family = j.at("family").get<std::string>();
  const int levels = j.value("levels", 8);
  const auto known = available_families();
  FilterBank bank;
  if (std::find(known.begin(), known.end(), family) != known.end() || family == "db1") {
    bank = make_filter_bank(family, levels);
  } else {
    const auto g1 = j.at("taps").at("g1").get<std::vector<double>>();
    const std::size_t L = g1.size();
    std::vector<double> h(L);
    for (std::size_t m = 0; m < L; ++m) h[m] = ((L - 1 - m) % 2 ? -1.0 : 1.0) * g1[L - 1 - m];
    bank = make_filter_bank_from_lowpass(std::move(h), levels, family);
  }
  if (j.contains("taps")) {
    for (const auto& [key, value] : j.at("taps").items()) {
      const int lev = std::stoi(key.substr(1));
      const auto given = value.get<std::vector<double>>();
      const auto& built = bank.level(lev);
      bool same = given.size() == built.size();
      for (std::size_t i = 0; same && i < given.size(); ++i)
        same = std::abs(given[i] - built[i]) <= 1e-10;
      if (!same) throw DomainError("bank JSON: taps for " + key + " disagree with the cascade");
    }
  }
  return bank;
}

void write_coefficients_csv(const std::string& path, const CoefficientTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "j,k,value\n" << std::setprecision(17);
  for (const auto& s : table.scales)
    for (std::size_t i = 0; i < s.values.size(); ++i)
      out << s.j << ',' << s.k0 + static_cast<long>(i) << ',' << s.values[i] << '\n';
}

}  // namespace hermscal

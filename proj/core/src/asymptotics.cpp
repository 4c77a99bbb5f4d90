#include "hermscal/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hermscal/error.hpp"
#include "quadrature.hpp"

namespace hermscal {
namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int q) {
  double f = 1;
  for (int i = 2; i <= q; ++i) f *= i;
  return f;
}

}  // namespace

GainFunction h_infty_gain(const FilterBank& bank) {
  GainFunction g;
  g.modulus2 = [&bank](double s) { return h_infty_modulus2(bank, s); };
  g.alpha = bank.alpha_fitted;
  return g;
}

double gamma_factor(int p, double d) {
  if (p < 1) throw DomainError("gamma_factor: p must be ≥ 1");
  double prod = 1.0;
  for (int i = 2; i <= p; ++i) {
    const double m = p - i;
    prod *= detail::power_pair_integral(m - 2.0 * d * (m + 1.0), -2.0 * d).value;
  }
  return prod;
}

LpResult compute_L_p(const GainFunction& g, int p, double d, int K, const LpOptions& opts) {
  if (p < 1 || K < 0) throw DomainError("compute_L_p: need p ≥ 1, K ≥ 0");
  if (!(d > 0.0 && d < 0.5)) throw DomainError("compute_L_p: d must lie in (0, 1/2)");
  if (!(p * (1.0 - 2.0 * d) < 1.0))
    throw DomainError("compute_L_p: L_" + std::to_string(p) + " is infinite for d=" +
                      std::to_string(d) + " (needs p(1−2d) < 1)");
  const double e = p - 1.0 - 2.0 * p * d - 2.0 * K;
  const auto f = [&](double s) {
    const double m = g.modulus2(s);
    return m == 0.0 ? 0.0 : m * std::pow(s, e);
  };

  const bool compact = std::isfinite(g.support);
  const double upper = compact ? g.support : opts.lambda_max;
  std::vector<double> cuts{0.0};
  for (double x = opts.panel; x < upper; x += opts.panel) cuts.push_back(x);
  for (double b : g.breakpoints)
    if (b > 0.0 && b < upper) cuts.push_back(b);
  cuts.push_back(upper);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double radial = 0.0, err = 0.0, last_half = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto q = i == 0 ? detail::qags(f, cuts[0], cuts[1], 0.0, 1e-10)
                          : detail::qag(f, cuts[i], cuts[i + 1], 0.0, 1e-10);
    radial += q.value;
    err += q.abserr;
    if (cuts[i] >= upper / 2) last_half += q.value;
  }

  double tail = 0.0;
  if (!compact) {
    const double beta = e - 2.0 * g.alpha;
    if (!(beta < -1.0))
      throw DomainError("compute_L_p: gain decays too slowly for a finite integral");
    tail = last_half / (std::pow(2.0, -(beta + 1.0)) - 1.0);
  }

  LpResult r;
  r.radial = 2.0 * (radial + tail);
  r.gamma_factor = gamma_factor(p, d);
  r.value = r.gamma_factor * r.radial;
  r.residual = radial > 0 ? err / radial : 0.0;
  r.tail_fraction = radial > 0 ? tail / (radial + tail) : 0.0;
  if (!(r.value > 0.0) || !std::isfinite(r.value))
    throw ConvergenceError("compute_L_p: non-finite or non-positive result", r.residual);
  if (r.residual > opts.tolerance)
    throw ConvergenceError("compute_L_p: quadrature residual " + std::to_string(r.residual) +
                               " above tolerance",
                           r.residual);
  return r;
}

LpResult compute_L_p(const FilterBank& bank, int p, double d, int K, const LpOptions& opts) {
  return compute_L_p(h_infty_gain(bank), p, d, K, opts);
}

GaussianVariance gaussian_limit_variance(const FilterBank& bank, double fstar0, double d, int K,
                                         int p_trunc) {
  if (p_trunc < 1) throw DomainError("gaussian_limit_variance: p_trunc must be ≥ 1");
  const double ex = -2.0 * (K + d);
  const auto A = [&](double lam, int lo, int hi) {
    double s = 0;
    for (int p = -hi; p <= hi; ++p) {
      if (std::abs(p) < lo) continue;
      const double x = std::abs(lam + 2.0 * kPi * p);
      const double m = h_infty_modulus2(bank, x);
      if (m > 0.0) s += std::pow(x, ex) * m;
    }
    return s;
  };
  const auto integral = [&](int hi) {
    return 2.0 * detail::qags([&](double l) { const double a = A(l, 0, hi); return a * a; }, 0.0,
                              kPi, 0.0, 1e-10)
                     .value;  // over (−π, π]
  };
  const double I = integral(p_trunc);

  // The envelope C|λ|^{−α} alone overstates the tail (it ignores the zeros of
  // |ĥ∞|²), so the terms up to 4·p_trunc are summed exactly and only the rest
  // is bounded.
  const int far = 4 * p_trunc;
  const double I_far = integral(far);
  const auto fit = fit_h_infty_decay(bank);
  const double gexp = 2.0 * (K + d + fit.alpha);
  double R = 0;
  constexpr int kTerms = 100000;
  for (int p = far + 1; p <= far + kTerms; ++p) R += std::pow((2.0 * p - 1.0) * kPi, -gexp);
  const double last = (2.0 * (far + kTerms) + 1.0) * kPi;
  R += std::pow(last, 1.0 - gexp) / ((gexp - 1.0) * 2.0 * kPi);
  R *= 2.0 * fit.C * fit.C;
  const double envelope = (2.0 * R * std::sqrt(2.0 * kPi * I_far) + 2.0 * kPi * R * R) / I;

  GaussianVariance out;
  out.p_trunc = p_trunc;
  out.value = 4.0 * kPi * fstar0 * fstar0 * I;
  out.remainder_bound = (I_far - I) / I + envelope;
  if (out.remainder_bound > 0.01)
    throw ConvergenceError("gaussian_limit_variance: truncation remainder " +
                               std::to_string(out.remainder_bound) + " above 1%; increase p_trunc",
                           out.remainder_bound);
  return out;
}

LimitConstants compute_limit_constants(const SpectralModel& model, const FilterBank& bank, int q0,
                                       int K, const LpOptions& opts) {
  LimitConstants c;
  c.q0 = q0;
  c.K = K;
  c.d = model.d();
  c.delta = delta(q0, c.d);
  c.fstar0 = model.fstar_at_zero();
  if (bank.M < K + c.delta)
    throw AdmissibilityError("compute_limit_constants: M=" + std::to_string(bank.M) +
                             " < K + δ(q0) = " + std::to_string(K + c.delta));
  for (int p = std::max(1, q0 - 1); p <= q0; ++p)
    c.L[p] = compute_L_p(bank, p, c.d, K, opts).value;
  if (q0 == 1) c.gamma11 = gaussian_limit_variance(bank, c.fstar0, c.d, K).value;
  return c;
}

double predicted_spectrum(const LimitConstants& c, int j) {
  return factorial(c.q0) * std::pow(c.fstar0, c.q0) * c.L.at(c.q0) *
         std::exp2(2.0 * j * (c.delta + c.K));
}

std::vector<double> limit_scale_profile(const LimitConstants& c, const std::vector<int>& u_range) {
  if (c.q0 < 2) throw DomainError("limit_scale_profile: requires q0 ≥ 2");
  const double base = c.L.at(c.q0 - 1) / (factorial(c.q0) * c.L.at(c.q0));
  std::vector<double> out;
  for (int u : u_range) out.push_back(std::exp2((2.0 * c.d - 1.0) * u) * base);
  return out;
}

nlohmann::json constants_to_json(const LimitConstants& c, const std::vector<int>& u_range) {
  nlohmann::json L = nlohmann::json::object();
  for (const auto& [p, v] : c.L) L[std::to_string(p)] = v;
  nlohmann::json j{{"L", L},
                   {"q0", c.q0},
                   {"K", c.K},
                   {"d", c.d},
                   {"fstar0", c.fstar0},
                   {"profile", nlohmann::json::array()}};
  j["Gamma11"] = std::isnan(c.gamma11) ? nlohmann::json(nullptr) : nlohmann::json(c.gamma11);
  if (c.q0 >= 2) j["profile"] = limit_scale_profile(c, u_range);
  return j;
}

double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

std::complex<double> dirichlet_kernel(long n, double u) {
  if (n < 1) throw DomainError("dirichlet_kernel: n must be ≥ 1");
  const double e = wrap_angle(u);
  if (e == 0.0) return {1.0, 0.0};
  const double nn = static_cast<double>(n);
  const double mod = std::sin(nn * e / 2) / (nn * std::sin(e / 2));
  return std::polar(mod, (nn - 1) * e / 2);
}

DirichletBoundReport dirichlet_bound_check(const std::vector<long>& n_set, int points_per_pi) {
  DirichletBoundReport rep;
  const double h = kPi / points_per_pi;
  for (long n : n_set) {
    DirichletBoundRow row;
    row.n = n;
    const long steps = 20L * n * points_per_pi;
    const double nn = static_cast<double>(n);
    for (long i = 0; i <= steps; ++i) {
      const double theta = -10.0 * kPi * nn + h * static_cast<double>(i);
      const double u = theta / nn;
      const double v = (1.0 + std::abs(nn * wrap_angle(u))) * std::abs(dirichlet_kernel(n, u));
      if (v > row.sup) {
        row.sup = v;
        row.theta_at_sup = theta;
      }
    }
    rep.pass = rep.pass && row.sup <= rep.bound;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace hermscal

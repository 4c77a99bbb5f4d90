#pragma once

#include <functional>
#include <span>

namespace hermscal::detail {

struct QuadResult {
  double value = 0.0;
  double abserr = 0.0;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss–Kronrod (GSL qag, 61-point rule).
QuadResult qag(const Integrand& f, double a, double b, double epsabs, double epsrel);
// Adaptive with extrapolation; tolerates integrable endpoint singularities.
QuadResult qags(const Integrand& f, double a, double b, double epsabs, double epsrel);
// Like qags with known interior breakpoints (pts includes a and b).
QuadResult qagp(const Integrand& f, std::span<const double> pts, double epsabs, double epsrel);
// ∫_a^b (x−a)^alpha (b−x)^beta f(x) dx, alpha, beta > −1.
QuadResult qaws(const Integrand& f, double a, double b, double alpha, double beta, double epsabs,
                double epsrel);

// ∫_R |t|^a |1−t|^b dt, split at 0 and 1 into three Beta-type pieces on [0,1].
// Requires a > −1, b > −1, a + b < −1.
QuadResult power_pair_integral(double a, double b);

}  // namespace hermscal::detail

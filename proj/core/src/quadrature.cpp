#include "quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hermscal/error.hpp"

namespace hermscal::detail {
namespace {

constexpr std::size_t kLimit = 2000;

void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

double trampoline(double x, void* p) { return (*static_cast<const Integrand*>(p))(x); }

struct Workspace {
  Workspace() : w(gsl_integration_workspace_alloc(kLimit)) {}
  ~Workspace() { gsl_integration_workspace_free(w); }
  gsl_integration_workspace* w;
};

Workspace& workspace() {
  thread_local Workspace ws;
  return ws;
}

QuadResult check(int status, double value, double abserr, const char* who) {
  // GSL_EROUND only means the requested accuracy was not quite reached; the
  // error estimate is still meaningful and callers judge it themselves.
  if (status != GSL_SUCCESS && status != GSL_EROUND && status != GSL_EMAXITER)
    throw ConvergenceError(std::string(who) + ": " + gsl_strerror(status), abserr);
  return {value, abserr};
}

}  // namespace

QuadResult qag(const Integrand& f, double a, double b, double epsabs, double epsrel) {
  silence_gsl();
  gsl_function F{&trampoline, const_cast<Integrand*>(&f)};
  double v = 0, e = 0;
  int st = gsl_integration_qag(&F, a, b, epsabs, epsrel, kLimit, GSL_INTEG_GAUSS61,
                               workspace().w, &v, &e);
  return check(st, v, e, "qag");
}

QuadResult qags(const Integrand& f, double a, double b, double epsabs, double epsrel) {
  silence_gsl();
  gsl_function F{&trampoline, const_cast<Integrand*>(&f)};
  double v = 0, e = 0;
  int st = gsl_integration_qags(&F, a, b, epsabs, epsrel, kLimit, workspace().w, &v, &e);
  return check(st, v, e, "qags");
}

QuadResult qagp(const Integrand& f, std::span<const double> pts, double epsabs, double epsrel) {
  silence_gsl();
  gsl_function F{&trampoline, const_cast<Integrand*>(&f)};
  std::vector<double> p(pts.begin(), pts.end());
  double v = 0, e = 0;
  int st = gsl_integration_qagp(&F, p.data(), p.size(), epsabs, epsrel, kLimit, workspace().w,
                                &v, &e);
  return check(st, v, e, "qagp");
}

QuadResult qaws(const Integrand& f, double a, double b, double alpha, double beta, double epsabs,
                double epsrel) {
  silence_gsl();
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw DomainError("qaws: endpoint exponents must exceed −1");
  std::unique_ptr<gsl_integration_qaws_table, decltype(&gsl_integration_qaws_table_free)> table(
      gsl_integration_qaws_table_alloc(alpha, beta, 0, 0), &gsl_integration_qaws_table_free);
  gsl_function F{&trampoline, const_cast<Integrand*>(&f)};
  double v = 0, e = 0;
  int st = gsl_integration_qaws(&F, a, b, table.get(), epsabs, epsrel, kLimit, workspace().w, &v,
                                &e);
  return check(st, v, e, "qaws");
}

QuadResult power_pair_integral(double a, double b) {
  if (!(a > -1.0) || !(b > -1.0) || !(a + b < -1.0))
    throw DomainError("power_pair_integral: need a > −1, b > −1, a + b < −1");
  const Integrand one = [](double) { return 1.0; };
  const double c = -a - b - 2.0;  // > −1
  // [0,1]: t^a (1−t)^b.  t > 1, t = 1/s: s^c (1−s)^b.  t < 0, t = −s/(1−s): s^a (1−s)^c.
  QuadResult r{0.0, 0.0};
  for (auto [al, be] : {std::pair{a, b}, std::pair{c, b}, std::pair{a, c}}) {
    auto q = qaws(one, 0.0, 1.0, al, be, 0.0, 1e-13);
    r.value += q.value;
    r.abserr += q.abserr;
  }
  return r;
}

}  // namespace hermscal::detail

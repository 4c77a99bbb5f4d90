#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace hermscal::detail {
namespace {

enum class Kind { Complex, Dct1, Dct2 };

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Kind kind, int n) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(kind, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // Planning with FFTW_ESTIMATE leaves the scratch arrays untouched.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    if (kind == Kind::Complex) {
      std::vector<fftw_complex> buf(static_cast<std::size_t>(n));
      plan = fftw_plan_dft_1d(n, buf.data(), buf.data(), FFTW_FORWARD, flags);
    } else {
      std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
      plan = fftw_plan_r2r_1d(n, a.data(), b.data(),
                              kind == Kind::Dct1 ? FFTW_REDFT00 : FFTW_REDFT10, flags);
    }
    if (!plan) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<Kind, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft_forward(std::span<std::complex<double>> x) {
  if (x.empty()) return;
  auto* p = reinterpret_cast<fftw_complex*>(x.data());
  fftw_execute_dft(cache().get(Kind::Complex, static_cast<int>(x.size())), p, p);
}

void dct1(std::span<const double> in, std::span<double> out) {
  if (in.size() < 2 || out.size() != in.size())
    throw std::invalid_argument("dct1: size mismatch or n < 2");
  // FFTW does not modify the input of an out-of-place r2r transform.
  fftw_execute_r2r(cache().get(Kind::Dct1, static_cast<int>(in.size())),
                   const_cast<double*>(in.data()), out.data());
}

void dct2(std::span<const double> in, std::span<double> out) {
  if (in.empty() || out.size() != in.size())
    throw std::invalid_argument("dct2: size mismatch");
  fftw_execute_r2r(cache().get(Kind::Dct2, static_cast<int>(in.size())),
                   const_cast<double*>(in.data()), out.data());
}

}  // namespace hermscal::detail

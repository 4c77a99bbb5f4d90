#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace hermscal {

/// Philox4x32-10 counter-based bijection (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Stream ids used across the library so that independent draws never share
/// counters.
enum class StreamId : std::uint32_t {
  Gaussian = 1,
  RosenblattPartialSum = 2,
  RosenblattSpectral = 3,
  Compensation = 4,
  MonteCarloIntegral = 5,
  CompensationSpectral = 6,
  Test = 99,
};

/// Random stream keyed by (seed, replicate, stream).
///
/// Streams with different keys are statistically independent and each one is
/// reproducible regardless of the order in which replicates are generated.
/// Satisfies std::uniform_random_bit_generator.
class KeyedStream {
 public:
  using result_type = std::uint32_t;

  KeyedStream(std::uint64_t seed, std::uint64_t replicate, StreamId stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double normal() { return normal_(*this); }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  unsigned used_ = 4;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace hermscal

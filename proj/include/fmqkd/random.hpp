#pragma once

#include <cstdint>
#include <random>

namespace fmqkd {

/// Deterministic random stream.  Substreams derived from (master seed,
/// stream index) are independent and reproducible, which is what lets gate
/// simulation be partitioned across workers without losing bit-exact
/// replay.  Sampling is hand-rolled on top of the raw engine so sequences
/// are identical across standard libraries.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t master_seed, std::uint64_t stream = 0) {
    std::seed_seq seq{master_seed, stream};
    engine_.seed(seq);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Index in [0, n) for small n.
  std::uint32_t uniform_index(std::uint32_t n) {
    return static_cast<std::uint32_t>(uniform01() * n);
  }

  /// Poisson sample by inversion of the product of uniforms (Knuth).
  /// Large means are split to keep the product away from underflow.
  std::uint64_t poisson(double mean) {
    std::uint64_t count = 0;
    while (mean > 50.0) {
      count += poisson_small(50.0);
      mean -= 50.0;
    }
    return count + poisson_small(mean);
  }

 private:
  std::uint64_t poisson_small(double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double product = uniform01();
    while (product > limit) {
      ++k;
      product *= uniform01();
    }
    return k;
  }

  std::mt19937_64 engine_;
};

}  // namespace fmqkd

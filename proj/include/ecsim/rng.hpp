#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ecsim {

// Seeded generator with platform-independent output. Independent streams
// derived from one seed let lifetimes stay fixed while placement choices vary.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n). n must be nonzero.
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ecsim

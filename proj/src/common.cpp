#include "ecsim/error.hpp"
#include "ecsim/rng.hpp"

#include <limits>

namespace ecsim {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidPolicy: return "invalid-policy";
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInsufficientUnits: return "insufficient-units";
    case ErrorCode::kCorruptStripe: return "corrupt-stripe";
    case ErrorCode::kInvalidParams: return "invalid-params";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kInsufficientCluster: return "insufficient-cluster";
    case ErrorCode::kUnknownBattery: return "unknown-battery";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream),
                       static_cast<std::uint32_t>(stream >> 32)};
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  auto seq = make_seed_seq(seed, stream);
  engine_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t n) {
  // Rejection sampling keeps the result unbiased and platform independent.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

}  // namespace ecsim

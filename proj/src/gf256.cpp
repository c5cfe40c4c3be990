#include "ecsim/gf256.hpp"

#include <array>
#include <cassert>

namespace ecsim::gf256 {
namespace {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
  // mul[a][b]; 64 KiB, used by the region kernels.
  std::array<std::array<std::uint8_t, 256>, 256> mul{};

  Tables() {
    unsigned x = 1;
    for (unsigned i = 0; i < 255; ++i) {
      exp[i] = static_cast<std::uint8_t>(x);
      log[x] = static_cast<std::uint8_t>(i);
      x <<= 1;
      if (x & 0x100) x ^= 0x11d;
    }
    for (unsigned i = 255; i < exp.size(); ++i) exp[i] = exp[i - 255];
    for (unsigned a = 1; a < 256; ++a) {
      for (unsigned b = 1; b < 256; ++b) {
        mul[a][b] = exp[log[a] + log[b]];
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

std::uint8_t mul(std::uint8_t a, std::uint8_t b) { return tables().mul[a][b]; }

std::uint8_t inv(std::uint8_t a) {
  assert(a != 0);
  const auto& t = tables();
  return t.exp[255 - t.log[a]];
}

std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

std::uint8_t exp(unsigned power) { return tables().exp[power % 255]; }

void mul_add_region(std::uint8_t coef, std::span<const std::uint8_t> src,
                    std::span<std::uint8_t> dst) {
  assert(src.size() == dst.size());
  if (coef == 0) return;
  if (coef == 1) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] ^= src[i];
    return;
  }
  const auto& row = tables().mul[coef];
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] ^= row[src[i]];
}

}  // namespace ecsim::gf256

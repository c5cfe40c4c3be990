#pragma once

#include <cstdint>
#include <span>

// Arithmetic in GF(2^8) with the primitive polynomial x^8+x^4+x^3+x^2+1
// (0x11d) and generator 2.
namespace ecsim::gf256 {

std::uint8_t add(std::uint8_t a, std::uint8_t b);
std::uint8_t mul(std::uint8_t a, std::uint8_t b);
std::uint8_t div(std::uint8_t a, std::uint8_t b);
std::uint8_t inv(std::uint8_t a);
std::uint8_t exp(unsigned power);

// dst[i] ^= coef * src[i]
void mul_add_region(std::uint8_t coef, std::span<const std::uint8_t> src,
                    std::span<std::uint8_t> dst);

}  // namespace ecsim::gf256

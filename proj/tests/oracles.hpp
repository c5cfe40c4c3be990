#pragma once

// Reference implementations that share no code with the library.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Carry-less multiply reduced by x^8 + x^4 + x^3 + x^2 + 1.
inline std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
  unsigned acc = 0;
  unsigned x = a;
  for (int bit = 0; bit < 8; ++bit) {
    if (b & (1u << bit)) acc ^= x;
    x <<= 1;
    if (x & 0x100) x ^= 0x11d;
  }
  return static_cast<std::uint8_t>(acc);
}

inline std::uint8_t gf_inv(std::uint8_t a) {
  for (unsigned c = 1; c < 256; ++c) {
    if (gf_mul(a, static_cast<std::uint8_t>(c)) == 1) return static_cast<std::uint8_t>(c);
  }
  throw std::domain_error("zero has no inverse");
}

// Composite 5-point Gauss-Legendre.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int panels = 400) {
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
  static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                              0.4786286704993665, 0.2369268850561891};
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += w[i] * f(mid + 0.5 * h * x[i]);
    sum += 0.5 * h * s;
  }
  return sum;
}

inline double weibull_density(double t, double a, double b) {
  return a / b * std::pow(t / b, a - 1.0) * std::exp(-std::pow(t / b, a));
}

// Ratio of integrals, with the tail mass found numerically too.
inline double conditional_rate_quadrature(double t0, double dt, double a, double b) {
  auto f = [&](double t) { return weibull_density(t, a, b); };
  const double num = integrate(f, t0, t0 + dt, 200);
  // tail: integrate far enough out that the rest is below double resolution
  const double end = b * std::pow(50.0, 1.0 / a) + t0 + dt;
  const double den = num + integrate(f, t0 + dt, end, 4000);
  return num / den;
}

// Expected time to absorption of the birth-death chain on states
// 0..r failed units (r + 1 failed = loss). From s: failure (n - s)λ to s + 1,
// repair s·μ back to s - 1. Solved by exact rational elimination.
inline double markov_mttdl(unsigned n, unsigned r, double lambda, double mu) {
  using Q = boost::multiprecision::cpp_rational;
  const Q l(lambda);
  const Q m(mu);
  const unsigned size = r + 1;
  std::vector<std::vector<Q>> a(size, std::vector<Q>(size + 1, Q(0)));
  for (unsigned s = 0; s <= r; ++s) {
    const Q fail = Q(n - s) * l;
    const Q repair = Q(s) * m;
    a[s][s] = fail + repair;
    if (s + 1 <= r) a[s][s + 1] = -fail;
    if (s >= 1) a[s][s - 1] = -repair;
    a[s][size] = 1;
  }
  for (unsigned col = 0; col < size; ++col) {
    unsigned pivot = col;
    while (a[pivot][col] == 0) ++pivot;
    std::swap(a[pivot], a[col]);
    for (unsigned row = 0; row < size; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Q factor = a[row][col] / a[col][col];
      for (unsigned c = col; c <= size; ++c) a[row][c] -= factor * a[col][c];
    }
  }
  return static_cast<double>(a[0][size] / a[0][0]);
}

}  // namespace oracle

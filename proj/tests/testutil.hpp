#ifndef QDISC_TESTS_TESTUTIL_HPP
#define QDISC_TESTS_TESTUTIL_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "qdisc/smallmat.hpp"

namespace testutil {

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline qdisc::Matrix random_hermitian(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  qdisc::Matrix h(n);
  for (std::size_t r = 0; r < n; ++r) {
    h(r, r) = scale * uniform(rng, -1.0, 1.0);
    for (std::size_t c = r + 1; c < n; ++c) {
      const qdisc::Complex z(scale * uniform(rng, -1.0, 1.0), scale * uniform(rng, -1.0, 1.0));
      h(r, c) = z;
      h(c, r) = std::conj(z);
    }
  }
  return h;
}

// exp(iH) by scaling and squaring of a truncated Taylor series.
inline qdisc::Matrix unitary_from(const qdisc::Matrix& h) {
  const std::size_t n = h.dim();
  qdisc::Matrix x = h;
  x *= qdisc::Complex(0.0, 1.0 / 64.0);
  qdisc::Matrix sum = qdisc::Matrix::identity(n);
  qdisc::Matrix term = qdisc::Matrix::identity(n);
  for (int k = 1; k < 20; ++k) {
    term = term * x;
    term *= 1.0 / k;
    sum += term;
  }
  for (int i = 0; i < 6; ++i) sum = sum * sum;
  return sum;
}

inline qdisc::Matrix random_density(std::mt19937_64& rng, std::size_t n) {
  const qdisc::Matrix a = random_hermitian(rng, n);
  qdisc::Matrix rho = a * qdisc::dagger(a);
  rho *= 1.0 / rho.trace().real();
  return rho;
}

}  // namespace testutil

#endif  // QDISC_TESTS_TESTUTIL_HPP

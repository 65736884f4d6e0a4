#pragma once

// Independent helpers for the unit tests: closed-form oracles and random
// inputs. Nothing here calls into the library's numerics.

#include <cmath>
#include <complex>
#include <optional>
#include <random>

#include "knotopo/error.hpp"
#include "knotopo/fock.hpp"

namespace support {

// exp(-|a|^2/2) a^n / sqrt(n!) via lgamma.
inline std::complex<double> coherent_amplitude(std::complex<double> a, int n) {
  if (n == 0) return std::exp(-0.5 * std::norm(a));
  const double mag = std::exp(-0.5 * std::norm(a) + n * std::log(std::abs(a)) - 0.5 * std::lgamma(n + 1.0));
  return std::polar(mag, n * std::arg(a));
}

// Poisson mass above n = dim - 1 for mean photon number mean.
inline double poisson_tail(double mean, int dim) {
  double kept = 0.0;
  for (int n = 0; n < dim; ++n) kept += std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
  return 1.0 - kept;
}

template <class F>
std::optional<kno::ErrorCode> code_of(F&& f) {
  try {
    f();
  } catch (const kno::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline kno::Operator random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> g;
  kno::Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = {g(rng), g(rng)};
  return kno::Operator::hermitian(0.5 * (m + m.adjoint()));
}

inline kno::StateVector random_state(int dim, std::mt19937& rng) {
  std::normal_distribution<double> g;
  kno::Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = {g(rng), g(rng)};
  return kno::StateVector(v).normalized();
}

}  // namespace support

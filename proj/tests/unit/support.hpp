#pragma once

#include <cstdint>
#include <random>

#include "lgp/numerics.hpp"

namespace lgp::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(0x1a2b3c4dULL);
  return engine;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

template <std::size_t N>
SquareMatrix<N> random_matrix() {
  SquareMatrix<N> m;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m(i, j) = {uniform(-1, 1), uniform(-1, 1)};
  return m;
}

/// Anti-Hermitian matrix with Frobenius norm `norm`.
template <std::size_t N>
SquareMatrix<N> random_anti_hermitian(double norm) {
  const auto x = random_matrix<N>();
  auto a = x - x.adjoint();
  return a * (norm / a.frobenius_norm());
}

template <std::size_t N>
SquareMatrix<N> random_unitary() {
  return matexp_skew(random_anti_hermitian<N>(uniform(0.5, 3.0)));
}

template <std::size_t N>
double distance(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
  return (a - b).frobenius_norm();
}

}  // namespace lgp::test

#include "doctest.h"
#include "support.hpp"

#include "lgp/numerics.hpp"

using namespace lgp;
using lgp::test::distance;

namespace {

// Independent reference: plain power series summed to order 30.
template <std::size_t N>
SquareMatrix<N> taylor_oracle(const SquareMatrix<N>& m) {
  auto term = SquareMatrix<N>::identity();
  auto sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * m / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

template <class M>
concept Decomposable = requires(const M& m) { pauli_decompose(m); };

}  // namespace

TEST_CASE("matexp_skew of zero is the identity") {
  CHECK(matexp_skew(Matrix2{}) == Matrix2::identity());
  CHECK(matexp_skew(Matrix3{}) == Matrix3::identity());
}

TEST_CASE("matexp_skew follows Euler's formula for a Pauli generator") {
  const Matrix2 m = kI * (kPi / 2) * pauli::x();
  CHECK(distance(matexp_skew(m), kI * pauli::x()) < 1e-14);
}

TEST_CASE_TEMPLATE("matexp_skew matches the order-30 Taylor oracle", T, std::integral_constant<std::size_t, 2>,
                   std::integral_constant<std::size_t, 3>) {
  constexpr std::size_t n = T::value;
  for (int trial = 0; trial < 500; ++trial) {
    const auto m = test::random_anti_hermitian<n>(test::uniform(0.0, 1.0));
    CHECK(distance(matexp_skew(m), taylor_oracle(m)) < 1e-13);
  }
}

TEST_CASE_TEMPLATE("matexp_skew is unitary and inverts under negation up to norm 10", T,
                   std::integral_constant<std::size_t, 2>, std::integral_constant<std::size_t, 3>) {
  constexpr std::size_t n = T::value;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = test::random_anti_hermitian<n>(test::uniform(0.0, 10.0));
    const auto u = matexp_skew(m);
    CHECK(unitarity_residual(u) <= 1e-12);
    CHECK(distance(u * matexp_skew(-m), SquareMatrix<n>::identity()) <= 1e-12);
  }
}

TEST_CASE("matexp_skew rejects matrices that are not anti-Hermitian") {
  const Matrix2 hermitian = pauli::x();
  CHECK_THROWS_AS(matexp_skew(hermitian), Error);
  try {
    matexp_skew(hermitian);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_anti_hermitian);
  }
  Matrix3 bad;
  bad(0, 0) = Complex(0.0, std::nan(""));
  CHECK_THROWS_AS(matexp_skew(bad), Error);

  // Tolerance scales with the norm: a tiny Hermitian part on a large generator passes.
  Matrix2 big = kI * 100.0 * pauli::z();
  big(0, 1) += 1e-9;
  CHECK_NOTHROW(matexp_skew(big));
}

TEST_CASE("pauli_decompose on basis elements") {
  const auto y = pauli_decompose(pauli::y());
  CHECK(y.as_array() == std::array<Complex, 4>{0.0, 0.0, 1.0, 0.0});

  const auto a_phi = pauli_decompose(-kI * pauli::z());
  CHECK(std::abs(a_phi.c3 - (-kI)) < 1e-15);
  CHECK(std::abs(a_phi.c0) + std::abs(a_phi.c1) + std::abs(a_phi.c2) < 1e-15);
}

TEST_CASE("pauli_decompose round trip and linearity") {
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = test::random_matrix<2>();
    CHECK(distance(pauli_decompose(m).recompose(), m) <= 1e-14);

    const auto other = test::random_matrix<2>();
    const Complex a{test::uniform(-2, 2), test::uniform(-2, 2)};
    const Complex b{test::uniform(-2, 2), test::uniform(-2, 2)};
    const auto lhs = pauli_decompose(a * m + b * other).as_array();
    const auto cm = pauli_decompose(m).as_array();
    const auto co = pauli_decompose(other).as_array();
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(lhs[k] - (a * cm[k] + b * co[k])) <= 1e-13);
  }
}

TEST_CASE("pauli_decompose is only defined for 2x2 matrices") {
  static_assert(Decomposable<Matrix2>);
  static_assert(!Decomposable<Matrix3>);
  CHECK_THROWS_AS((Matrix2{{1.0, 2.0, 3.0}, {4.0, 5.0}}), Error);
}

TEST_CASE("unitarity_residual") {
  CHECK(unitarity_residual(Matrix2::identity()) == 0.0);
  CHECK(unitarity_residual(Matrix3::identity()) == 0.0);
  CHECK(unitarity_residual(Matrix2::identity() * 2.0) == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(unitarity_residual(test::random_unitary<3>()) < 1e-13);
}

#pragma once

// Fixed-dimension (2x2 / 3x3) complex matrix algebra used by every other
// module: Pauli basis, skew-Hermitian exponential, residual norms.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>

#include "lgp/error.hpp"

namespace lgp {

using Complex = std::complex<double>;
inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <std::size_t N>
concept SupportedDim = (N == 2 || N == 3);

template <std::size_t N>
using Vector = std::array<Complex, N>;

/// Complex product without the inf/nan recovery of std::complex operator*.
constexpr Complex cmul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

/// Dense row-major N x N complex matrix, N in {2, 3}. Default-constructed
/// matrices are zero.
template <std::size_t N>
  requires SupportedDim<N>
class SquareMatrix {
 public:
  static constexpr std::size_t dim = N;

  constexpr SquareMatrix() = default;

  explicit constexpr SquareMatrix(const std::array<Complex, N * N>& entries) : a_(entries) {}

  /// Row-wise construction, e.g. `Matrix2{{0, 1}, {1, 0}}`.
  SquareMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    if (rows.size() != N) throw Error(Errc::dimension_mismatch, "row count");
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != N) throw Error(Errc::dimension_mismatch, "column count");
      std::copy(row.begin(), row.end(), a_.begin() + i * N);
      ++i;
    }
  }

  static constexpr SquareMatrix identity() {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static constexpr SquareMatrix diagonal(const Vector<N>& d) {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  /// |u><v|
  static constexpr SquareMatrix outer(const Vector<N>& u, const Vector<N>& v) {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = cmul(u[i], std::conj(v[j]));
    return m;
  }

  constexpr Complex& operator()(std::size_t i, std::size_t j) { return a_[i * N + j]; }
  constexpr const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * N + j]; }

  constexpr const std::array<Complex, N * N>& entries() const { return a_; }

  constexpr Vector<N> column(std::size_t j) const {
    Vector<N> c;
    for (std::size_t i = 0; i < N; ++i) c[i] = (*this)(i, j);
    return c;
  }

  constexpr SquareMatrix adjoint() const {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
  }

  constexpr Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  bool is_finite() const {
    return std::all_of(a_.begin(), a_.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  }

  constexpr SquareMatrix& operator+=(const SquareMatrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) a_[k] += o.a_[k];
    return *this;
  }
  constexpr SquareMatrix& operator-=(const SquareMatrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) a_[k] -= o.a_[k];
    return *this;
  }
  constexpr SquareMatrix& operator*=(Complex s) {
    for (auto& z : a_) z = cmul(z, s);
    return *this;
  }
  constexpr SquareMatrix& operator/=(Complex s) {
    for (auto& z : a_) z /= s;
    return *this;
  }
  constexpr SquareMatrix& operator*=(double s) {
    for (auto& z : a_) z *= s;
    return *this;
  }

  friend constexpr SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
  friend constexpr SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
  friend constexpr SquareMatrix operator-(SquareMatrix a) { return a *= -1.0; }
  friend constexpr SquareMatrix operator*(SquareMatrix a, Complex s) { return a *= s; }
  friend constexpr SquareMatrix operator*(Complex s, SquareMatrix a) { return a *= s; }
  friend constexpr SquareMatrix operator*(SquareMatrix a, double s) { return a *= s; }
  friend constexpr SquareMatrix operator*(double s, SquareMatrix a) { return a *= s; }
  friend constexpr SquareMatrix operator/(SquareMatrix a, Complex s) { return a /= s; }
  friend constexpr SquareMatrix operator/(SquareMatrix a, double s) { return a *= (1.0 / s); }

  // Products are spelled out in real arithmetic (see cmul); the library
  // recovery path of std::complex operator* dominates 3x3 kernels.
  friend constexpr SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix c;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
          const Complex x = a(i, k), y = b(k, j);
          re += x.real() * y.real() - x.imag() * y.imag();
          im += x.real() * y.imag() + x.imag() * y.real();
        }
        c(i, j) = {re, im};
      }
    return c;
  }

  friend constexpr Vector<N> operator*(const SquareMatrix& a, const Vector<N>& v) {
    Vector<N> r{};
    for (std::size_t i = 0; i < N; ++i) {
      double re = 0.0, im = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        const Complex x = a(i, j), y = v[j];
        re += x.real() * y.real() - x.imag() * y.imag();
        im += x.real() * y.imag() + x.imag() * y.real();
      }
      r[i] = {re, im};
    }
    return r;
  }

  friend constexpr bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::array<Complex, N * N> a_{};
};

using Matrix2 = SquareMatrix<2>;
using Matrix3 = SquareMatrix<3>;

template <std::size_t N>
SquareMatrix<N> commutator(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
  return a * b - b * a;
}

namespace pauli {
inline Matrix2 identity() { return Matrix2::identity(); }
inline Matrix2 x() { return Matrix2{{0.0, 1.0}, {1.0, 0.0}}; }
inline Matrix2 y() { return Matrix2{{0.0, -kI}, {kI, 0.0}}; }
inline Matrix2 z() { return Matrix2{{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

/// Coefficients of I, sigma_x, sigma_y, sigma_z.
struct PauliCoefficients {
  Complex c0{}, c1{}, c2{}, c3{};

  Matrix2 recompose() const {
    return c0 * pauli::identity() + c1 * pauli::x() + c2 * pauli::y() + c3 * pauli::z();
  }

  std::array<Complex, 4> as_array() const { return {c0, c1, c2, c3}; }
};

/// c_k = tr(sigma_k M) / 2.
PauliCoefficients pauli_decompose(const Matrix2& m);

/// ||U^dagger U - I||_F
template <std::size_t N>
double unitarity_residual(const SquareMatrix<N>& u) {
  return (u.adjoint() * u - SquareMatrix<N>::identity()).frobenius_norm();
}

/// ||M + M^dagger||_F
template <std::size_t N>
double anti_hermiticity_residual(const SquareMatrix<N>& m) {
  return (m + m.adjoint()).frobenius_norm();
}

/// ||M - M^dagger||_F
template <std::size_t N>
double hermiticity_residual(const SquareMatrix<N>& m) {
  return (m - m.adjoint()).frobenius_norm();
}

/// Largest off-diagonal modulus, used for "is diagonal" checks.
template <std::size_t N>
double off_diagonal_residual(const SquareMatrix<N>& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

namespace detail {
// Taylor order and scaling threshold: theta^(m+1)/(m+1)! < 5e-17 at m = 8.
inline constexpr int kTaylorOrder = 8;
inline constexpr double kScalingThreshold = 0.0625;
}  // namespace detail

/// exp(M) for anti-Hermitian M by scaling and squaring around a fixed-order
/// Taylor polynomial. Throws NotAntiHermitian when
/// ||M + M^dagger||_F > 1e-10 max(1, ||M||_F) or M has non-finite entries.
template <std::size_t N>
SquareMatrix<N> matexp_skew(const SquareMatrix<N>& m) {
  const double norm = m.frobenius_norm();
  const double skew = anti_hermiticity_residual(m);
  if (!(skew <= 1e-10 * std::max(1.0, norm)))
    throw Error(Errc::not_anti_hermitian, "||M + M^dagger||_F = " + std::to_string(skew));

  int squarings = 0;
  if (norm > detail::kScalingThreshold)
    squarings = static_cast<int>(std::ceil(std::log2(norm / detail::kScalingThreshold)));
  const SquareMatrix<N> scaled = m * std::ldexp(1.0, -squarings);

  const auto id = SquareMatrix<N>::identity();
  SquareMatrix<N> e = id;
  for (int k = detail::kTaylorOrder; k >= 1; --k) {
    e = scaled * e;
    e *= 1.0 / static_cast<double>(k);
    e += id;
  }
  for (int s = 0; s < squarings; ++s) e = e * e;
  return e;
}

}  // namespace lgp

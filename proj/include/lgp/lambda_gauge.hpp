#pragma once

// Geometry of the three-level Lambda system: the diagonalizing frame, its
// gauge connection, the large-detuning limit, curvature, and the spin-1/2
// monopole reference problem.
//
// Convention: A_mu := Gamma^dagger d_mu Gamma (anti-Hermitian). Parallel
// transport solves dW/ds = -A(s) W, so a holonomy is P exp(-oint A).

#include <array>
#include <optional>
#include <string>

#include "lgp/numerics.hpp"

namespace lgp {

/// Frame coordinates. theta in [0, pi/2], gamma in [0, pi/4], phi periodic.
struct MixingAngles {
  double theta = 0.0;
  double phi = 0.0;
  double gamma = 0.0;

  bool in_range() const;
  /// Throws InvalidParams when out of range.
  static MixingAngles checked(double theta, double phi, double gamma);
};

/// Detuning, effective Rabi frequency and optional excited-state linewidth,
/// all in the same angular-frequency unit (hbar = 1).
class LambdaParams {
 public:
  LambdaParams(double delta, double omega, std::optional<double> decay = std::nullopt);

  double delta() const { return delta_; }
  double omega() const { return omega_; }
  const std::optional<double>& decay() const { return decay_; }
  double generalized_rabi() const;  // sqrt(delta^2 + omega^2)

 private:
  double delta_;
  double omega_;
  std::optional<double> decay_;
};

/// Eigenvalues paired with the frame columns: dark state, near-dark state
/// E- = (delta - R)/2 and far-detuned state E+ = (delta + R)/2.
struct LambdaSpectrum {
  double dark = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

double gamma_angle(const LambdaParams& params);
LambdaSpectrum spectrum(const LambdaParams& params);

/// Column order inside the near-degenerate doublet. `printed` keeps the
/// frame's columns as written; `swapped` exchanges columns 1 and 2, which
/// maps the computed doublet connection onto the large-detuning closed forms.
enum class DoubletOrder { printed, swapped };

Matrix3 frame_matrix(const MixingAngles& angles);

struct FrameDerivatives {
  Matrix3 d_theta;
  Matrix3 d_phi;
};
FrameDerivatives frame_derivatives(const MixingAngles& angles);

template <std::size_t N>
struct Connection {
  SquareMatrix<N> a_theta;
  SquareMatrix<N> a_phi;
};
using ConnectionSample = Connection<2>;
using FullConnection = Connection<3>;

/// Doublet block of Gamma^dagger d Gamma at fixed gamma.
ConnectionSample connection(const MixingAngles& angles, DoubletOrder order = DoubletOrder::printed);
/// The whole 3x3 Gamma^dagger d Gamma (pure gauge).
FullConnection full_connection(const MixingAngles& angles);

/// A_theta = i cos(phi) s_y + i sin(phi) s_x,
/// A_phi = -i sin^2(theta) s_z + i sin cos cos(phi) s_x - i sin cos sin(phi) s_y.
ConnectionSample large_detuning_connection(double theta, double phi);

/// Spectrally reconstructed Hamiltonian Gamma diag(0, E-, E+) Gamma^dagger.
Matrix3 reconstruct_hamiltonian(const LambdaParams& params, double theta, double phi);

// ---------------------------------------------------------------------------
// Connection fields

/// A connection evaluable anywhere in (theta, phi). Implementations are
/// immutable and safe to share between threads.
template <std::size_t N>
class GaugeField {
 public:
  virtual ~GaugeField() = default;
  virtual Connection<N> at(double theta, double phi) const = 0;
  /// d_theta A_phi - d_phi A_theta when known in closed form.
  virtual std::optional<SquareMatrix<N>> exterior_derivative(double /*theta*/, double /*phi*/) const {
    return std::nullopt;
  }
  virtual std::string name() const = 0;
};

class LambdaDoubletField final : public GaugeField<2> {
 public:
  explicit LambdaDoubletField(double gamma, DoubletOrder order = DoubletOrder::printed)
      : gamma_(gamma), order_(order) {}
  ConnectionSample at(double theta, double phi) const override;
  std::optional<Matrix2> exterior_derivative(double theta, double phi) const override;
  std::string name() const override { return "lambda-doublet"; }

 private:
  double gamma_;
  DoubletOrder order_;
};

class LambdaFullField final : public GaugeField<3> {
 public:
  explicit LambdaFullField(double gamma) : gamma_(gamma) {}
  FullConnection at(double theta, double phi) const override;
  std::optional<Matrix3> exterior_derivative(double theta, double phi) const override;
  std::string name() const override { return "lambda-full"; }

 private:
  double gamma_;
};

class LargeDetuningField final : public GaugeField<2> {
 public:
  ConnectionSample at(double theta, double phi) const override;
  std::optional<Matrix2> exterior_derivative(double theta, double phi) const override;
  std::string name() const override { return "large-detuning"; }
};

/// Diagonal surrogate: A_theta = 0, A_phi = -i sin^2(theta) s_z.
class AbelianTestField final : public GaugeField<2> {
 public:
  ConnectionSample at(double theta, double phi) const override;
  std::optional<Matrix2> exterior_derivative(double theta, double phi) const override;
  std::string name() const override { return "abelian"; }
};

template <std::size_t N>
class ZeroField final : public GaugeField<N> {
 public:
  Connection<N> at(double, double) const override { return {}; }
  std::optional<SquareMatrix<N>> exterior_derivative(double, double) const override {
    return SquareMatrix<N>{};
  }
  std::string name() const override { return "zero"; }
};

inline constexpr double kCurvatureStep = 1e-5;

/// d_theta A_phi - d_phi A_theta by central differences.
template <std::size_t N>
SquareMatrix<N> exterior_derivative_fd(const GaugeField<N>& field, double theta, double phi,
                                       double step = kCurvatureStep) {
  const auto tp = field.at(theta + step, phi);
  const auto tm = field.at(theta - step, phi);
  const auto pp = field.at(theta, phi + step);
  const auto pm = field.at(theta, phi - step);
  return (tp.a_phi - tm.a_phi - pp.a_theta + pm.a_theta) / (2.0 * step);
}

/// F = d_theta A_phi - d_phi A_theta + [A_theta, A_phi]. Uses the field's
/// closed-form derivative when it has one.
template <std::size_t N>
SquareMatrix<N> curvature(const GaugeField<N>& field, double theta, double phi) {
  const auto a = field.at(theta, phi);
  auto d = field.exterior_derivative(theta, phi);
  const SquareMatrix<N> da = d ? *d : exterior_derivative_fd(field, theta, phi);
  return da + commutator(a.a_theta, a.a_phi);
}

/// Same as `curvature` but always by central differences.
template <std::size_t N>
SquareMatrix<N> curvature_fd(const GaugeField<N>& field, double theta, double phi,
                             double step = kCurvatureStep) {
  const auto a = field.at(theta, phi);
  return exterior_derivative_fd(field, theta, phi, step) + commutator(a.a_theta, a.a_phi);
}

// ---------------------------------------------------------------------------
// Spin-1/2 in a magnetic field

class MagneticField {
 public:
  MagneticField(double bx, double by, double bz);

  double bx() const { return b_[0]; }
  double by() const { return b_[1]; }
  double bz() const { return b_[2]; }
  const std::array<double, 3>& components() const { return b_; }
  double magnitude() const { return magnitude_; }
  MagneticField scaled(double factor) const;

 private:
  std::array<double, 3> b_;
  double magnitude_;
};

/// Energy branch E = +chi B (`plus`) or -chi B (`minus`).
enum class Branch { plus, minus };

inline constexpr double kChartEpsilon = 1e-12;

Matrix2 spinhalf_hamiltonian(const MagneticField& field, double chi = 1.0);
/// The closed-form diagonalizing matrix; throws ChartSingularity when
/// B - |B_z| <= 1e-12 B.
Matrix2 spinhalf_frame(const MagneticField& field);

using RealVector3 = std::array<double, 3>;
using RealTensor3 = std::array<std::array<double, 3>, 3>;

/// (B_y, -B_x, 0) / (2B(B +- B_z)); throws ChartSingularity at the branch's pole.
RealVector3 spinhalf_adiabatic_connection(const MagneticField& field, Branch branch);
/// F_ij = -+ eps_ijk B_k / (2 B^3).
RealTensor3 spinhalf_curvature(const MagneticField& field, Branch branch);
/// Central-difference curl of spinhalf_adiabatic_connection with step
/// rel_step * B.
RealTensor3 spinhalf_curvature_fd(const MagneticField& field, Branch branch, double rel_step = 1e-6);

}  // namespace lgp

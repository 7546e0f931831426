#include "lgp/lambda_gauge.hpp"

#include <cmath>
#include <sstream>

namespace lgp {

namespace {

Matrix2 doublet_block(const Matrix3& m) {
  return Matrix2{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}};
}

// Exchanging the doublet columns conjugates the doublet block by sigma_x.
Matrix2 reorder(const Matrix2& m, DoubletOrder order) {
  if (order == DoubletOrder::printed) return m;
  return Matrix2{{m(1, 1), m(1, 0)}, {m(0, 1), m(0, 0)}};
}

void require(bool ok, Errc code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace

bool MixingAngles::in_range() const {
  return std::isfinite(theta) && std::isfinite(phi) && std::isfinite(gamma) && theta >= 0.0 &&
         theta <= kPi / 2 && gamma >= 0.0 && gamma <= kPi / 4;
}

MixingAngles MixingAngles::checked(double theta, double phi, double gamma) {
  MixingAngles a{theta, phi, gamma};
  if (!a.in_range()) {
    std::ostringstream os;
    os << "mixing angles out of range: theta=" << theta << " phi=" << phi << " gamma=" << gamma;
    throw Error(Errc::invalid_params, os.str());
  }
  return a;
}

LambdaParams::LambdaParams(double delta, double omega, std::optional<double> decay)
    : delta_(delta), omega_(omega), decay_(decay) {
  require(std::isfinite(omega) && omega > 0.0, Errc::invalid_params, "omega must be > 0");
  require(std::isfinite(delta) && delta >= 0.0, Errc::invalid_params, "delta must be >= 0");
  if (decay_) require(std::isfinite(*decay_) && *decay_ >= 0.0, Errc::invalid_params, "decay must be >= 0");
}

double LambdaParams::generalized_rabi() const { return std::hypot(delta_, omega_); }

double gamma_angle(const LambdaParams& p) {
  // (R - delta)/omega rewritten as omega/(R + delta): no cancellation at large delta.
  return std::atan(p.omega() / (p.generalized_rabi() + p.delta()));
}

LambdaSpectrum spectrum(const LambdaParams& p) {
  const double r = p.generalized_rabi();
  return {0.0, -p.omega() * p.omega() / (2.0 * (p.delta() + r)), 0.5 * (p.delta() + r)};
}

Matrix3 frame_matrix(const MixingAngles& a) {
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double sg = std::sin(a.gamma), cg = std::cos(a.gamma);
  const Complex ep = std::polar(1.0, a.phi);
  const Complex em = std::conj(ep);
  return Matrix3{
      {ct, -st * em, 0.0},
      {st * cg * ep, ct * cg, -sg},
      {st * sg * ep, ct * sg, cg},
  };
}

FrameDerivatives frame_derivatives(const MixingAngles& a) {
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double sg = std::sin(a.gamma), cg = std::cos(a.gamma);
  const Complex ep = std::polar(1.0, a.phi);
  const Complex em = std::conj(ep);
  FrameDerivatives d;
  d.d_theta = Matrix3{
      {-st, -ct * em, 0.0},
      {ct * cg * ep, -st * cg, 0.0},
      {ct * sg * ep, -st * sg, 0.0},
  };
  d.d_phi = Matrix3{
      {0.0, kI * st * em, 0.0},
      {kI * st * cg * ep, 0.0, 0.0},
      {kI * st * sg * ep, 0.0, 0.0},
  };
  return d;
}

FullConnection full_connection(const MixingAngles& angles) {
  const Matrix3 g_dag = frame_matrix(angles).adjoint();
  const auto d = frame_derivatives(angles);
  return {g_dag * d.d_theta, g_dag * d.d_phi};
}

ConnectionSample connection(const MixingAngles& angles, DoubletOrder order) {
  const auto full = full_connection(angles);
  return {reorder(doublet_block(full.a_theta), order), reorder(doublet_block(full.a_phi), order)};
}

ConnectionSample large_detuning_connection(double theta, double phi) {
  const double s = std::sin(theta), c = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  ConnectionSample a;
  a.a_theta = kI * (cp * pauli::y() + sp * pauli::x());
  a.a_phi = kI * (-s * s * pauli::z() + s * c * cp * pauli::x() - s * c * sp * pauli::y());
  return a;
}

Matrix3 reconstruct_hamiltonian(const LambdaParams& params, double theta, double phi) {
  const Matrix3 g = frame_matrix({theta, phi, gamma_angle(params)});
  const auto e = spectrum(params);
  return Matrix3::outer(g.column(1), g.column(1)) * e.lower + Matrix3::outer(g.column(2), g.column(2)) * e.upper;
}

// ---------------------------------------------------------------------------

namespace {

// d_theta A_phi - d_phi A_theta for A = Gamma^dagger dGamma; the mixed second
// derivatives cancel.
Matrix3 frame_exterior_derivative(const MixingAngles& angles) {
  const auto d = frame_derivatives(angles);
  return d.d_theta.adjoint() * d.d_phi - d.d_phi.adjoint() * d.d_theta;
}

}  // namespace

ConnectionSample LambdaDoubletField::at(double theta, double phi) const {
  return connection({theta, phi, gamma_}, order_);
}

std::optional<Matrix2> LambdaDoubletField::exterior_derivative(double theta, double phi) const {
  return reorder(doublet_block(frame_exterior_derivative({theta, phi, gamma_})), order_);
}

FullConnection LambdaFullField::at(double theta, double phi) const {
  return full_connection({theta, phi, gamma_});
}

std::optional<Matrix3> LambdaFullField::exterior_derivative(double theta, double phi) const {
  return frame_exterior_derivative({theta, phi, gamma_});
}

ConnectionSample LargeDetuningField::at(double theta, double phi) const {
  return large_detuning_connection(theta, phi);
}

std::optional<Matrix2> LargeDetuningField::exterior_derivative(double theta, double phi) const {
  const double s2 = std::sin(2.0 * theta), c2 = std::cos(2.0 * theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const Matrix2 dtheta_aphi = kI * (-s2 * pauli::z() + c2 * cp * pauli::x() - c2 * sp * pauli::y());
  const Matrix2 dphi_atheta = kI * (-sp * pauli::y() + cp * pauli::x());
  return dtheta_aphi - dphi_atheta;
}

ConnectionSample AbelianTestField::at(double theta, double) const {
  const double s = std::sin(theta);
  return {Matrix2{}, -kI * s * s * pauli::z()};
}

std::optional<Matrix2> AbelianTestField::exterior_derivative(double theta, double) const {
  return -kI * std::sin(2.0 * theta) * pauli::z();
}

// ---------------------------------------------------------------------------

MagneticField::MagneticField(double bx, double by, double bz) : b_{bx, by, bz} {
  magnitude_ = std::sqrt(bx * bx + by * by + bz * bz);
  require(std::isfinite(magnitude_) && magnitude_ > 0.0, Errc::invalid_params, "field magnitude must be > 0");
}

MagneticField MagneticField::scaled(double f) const { return {f * b_[0], f * b_[1], f * b_[2]}; }

Matrix2 spinhalf_hamiltonian(const MagneticField& f, double chi) {
  return chi * (f.bx() * pauli::x() + f.by() * pauli::y() + f.bz() * pauli::z());
}

Matrix2 spinhalf_frame(const MagneticField& f) {
  const double b = f.magnitude(), bz = f.bz();
  if (b - std::abs(bz) <= kChartEpsilon * b)
    throw Error(Errc::chart_singularity, "field along the z axis: the frame divides by sqrt(B -+ Bz)");
  const double up = std::sqrt(b + bz), down = std::sqrt(b - bz);
  const Complex bt{f.bx(), f.by()};
  const double norm = 1.0 / std::sqrt(2.0 * b);
  return Matrix2{{up, down}, {bt / up, -bt / down}} * norm;
}

RealVector3 spinhalf_adiabatic_connection(const MagneticField& f, Branch branch) {
  const double b = f.magnitude();
  const double chart = branch == Branch::plus ? b + f.bz() : b - f.bz();
  if (chart <= kChartEpsilon * b)
    throw Error(Errc::chart_singularity,
                branch == Branch::plus ? "branch + excludes the -z pole" : "branch - excludes the +z pole");
  const double denom = 2.0 * b * chart;
  return {f.by() / denom, -f.bx() / denom, 0.0};
}

RealTensor3 spinhalf_curvature(const MagneticField& f, Branch branch) {
  const double b = f.magnitude();
  const double sign = branch == Branch::plus ? -1.0 : 1.0;
  const double scale = sign / (2.0 * b * b * b);
  const auto& v = f.components();
  RealTensor3 t{};
  t[0][1] = scale * v[2];
  t[1][0] = -t[0][1];
  t[1][2] = scale * v[0];
  t[2][1] = -t[1][2];
  t[2][0] = scale * v[1];
  t[0][2] = -t[2][0];
  return t;
}

RealTensor3 spinhalf_curvature_fd(const MagneticField& f, Branch branch, double rel_step) {
  const double h = rel_step * f.magnitude();
  // grad[i][j] = d A_j / d m_i
  RealTensor3 grad{};
  for (std::size_t i = 0; i < 3; ++i) {
    auto plus = f.components(), minus = f.components();
    plus[i] += h;
    minus[i] -= h;
    const auto ap = spinhalf_adiabatic_connection({plus[0], plus[1], plus[2]}, branch);
    const auto am = spinhalf_adiabatic_connection({minus[0], minus[1], minus[2]}, branch);
    for (std::size_t j = 0; j < 3; ++j) grad[i][j] = (ap[j] - am[j]) / (2.0 * h);
  }
  RealTensor3 t{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) t[i][j] = grad[i][j] - grad[j][i];
  return t;
}

}  // namespace lgp

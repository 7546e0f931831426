#include "lgp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lgp {

namespace {

// Frame-resolved Hamiltonian pieces at fixed (delta, omega).
struct FrameHamiltonian {
  double gamma;
  LambdaSpectrum energies;
  double decay;

  explicit FrameHamiltonian(const LambdaParams& p)
      : gamma(gamma_angle(p)), energies(spectrum(p)), decay(p.decay().value_or(0.0)) {}

  Matrix3 frame(const ParamPoint& x) const { return frame_matrix({x.theta, x.phi, gamma}); }

  Matrix3 hermitian_part(const Matrix3& g) const {
    const auto near = g.column(1), far = g.column(2);
    return Matrix3::outer(near, near) * energies.lower + Matrix3::outer(far, far) * energies.upper;
  }
};

Complex inner(const Vector<3>& a, const Vector<3>& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

LoopSchedule::LoopSchedule(LoopSpec spec, double duration) : spec_(std::move(spec)), duration_(duration) {
  validate(spec_);
  if (!(std::isfinite(duration) && duration > 0.0)) throw Error(Errc::invalid_params, "duration must be > 0");
}

ParamPoint LoopSchedule::at(double t) const {
  if (!(t >= 0.0 && t <= duration_)) throw Error(Errc::invalid_time, "t outside [0, T]: " + std::to_string(t));
  return point_at(spec_, t / duration_);
}

QuantumState QuantumState::basis(std::size_t k) {
  QuantumState s;
  s.amplitudes.at(k) = 1.0;
  return s;
}

double QuantumState::norm() const {
  return std::sqrt(std::norm(amplitudes[0]) + std::norm(amplitudes[1]) + std::norm(amplitudes[2]));
}

std::array<double, 3> populations(const QuantumState& psi) {
  return {std::norm(psi.amplitudes[0]), std::norm(psi.amplitudes[1]), std::norm(psi.amplitudes[2])};
}

Matrix3 hamiltonian_at(const LoopSchedule& schedule, const LambdaParams& params, double t) {
  const FrameHamiltonian fh(params);
  const Matrix3 g = fh.frame(schedule.at(t));
  Matrix3 h = fh.hermitian_part(g);
  if (fh.decay > 0.0) h -= kI * (0.5 * fh.decay) * Matrix3::outer(g.column(2), g.column(2));
  return h;
}

double max_time_step(const LambdaParams& params) { return 0.01 / params.generalized_rabi(); }

EvolutionResult evolve(const LoopSchedule& schedule, const LambdaParams& params, const QuantumState& psi0,
                       double dt) {
  const double limit = max_time_step(params);
  if (!(std::isfinite(dt) && dt > 0.0) || dt > limit * (1.0 + 1e-12))
    throw Error(Errc::step_too_large, "dt = " + std::to_string(dt) + " exceeds 0.01/sqrt(delta^2+omega^2) = " +
                                          std::to_string(limit));
  if (!(std::abs(psi0.norm() - 1.0) <= 1e-10)) throw Error(Errc::not_normalized, "initial state norm != 1");

  const FrameHamiltonian fh(params);
  const double total = schedule.duration();
  const auto steps = static_cast<std::size_t>(std::ceil(total / dt));
  const double h = total / static_cast<double>(steps);
  const double survival = std::exp(-0.5 * fh.decay * h);

  EvolutionResult r;
  r.steps = steps;
  r.min_gap = fh.energies.upper - fh.energies.lower;
  Vector<3> psi = psi0.amplitudes;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t_mid = (static_cast<double>(k) + 0.5) * h;
    const Matrix3 g = fh.frame(schedule.at(t_mid));
    Matrix3 u = matexp_skew((-kI * h) * fh.hermitian_part(g));
    if (fh.decay > 0.0) {
      // The decay projector commutes with the Hermitian part.
      const auto far = g.column(2);
      u = (Matrix3::identity() - (1.0 - survival) * Matrix3::outer(far, far)) * u;
    }
    psi = u * psi;
    const double n = std::sqrt(std::norm(psi[0]) + std::norm(psi[1]) + std::norm(psi[2]));
    r.norm_drift = std::max(r.norm_drift, std::abs(n - 1.0));
  }
  r.final_state.amplitudes = psi;
  r.populations = populations(r.final_state);
  return r;
}

double doublet_leakage(const LambdaParams& params, const ParamPoint& p, const QuantumState& psi) {
  const Matrix3 g = frame_matrix({p.theta, p.phi, gamma_angle(params)});
  return std::norm(inner(g.column(2), psi.amplitudes));
}

AdiabaticityReport adiabaticity_report(const LoopSchedule& schedule, const LambdaParams& params, double dt,
                                       const QuantumState& psi0) {
  AdiabaticityReport rep;
  rep.evolution = evolve(schedule, params, psi0, dt);
  rep.leakage = doublet_leakage(params, schedule.at(schedule.duration()), rep.evolution.final_state);
  rep.dynamical_phase_bound = std::abs(spectrum(params).lower) * schedule.duration();
  rep.min_gap = rep.evolution.min_gap;
  rep.non_adiabatic = rep.leakage > kLeakageThreshold;
  return rep;
}

}  // namespace lgp

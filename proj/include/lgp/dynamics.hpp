#pragma once

// Direct Schroedinger evolution of the three-level system driven around a
// parameter loop.

#include <array>
#include <cstddef>

#include "lgp/holonomy.hpp"
#include "lgp/lambda_gauge.hpp"

namespace lgp {

/// Uniform traversal t -> point_at(spec, t / duration), t in [0, duration].
class LoopSchedule {
 public:
  LoopSchedule(LoopSpec spec, double duration);

  const LoopSpec& spec() const { return spec_; }
  double duration() const { return duration_; }
  /// Throws InvalidTime outside [0, duration].
  ParamPoint at(double t) const;

 private:
  LoopSpec spec_;
  double duration_;
};

/// Amplitudes in the fixed atomic basis.
struct QuantumState {
  Vector<3> amplitudes{};

  static QuantumState basis(std::size_t k);
  double norm() const;
};

std::array<double, 3> populations(const QuantumState& psi);

struct EvolutionResult {
  QuantumState final_state;
  std::array<double, 3> populations{};
  /// max_t | ||psi(t)|| - 1 |
  double norm_drift = 0.0;
  /// smallest |E+ - E-| seen along the path
  double min_gap = 0.0;
  std::size_t steps = 0;
};

/// reconstruct_hamiltonian at the scheduled point. With a decay rate set,
/// -i decay/2 is added on the far-detuned eigenprojector.
Matrix3 hamiltonian_at(const LoopSchedule& schedule, const LambdaParams& params, double t);

/// Largest accepted time step: 0.01 / sqrt(delta^2 + omega^2).
double max_time_step(const LambdaParams& params);

/// Exponential-midpoint propagation psi <- exp(-i H(t_mid) dt) psi. The step
/// is shrunk so that it divides the duration. Throws StepTooLarge and
/// NotNormalized.
EvolutionResult evolve(const LoopSchedule& schedule, const LambdaParams& params, const QuantumState& psi0,
                       double dt);

struct AdiabaticityReport {
  /// Final population on the far-detuned frame state.
  double leakage = 0.0;
  /// |E-| T, the dynamical phase the near-dark state can accumulate.
  double dynamical_phase_bound = 0.0;
  double min_gap = 0.0;
  bool non_adiabatic = false;
  EvolutionResult evolution;
};

inline constexpr double kLeakageThreshold = 0.01;

AdiabaticityReport adiabaticity_report(const LoopSchedule& schedule, const LambdaParams& params, double dt,
                                       const QuantumState& psi0 = QuantumState::basis(0));

/// Doublet leakage of `psi` at parameter point `p`.
double doublet_leakage(const LambdaParams& params, const ParamPoint& p, const QuantumState& psi);

}  // namespace lgp

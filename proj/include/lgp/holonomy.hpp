#pragma once

// Closed paths in (theta, phi) and the path-ordered Wilson loop.

#include <cstddef>
#include <variant>
#include <vector>

#include "lgp/lambda_gauge.hpp"
#include "lgp/numerics.hpp"

namespace lgp {

struct ParamPoint {
  double theta = 0.0;
  double phi = 0.0;

  friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
};

/// theta = theta0, phi = 0 .. 2 pi.
struct Circle {
  double theta0 = kPi / 4;
};

/// theta(s) = theta_amp alpha sin^2(pi s),
/// phi(s)   = phi_amp sin(2 pi s + 2 pi beta + phase_offset).
/// Starts and ends on the dark-state pole theta = 0.
struct Lissajous {
  double alpha = 0.8;
  double beta = 0.5;
  double theta_amp = kPi / 2;
  double phi_amp = kPi;
  double phase_offset = 0.0;
};

/// A degenerate loop parked at one point.
struct Stationary {
  double theta = 0.0;
  double phi = 0.0;
};

struct LoopSpec;

/// Loops traversed one after another, each for an equal share of the path
/// parameter.
struct Composite {
  std::vector<LoopSpec> parts;
};

struct LoopSpec {
  std::variant<Circle, Lissajous, Stationary, Composite> shape;
};

/// Throws InvalidSpec on range violations.
void validate(const LoopSpec& spec);

/// Point on the continuous curve, s in [0, 1].
ParamPoint point_at(const LoopSpec& spec, double s);

/// phi difference reduced to (-pi, pi].
double wrap_angle(double dphi);

/// Two points coincide when theta agrees exactly and phi agrees mod 2 pi.
bool same_point(const ParamPoint& a, const ParamPoint& b);

/// Ordered samples of a path. When `closed` is set the last sample must
/// coincide with the first.
class ParamLoop {
 public:
  ParamLoop(std::vector<ParamPoint> samples, bool closed = true);

  const std::vector<ParamPoint>& samples() const { return samples_; }
  bool closed() const { return closed_; }
  std::size_t size() const { return samples_.size(); }
  std::size_t segments() const { return samples_.size() - 1; }

  /// Largest |d theta| or |d phi| over consecutive samples.
  double max_step() const;
  ParamLoop reversed() const;
  /// Each segment bisected at its parameter midpoint.
  ParamLoop refined() const;

 private:
  std::vector<ParamPoint> samples_;
  bool closed_;
};

inline constexpr double kMaxParamStep = 0.1;
inline constexpr std::size_t kMinLoopSamples = 8;

/// n >= 8 segments per elementary loop. Composite loops share junction
/// samples; when consecutive parts start at different points a straight
/// bridge is inserted (and one back to the start at the end).
ParamLoop discretize(const LoopSpec& spec, std::size_t n);

template <std::size_t N>
struct Holonomy {
  SquareMatrix<N> matrix;
  std::size_t steps = 0;
  double richardson_error = 0.0;
};

/// Ordered product of exp(-A_theta d theta - A_phi d phi) at segment
/// midpoints, later segments multiplied on the left. No closure check.
template <std::size_t N>
SquareMatrix<N> transport(const ParamLoop& path, const GaugeField<N>& field) {
  const auto& p = path.samples();
  auto u = SquareMatrix<N>::identity();
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const double dtheta = p[k + 1].theta - p[k].theta;
    const double dphi = wrap_angle(p[k + 1].phi - p[k].phi);
    if (dtheta == 0.0 && dphi == 0.0) continue;
    const auto a = field.at(p[k].theta + 0.5 * dtheta, p[k].phi + 0.5 * dphi);
    u = matexp_skew(-(a.a_theta * dtheta + a.a_phi * dphi)) * u;
  }
  return u;
}

/// Wilson loop with a one-halving Richardson estimate ||U_n - U_2n||_F.
/// Throws NotClosed for open paths and StepTooLarge when a parameter step
/// exceeds 0.1 rad.
template <std::size_t N>
Holonomy<N> wilson_loop(const ParamLoop& loop, const GaugeField<N>& field) {
  if (!loop.closed()) throw Error(Errc::not_closed, "wilson_loop needs a closed loop");
  if (loop.max_step() > kMaxParamStep)
    throw Error(Errc::step_too_large, "parameter step " + std::to_string(loop.max_step()) + " > 0.1 rad");
  Holonomy<N> h;
  h.matrix = transport(loop, field);
  h.steps = loop.segments();
  h.richardson_error = (h.matrix - transport(loop.refined(), field)).frobenius_norm();
  return h;
}

/// ||U1 U2 - U2 U1||_F
template <std::size_t N>
double loop_commutator_norm(const Holonomy<N>& u1, const Holonomy<N>& u2) {
  return commutator(u1.matrix, u2.matrix).frobenius_norm();
}

/// Omega(C) = 2 pi (1 - cos 2 theta0).
double solid_angle(double theta0);

}  // namespace lgp

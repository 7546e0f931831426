#include "lgp/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lgp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void invalid(const std::string& what) { throw Error(Errc::invalid_spec, what); }

// Appends a straight segment from `from` to `to` (both excluded / included
// respectively) with parameter steps of at most half the integrator limit.
void append_bridge(std::vector<ParamPoint>& out, ParamPoint from, ParamPoint to) {
  const double dtheta = to.theta - from.theta;
  const double dphi = wrap_angle(to.phi - from.phi);
  const double span = std::max(std::abs(dtheta), std::abs(dphi));
  const auto pieces = static_cast<std::size_t>(std::ceil(span / (0.5 * kMaxParamStep)));
  for (std::size_t k = 1; k < pieces; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(pieces);
    out.push_back({from.theta + f * dtheta, from.phi + f * dphi});
  }
  out.push_back(to);
}

std::vector<ParamPoint> sample(const LoopSpec& spec, std::size_t n);

std::vector<ParamPoint> sample_composite(const Composite& c, std::size_t n) {
  std::vector<ParamPoint> out;
  for (const auto& part : c.parts) {
    auto s = sample(part, n);
    if (out.empty()) {
      out = std::move(s);
      continue;
    }
    if (same_point(out.back(), s.front())) {
      out.insert(out.end(), s.begin() + 1, s.end());
    } else {
      append_bridge(out, out.back(), s.front());
      out.insert(out.end(), s.begin() + 1, s.end());
    }
  }
  if (!same_point(out.back(), out.front())) append_bridge(out, out.back(), out.front());
  return out;
}

std::vector<ParamPoint> sample(const LoopSpec& spec, std::size_t n) {
  return std::visit(
      overloaded{
          [&](const Circle& c) {
            std::vector<ParamPoint> out(n + 1);
            for (std::size_t k = 0; k < n; ++k)
              out[k] = {c.theta0, kTwoPi * static_cast<double>(k) / static_cast<double>(n)};
            out[n] = {c.theta0, kTwoPi};
            return out;
          },
          [&](const Lissajous&) {
            std::vector<ParamPoint> out(n + 1);
            for (std::size_t k = 0; k < n; ++k)
              out[k] = point_at(spec, static_cast<double>(k) / static_cast<double>(n));
            out[n] = out[0];
            return out;
          },
          [&](const Stationary& p) { return std::vector<ParamPoint>(n + 1, ParamPoint{p.theta, p.phi}); },
          [&](const Composite& c) { return sample_composite(c, n); },
      },
      spec.shape);
}

}  // namespace

void validate(const LoopSpec& spec) {
  std::visit(overloaded{
                 [](const Circle& c) {
                   if (!(c.theta0 > 0.0 && c.theta0 <= kPi / 2)) invalid("circle theta0 must be in (0, pi/2]");
                 },
                 [](const Lissajous& l) {
                   if (!(l.alpha > 0.0 && l.alpha <= 1.0)) invalid("lissajous alpha must be in (0, 1]");
                   if (!(l.beta >= 0.0 && l.beta <= 1.0)) invalid("lissajous beta must be in [0, 1]");
                   if (!std::isfinite(l.theta_amp) || !std::isfinite(l.phi_amp) || !std::isfinite(l.phase_offset))
                     invalid("lissajous amplitudes must be finite");
                 },
                 [](const Stationary& p) {
                   if (!std::isfinite(p.theta) || !std::isfinite(p.phi)) invalid("stationary point must be finite");
                 },
                 [](const Composite& c) {
                   if (c.parts.empty()) invalid("composite loop needs at least one part");
                   for (const auto& p : c.parts) validate(p);
                 },
             },
             spec.shape);
}

ParamPoint point_at(const LoopSpec& spec, double s) {
  return std::visit(
      overloaded{
          [&](const Circle& c) { return ParamPoint{c.theta0, kTwoPi * s}; },
          [&](const Lissajous& l) {
            // The curve is 1-periodic; map s = 1 onto s = 0 so closure is exact.
            const double u = s >= 1.0 ? s - 1.0 : s;
            const double env = std::sin(kPi * u);
            return ParamPoint{l.theta_amp * l.alpha * env * env,
                              l.phi_amp * std::sin(kTwoPi * u + kTwoPi * l.beta + l.phase_offset)};
          },
          [&](const Stationary& p) { return ParamPoint{p.theta, p.phi}; },
          [&](const Composite& c) {
            const auto count = c.parts.size();
            const double scaled = std::clamp(s, 0.0, 1.0) * static_cast<double>(count);
            const auto idx = std::min(static_cast<std::size_t>(scaled), count - 1);
            return point_at(c.parts[idx], scaled - static_cast<double>(idx));
          },
      },
      spec.shape);
}

double wrap_angle(double dphi) { return std::remainder(dphi, kTwoPi); }

bool same_point(const ParamPoint& a, const ParamPoint& b) {
  return a.theta == b.theta && wrap_angle(b.phi - a.phi) == 0.0;
}

ParamLoop::ParamLoop(std::vector<ParamPoint> samples, bool closed)
    : samples_(std::move(samples)), closed_(closed) {
  if (samples_.size() < kMinLoopSamples)
    throw Error(Errc::invalid_spec, "a loop needs at least 8 samples");
  for (const auto& p : samples_)
    if (!std::isfinite(p.theta) || !std::isfinite(p.phi)) throw Error(Errc::invalid_spec, "non-finite sample");
  if (closed_ && !same_point(samples_.front(), samples_.back()))
    throw Error(Errc::not_closed, "first and last samples differ");
}

double ParamLoop::max_step() const {
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < samples_.size(); ++k) {
    m = std::max(m, std::abs(samples_[k + 1].theta - samples_[k].theta));
    m = std::max(m, std::abs(wrap_angle(samples_[k + 1].phi - samples_[k].phi)));
  }
  return m;
}

ParamLoop ParamLoop::reversed() const {
  return ParamLoop(std::vector<ParamPoint>(samples_.rbegin(), samples_.rend()), closed_);
}

ParamLoop ParamLoop::refined() const {
  std::vector<ParamPoint> out;
  out.reserve(2 * samples_.size() - 1);
  for (std::size_t k = 0; k + 1 < samples_.size(); ++k) {
    const auto& a = samples_[k];
    const auto& b = samples_[k + 1];
    out.push_back(a);
    out.push_back({0.5 * (a.theta + b.theta), a.phi + 0.5 * wrap_angle(b.phi - a.phi)});
  }
  out.push_back(samples_.back());
  return ParamLoop(std::move(out), closed_);
}

ParamLoop discretize(const LoopSpec& spec, std::size_t n) {
  if (n < kMinLoopSamples) throw Error(Errc::invalid_spec, "discretize needs n >= 8");
  validate(spec);
  return ParamLoop(sample(spec, n), true);
}

double solid_angle(double theta0) { return kTwoPi * (1.0 - std::cos(2.0 * theta0)); }

}  // namespace lgp

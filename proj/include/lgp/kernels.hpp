#pragma once

// Data-parallel sweeps. Every kernel exists twice: `serial::` is the
// reference loop, `parallel::` the OpenMP version. Both return identical
// results for identical inputs, independent of the thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lgp/experiments.hpp"
#include "lgp/holonomy.hpp"
#include "lgp/lambda_gauge.hpp"

namespace lgp {

/// theta sampled on [theta_min, theta_max] with both ends included; phi
/// sampled on [phi_min, phi_max) periodically.
struct GridSpec {
  std::size_t n_theta = 100;
  std::size_t n_phi = 100;
  double theta_min = 0.0;
  double theta_max = kPi / 2;
  double phi_min = 0.0;
  double phi_max = kTwoPi;

  ParamPoint point(std::size_t i, std::size_t j) const;
  std::size_t size() const { return n_theta * n_phi; }
};

/// Uniform draws theta in [0, pi/2], phi in [0, 2 pi), gamma in [0, pi/4].
std::vector<MixingAngles> random_angles(std::size_t count, std::uint64_t seed);

namespace serial {

/// ||F||_F per grid cell, row-major in (theta, phi).
std::vector<double> curvature_norms(const GaugeField<2>& field, const GridSpec& grid);
double curvature_sup(const GaugeField<2>& field, const GridSpec& grid);
/// max ||A + A^dagger||_F over both components.
double connection_skew_sup(const GaugeField<2>& field, const GridSpec& grid);
double max_frame_unitarity_residual(std::span<const MixingAngles> angles);
/// Midpoint-rule flux of the spin-1/2 curvature through |B| = radius.
double monopole_flux(Branch branch, double radius, std::size_t n_polar, std::size_t n_azimuth);
std::vector<ScanRow> alpha_scan(const ExperimentConfig& config, std::span<const double> alphas, double beta);

}  // namespace serial

namespace parallel {

std::vector<double> curvature_norms(const GaugeField<2>& field, const GridSpec& grid, int workers = 0);
double curvature_sup(const GaugeField<2>& field, const GridSpec& grid, int workers = 0);
double connection_skew_sup(const GaugeField<2>& field, const GridSpec& grid, int workers = 0);
double max_frame_unitarity_residual(std::span<const MixingAngles> angles, int workers = 0);
double monopole_flux(Branch branch, double radius, std::size_t n_polar, std::size_t n_azimuth, int workers = 0);
/// Uses config.workers threads (0: OpenMP default).
std::vector<ScanRow> alpha_scan(const ExperimentConfig& config, std::span<const double> alphas, double beta);

}  // namespace parallel

}  // namespace lgp

#include "lgp/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>

namespace lgp {

namespace {

int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

double cell_curvature(const GaugeField<2>& field, const GridSpec& grid, std::size_t idx) {
  const auto p = grid.point(idx / grid.n_phi, idx % grid.n_phi);
  return curvature(field, p.theta, p.phi).frobenius_norm();
}

double cell_skew(const GaugeField<2>& field, const GridSpec& grid, std::size_t idx) {
  const auto p = grid.point(idx / grid.n_phi, idx % grid.n_phi);
  const auto a = field.at(p.theta, p.phi);
  return std::max(anti_hermiticity_residual(a.a_theta), anti_hermiticity_residual(a.a_phi));
}

// Flux through one polar ring of the sphere, summed over azimuth in order.
double flux_ring(Branch branch, double radius, std::size_t i, std::size_t n_polar, std::size_t n_azimuth) {
  const double dpolar = kPi / static_cast<double>(n_polar);
  const double dazimuth = kTwoPi / static_cast<double>(n_azimuth);
  const double polar = (static_cast<double>(i) + 0.5) * dpolar;
  double ring = 0.0;
  for (std::size_t j = 0; j < n_azimuth; ++j) {
    const double az = (static_cast<double>(j) + 0.5) * dazimuth;
    const std::array<double, 3> n{std::sin(polar) * std::cos(az), std::sin(polar) * std::sin(az), std::cos(polar)};
    const auto f = spinhalf_curvature(MagneticField(radius * n[0], radius * n[1], radius * n[2]), branch);
    // Dual vector f_k = eps_ijk F_ij / 2.
    const double dual = f[1][2] * n[0] + f[2][0] * n[1] + f[0][1] * n[2];
    ring += dual * radius * radius * std::sin(polar) * dpolar * dazimuth;
  }
  return ring;
}

void require_grid(std::span<const double> alphas) {
  if (alphas.empty()) throw Error(Errc::invalid_spec, "alpha grid is empty");
}

}  // namespace

ParamPoint GridSpec::point(std::size_t i, std::size_t j) const {
  const double ft = n_theta > 1 ? static_cast<double>(i) / static_cast<double>(n_theta - 1) : 0.0;
  const double fp = static_cast<double>(j) / static_cast<double>(n_phi);
  return {theta_min + ft * (theta_max - theta_min), phi_min + fp * (phi_max - phi_min)};
}

std::vector<MixingAngles> random_angles(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<MixingAngles> out(count);
  for (auto& a : out) {
    a.theta = unit(rng) * kPi / 2;
    a.phi = unit(rng) * kTwoPi;
    a.gamma = unit(rng) * kPi / 4;
  }
  return out;
}

namespace serial {

std::vector<double> curvature_norms(const GaugeField<2>& field, const GridSpec& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = cell_curvature(field, grid, k);
  return out;
}

double curvature_sup(const GaugeField<2>& field, const GridSpec& grid) {
  double m = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) m = std::max(m, cell_curvature(field, grid, k));
  return m;
}

double connection_skew_sup(const GaugeField<2>& field, const GridSpec& grid) {
  double m = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) m = std::max(m, cell_skew(field, grid, k));
  return m;
}

double max_frame_unitarity_residual(std::span<const MixingAngles> angles) {
  double m = 0.0;
  for (const auto& a : angles) m = std::max(m, unitarity_residual(frame_matrix(a)));
  return m;
}

double monopole_flux(Branch branch, double radius, std::size_t n_polar, std::size_t n_azimuth) {
  double total = 0.0;
  for (std::size_t i = 0; i < n_polar; ++i) total += flux_ring(branch, radius, i, n_polar, n_azimuth);
  return total;
}

std::vector<ScanRow> alpha_scan(const ExperimentConfig& config, std::span<const double> alphas, double beta) {
  require_grid(alphas);
  std::vector<ScanRow> rows;
  rows.reserve(alphas.size());
  for (double a : alphas) rows.push_back(scan_row(config, a, beta));
  return rows;
}

}  // namespace serial

namespace parallel {

std::vector<double> curvature_norms(const GaugeField<2>& field, const GridSpec& grid, int workers) {
  std::vector<double> out(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) num_threads(thread_count(workers))
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = cell_curvature(field, grid, static_cast<std::size_t>(k));
  return out;
}

double curvature_sup(const GaugeField<2>& field, const GridSpec& grid, int workers) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static) reduction(max : m) num_threads(thread_count(workers))
  for (std::ptrdiff_t k = 0; k < n; ++k) m = std::max(m, cell_curvature(field, grid, static_cast<std::size_t>(k)));
  return m;
}

double connection_skew_sup(const GaugeField<2>& field, const GridSpec& grid, int workers) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static) reduction(max : m) num_threads(thread_count(workers))
  for (std::ptrdiff_t k = 0; k < n; ++k) m = std::max(m, cell_skew(field, grid, static_cast<std::size_t>(k)));
  return m;
}

double max_frame_unitarity_residual(std::span<const MixingAngles> angles, int workers) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(angles.size());
#pragma omp parallel for schedule(static) reduction(max : m) num_threads(thread_count(workers))
  for (std::ptrdiff_t k = 0; k < n; ++k)
    m = std::max(m, unitarity_residual(frame_matrix(angles[static_cast<std::size_t>(k)])));
  return m;
}

double monopole_flux(Branch branch, double radius, std::size_t n_polar, std::size_t n_azimuth, int workers) {
  // Rings in parallel, then an ordered sum so the result matches serial:: bit for bit.
  std::vector<double> rings(n_polar);
  const auto n = static_cast<std::ptrdiff_t>(n_polar);
#pragma omp parallel for schedule(static) num_threads(thread_count(workers))
  for (std::ptrdiff_t i = 0; i < n; ++i)
    rings[static_cast<std::size_t>(i)] = flux_ring(branch, radius, static_cast<std::size_t>(i), n_polar, n_azimuth);
  double total = 0.0;
  for (double r : rings) total += r;
  return total;
}

std::vector<ScanRow> alpha_scan(const ExperimentConfig& config, std::span<const double> alphas, double beta) {
  require_grid(alphas);
  std::vector<ScanRow> rows(alphas.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(alphas.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(config.workers))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const auto k = static_cast<std::size_t>(i);
      rows[k] = scan_row(config, alphas[k], beta);
    } catch (...) {
#pragma omp critical(lgp_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace parallel

}  // namespace lgp

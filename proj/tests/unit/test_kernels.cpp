#include "doctest.h"

#include <cstring>

#include "lgp/kernels.hpp"

using namespace lgp;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("grid points") {
  const GridSpec g{};
  CHECK(g.size() == 10000);
  CHECK(g.point(0, 0) == ParamPoint{0.0, 0.0});
  CHECK(g.point(99, 0).theta == kPi / 2);
  CHECK(g.point(0, 50).phi == doctest::Approx(kPi));
}

TEST_CASE("random_angles is reproducible and in range") {
  const auto a = random_angles(1000, 42);
  const auto b = random_angles(1000, 42);
  const auto c = random_angles(1000, 43);
  CHECK(a.size() == 1000);
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].theta == b[k].theta);
    CHECK(a[k].in_range());
    differs = differs || a[k].theta != c[k].theta;
  }
  CHECK(differs);
}

TEST_CASE("parallel kernels match the serial reference bit for bit") {
  const GridSpec grid{40, 60};
  const LambdaDoubletField lambda(gamma_angle({1000.0, 1.0}));
  const AbelianTestField abelian;
  const auto angles = random_angles(5000, 11);

  for (int workers : {1, 2, 4}) {
    CAPTURE(workers);
    for (const GaugeField<2>* f : {static_cast<const GaugeField<2>*>(&lambda), static_cast<const GaugeField<2>*>(&abelian)}) {
      const auto s = serial::curvature_norms(*f, grid);
      const auto p = parallel::curvature_norms(*f, grid, workers);
      REQUIRE(s.size() == p.size());
      for (std::size_t k = 0; k < s.size(); ++k) CHECK(same_bits(s[k], p[k]));
      CHECK(same_bits(serial::curvature_sup(*f, grid), parallel::curvature_sup(*f, grid, workers)));
      CHECK(same_bits(serial::connection_skew_sup(*f, grid), parallel::connection_skew_sup(*f, grid, workers)));
    }
    CHECK(same_bits(serial::max_frame_unitarity_residual(angles),
                    parallel::max_frame_unitarity_residual(angles, workers)));
    CHECK(same_bits(serial::monopole_flux(Branch::minus, 1.0, 50, 100),
                    parallel::monopole_flux(Branch::minus, 1.0, 50, 100, workers)));
  }
}

TEST_CASE("parallel alpha scan matches the serial reference") {
  auto c = default_config();
  c.duration = 0.5;
  c.wilson_steps = 500;
  c.workers = 3;
  const std::vector<double> alphas{0.2, 0.5, 0.8};
  const auto s = serial::alpha_scan(c, alphas, 0.4);
  const auto p = parallel::alpha_scan(c, alphas, 0.4);
  REQUIRE(s.size() == p.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(s[k].alpha == p[k].alpha);
    CHECK(same_bits(s[k].pd_holonomy, p[k].pd_holonomy));
    CHECK(same_bits(s[k].pd_tdse, p[k].pd_tdse));
    CHECK(same_bits(s[k].commutator_norm, p[k].commutator_norm));
    CHECK(same_bits(s[k].leakage, p[k].leakage));
  }
  // Errors inside worker threads surface on the caller.
  CHECK_THROWS_AS(parallel::alpha_scan(c, std::vector<double>{0.5, 2.0}, 0.4), Error);
}

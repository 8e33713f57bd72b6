#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tempergap/errors.hpp"
#include "tempergap/lyapunov.hpp"

using namespace tempergap;

namespace {
DriftParams params(double eps, QuadratureScheme scheme) {
  DriftParams p;
  p.eps = eps;
  p.eta = 0.05;
  p.h = 0.05 * eps * eps;
  p.a = 0.05;
  p.scheme = scheme;
  return p;
}
}  // namespace

TEST_SUITE("lyapunov") {
  TEST_CASE("W at the minimum and for gamma = 0") {
    const auto t = drift_target(fixtures::perturbed(fixtures::dw1_geometry(), 0.05, 0.1));
    CHECK(lyapunov_W(t, 0.5, t.minimum) == doctest::Approx(1.0));
    CHECK(lyapunov_W(t, 0.0, wrap({0.2})) == 1.0);
    CHECK(lyapunov_W(t, 0.5, wrap({0.1})) < lyapunov_W(t, 0.5, wrap({0.2})));
    auto p = params(0.1, QuadratureScheme::TensorGrid);
    p.gamma = 0.0;
    CHECK(drift_at(t, p, wrap({0.1})).drift == 0.0);
  }

  TEST_CASE("drift is negative deep in the DW1 well") {
    const auto t = drift_target(fixtures::perturbed(fixtures::dw1_geometry(), 0.05, 0.1));
    const auto p = params(0.1, QuadratureScheme::TensorGrid);
    for (double x : {0.05, 0.1, 0.15, 0.95}) CHECK(drift_at(t, p, wrap({x})).drift < 0.0);
  }

  TEST_CASE("reflection symmetry of DW1(0,0)") {
    const auto t = drift_target(fixtures::perturbed(fixtures::dw1_geometry(), 0.05, 0.1));
    const auto p = params(0.1, QuadratureScheme::TensorGrid);
    for (double x : {0.03, 0.1, 0.2, 0.2499}) {
      const auto a = drift_at(t, p, wrap({x}));
      const auto b = drift_at(t, p, wrap({-x}));
      CHECK(a.drift == doctest::Approx(b.drift).epsilon(1e-9));
    }
  }

  TEST_CASE("points outside basin 1 are rejected") {
    const auto t = drift_target(fixtures::perturbed(fixtures::dw1_geometry(), 0.05, 0.1));
    CHECK_THROWS_AS(drift_at(t, params(0.1, QuadratureScheme::TensorGrid), wrap({0.5})), std::invalid_argument);
    auto bad = params(0.1, QuadratureScheme::TensorGrid);
    bad.h = 0.1;
    CHECK_THROWS_AS(validate_drift_params(bad), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_scheme_from_string("simpson"), std::invalid_argument);
  }

  TEST_CASE("tensor grid and Monte Carlo agree on DW2") {
    const auto t = drift_target(fixtures::perturbed(fixtures::dw2_geometry(), 0.03, 0.05));
    const auto grid = params(0.05, QuadratureScheme::TensorGrid);
    const auto mc = params(0.05, QuadratureScheme::MonteCarlo);
    const double h = grid.h;
    for (const auto& x : {wrap({0.9, 0.05}), wrap({0.75 + 0.5 * h, 0.0}), wrap({0.75 + 0.1 * h, 0.01}),
                          wrap({0.25 - 0.5 * h, 0.2}), wrap({0.1, 0.3})}) {
      const auto a = drift_at(t, grid, x);
      const auto b = drift_at(t, mc, x, 1);
      CHECK(std::abs(a.drift - b.drift) <= 3.0 * std::hypot(a.error, b.error) + 1e-12);
    }
  }

  TEST_CASE("adding a constant to the potential leaves the drift unchanged") {
    const auto t = drift_target(fixtures::perturbed(fixtures::dw2_geometry(), 0.03, 0.05));
    DriftTarget shifted = t;
    const auto base = t.potential;
    shifted.potential = PotentialSpec("shifted", 2, [base](const TorusPoint& x) { return base(x) + 1.0; });
    const auto p = params(0.05, QuadratureScheme::TensorGrid);
    for (const auto& x : {wrap({0.9, 0.05}), wrap({0.76, 0.02})}) {
      CHECK(drift_at(t, p, x).drift == doctest::Approx(drift_at(shifted, p, x).drift).epsilon(1e-9));
    }
  }

  TEST_CASE("inside the minimum ball Q W is bounded by the reachable maximum") {
    const auto t = drift_target(fixtures::perturbed(fixtures::dw2_geometry(), 0.03, 0.05));
    const auto p = params(0.05, QuadratureScheme::TensorGrid);
    RngStream rng(3, 0);
    for (int i = 0; i < 10; ++i) {
      const auto x = translate(t.minimum, 0.01 * sample_unit_ball(2, rng));
      const auto v = drift_at(t, p, x);
      const double qw = (1.0 + v.drift) * lyapunov_W(t, p.gamma, x);
      CHECK(qw <= std::exp(p.gamma * (v.max_reachable - t.offset)) + 1e-12);
    }
  }

  TEST_CASE("scan with gamma = 0 fails") {
    const auto t = drift_target(fixtures::perturbed(fixtures::dw1_geometry(), 0.05, 0.1));
    auto p = params(0.1, QuadratureScheme::TensorGrid);
    p.gamma = 0.0;
    const auto r = drift_scan(t, p, 100);
    CHECK_FALSE(r.passed);
    CHECK(r.lambda_emp == doctest::Approx(0.0));
    CHECK(r.points.size() == 100);
    CHECK_THROWS_AS(drift_scan(t, p, 50), std::invalid_argument);
  }

  TEST_CASE("region names") {
    CHECK(to_string(DriftRegion::NearSaddleBoundary) == "near-saddle-boundary");
    CHECK(to_string(DriftRegion::InsideMinimumBall) == "inside-minimum-ball");
  }
}

#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tempergap/errors.hpp"

using namespace tempergap;

TEST_SUITE("perturbation") {
  TEST_CASE("cutoff shape") {
    const auto chi = default_cutoff();
    CHECK(chi(0.0) == 1.0);
    CHECK(chi(0.5) == 1.0);
    CHECK(chi(1.0) == 0.0);
    CHECK(chi(3.0) == 0.0);
    double prev = 1.0, sup = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = 0.5 + 0.5 * i / 2000.0;
      CHECK(chi(t) <= prev + 1e-15);
      prev = chi(t);
      sup = std::max(sup, std::abs(chi.derivative(t)));
    }
    CHECK(sup <= chi.sup_abs_derivative);
    const double t = 0.7, step = 1e-6;
    CHECK(chi.derivative(t) == doctest::Approx((chi(t + step) - chi(t - step)) / (2 * step)).epsilon(1e-6));
  }

  TEST_CASE("saddle frame on DW2") {
    const auto g = fixtures::dw2_geometry();
    const auto f = build_saddle_frame(*g, fixtures::lowest_saddle(g->classifier()));
    CHECK(f.saddle.location[0] == doctest::Approx(0.75));
    CHECK(std::abs(std::abs(f.normal[0]) - 1.0) < 1e-6);
    CHECK(f.kappa > 0.0);
    CHECK(f.kappa < f.kappa_limit());
    CHECK_THROWS_AS(build_saddle_frame(*g, fixtures::lowest_saddle(g->classifier()), 10.0), std::invalid_argument);
  }

  TEST_CASE("all checks pass on DW2 and sup |U_hat - U| scales like eps") {
    const auto g = fixtures::dw2_geometry();
    std::vector<double> ratio;
    for (double eps : {0.1, 0.05, 0.025}) {
      const auto pp = fixtures::perturbed(g, 0.03, eps);
      const auto rep = verify_perturbation(pp);
      for (const auto& c : rep.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.passed);
      }
      ratio.push_back(rep.sup_perturbation / eps);
      // Outside the support the potential is untouched.
      const auto far = wrap({0.5, 0.3});
      CHECK(pp.value(far) == pp.base().value(far));
      CHECK(pp.value(pp.frame().saddle.location) == doctest::Approx(pp.base().value(pp.frame().saddle.location)));
    }
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    CHECK(*hi / *lo <= 3.0);
  }

  TEST_CASE("well-definedness guard") {
    CHECK_THROWS_AS(fixtures::perturbed(fixtures::dw2_geometry(), 2.0, 0.05), WellDefinednessError);
  }

  TEST_CASE("d = 1 perturbation is the identity") {
    const auto pp = fixtures::perturbed(fixtures::dw1_geometry(), 0.05, 0.1);
    CHECK(pp.identity());
    for (double x : {0.2, 0.25, 0.3, 0.7}) CHECK(pp.value(wrap({x})) == pp.base().value(wrap({x})));
  }

  TEST_CASE("saddle Hessian check") {
    const auto g = fixtures::dw2_geometry();
    const auto pp = fixtures::perturbed(g, 0.03, 0.05);
    std::vector<double> ev;
    const auto c = check_saddle_hessian(pp.hessian(pp.frame().saddle.location), pp.frame(), &ev);
    CHECK(c.passed);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == doctest::Approx(-pp.frame().lambda_u).epsilon(0.02));
    CHECK(ev[1] == doctest::Approx(pp.frame().kappa).epsilon(0.02));
    // The unperturbed Hessian fails the same check.
    CHECK_FALSE(check_saddle_hessian(pp.base().hessian(pp.frame().saddle.location), pp.frame()).passed);
  }
}

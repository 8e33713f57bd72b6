#include <doctest.h>

#include <cmath>

#include "tempergap/overlap.hpp"
#include "tempergap/studies.hpp"

using namespace tempergap;

TEST_SUITE("overlap") {
  TEST_CASE("symmetric wells overlap perfectly") {
    const BasinClassifier cls(builtin_potential("DW1"));
    const auto r = overlap_quantities(cls, build_ladder(1.0, 0.2, 1.0, 0.5), 512);
    CHECK(r.gamma_pt == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.c_bv < 1e-8);
    CHECK(r.c_m == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(r.sup_norm == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.gamma_ok(1e-3));
    CHECK(r.delta_ok(1e-3));
    CHECK(r.warnings.empty());
    for (const auto& m : r.level_masses) CHECK(m[0] == doctest::Approx(0.5));
  }

  TEST_CASE("tilted wells still satisfy both bounds") {
    const BasinClassifier cls(builtin_potential("DW1", {{"delta", 0.4}}));
    const auto r = overlap_quantities(cls, build_ladder(1.0, 0.2, 1.0, 0.5), 512);
    CHECK(r.gamma_pt < 1.0);
    CHECK(r.c_bv > 0.0);
    CHECK(r.gamma_ok(1e-3));
    CHECK(r.delta_ok(1e-3));
    CHECK(r.delta_pt <= 1.0);
  }

  TEST_CASE("coarse quadrature warns") {
    const BasinClassifier cls(builtin_potential("DW1"));
    CHECK_FALSE(overlap_quantities(cls, build_ladder(1.0, 0.5, 1.0, 0.5), 64).warnings.empty());
  }

  TEST_CASE("first-level gaps are positive") {
    const auto r = first_level_gap_check(builtin_potential("DW1"), 256, 0.5);
    CHECK(r.points.size() == 5);
    CHECK(r.positive);
    CHECK(r.spread >= 1.0);
    for (const auto& p : r.points) CHECK(p.h == doctest::Approx(std::min(0.5 * p.eps * p.eps, 1.0)));
  }
}

TEST_SUITE("studies") {
  TEST_CASE("line fit") {
    const auto f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_line({0, 1, 2}, {0, 1, 2}), std::invalid_argument);
  }

  TEST_CASE("Arrhenius slope on DW1 is near minus the barrier") {
    const auto s = mrw_arrhenius(builtin_potential("DW1"), 256, 0.05, {0.5, 0.4, 0.3, 0.25, 0.2, 0.15});
    CHECK(s.rows.size() == 6);
    CHECK(s.fit.slope > -1.5);
    CHECK(s.fit.slope < -0.6);
    for (std::size_t i = 1; i < s.rows.size(); ++i) CHECK(s.rows[i].gap.gap < s.rows[i - 1].gap.gap);
  }

  TEST_CASE("ST beats MRW increasingly at low temperature") {
    const auto s = st_polynomial(builtin_potential("DW1"), 128, 1.0, 1.0, 0.5, {0.3, 0.25, 0.2, 0.15});
    CHECK(s.ratio_increasing);
    for (const auto& r : s.rows) CHECK(r.ratio > 1.0);
    CHECK(std::abs(s.fit.slope) <= 12.0);
  }

  TEST_CASE("restricted gaps are positive") {
    const BasinClassifier cls(builtin_potential("DW1"));
    const auto s = restricted_gap_study(cls, 1, 512, 0.5, {0.3, 0.25, 0.2, 0.15});
    CHECK(s.min_normalized > 0.0);
    for (const auto& r : s.rows) CHECK(r.gap.gap > 0.0);
    CHECK(to_table(s).rows.size() == 4);
  }
}

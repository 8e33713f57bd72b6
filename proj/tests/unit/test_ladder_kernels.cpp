#include <doctest.h>

#include <cmath>

#include "tempergap/basin.hpp"
#include "tempergap/kernels.hpp"
#include "tempergap/ladder.hpp"

using namespace tempergap;

TEST_SUITE("ladder") {
  TEST_CASE("N and endpoints") {
    const auto l = build_ladder(1.0, 0.1, 1.0, 0.5);
    CHECK(l.N == 10);
    CHECK(l.levels() == 11);
    CHECK(l.eps.front() == 1.0);
    CHECK(l.eps.back() == doctest::Approx(0.1));
    CHECK(build_ladder(1.0, 0.3, 1.0, 0.5).N == 4);
    CHECK(build_ladder(1.0, 0.15, 2.0, 0.5).N == 4);
  }

  TEST_CASE("inverse temperatures are linearly spaced and h is capped") {
    const auto l = build_ladder(2.0, 0.12, 1.0, 0.5);
    const double step = l.beta(1) - l.beta(0);
    for (int k = 1; k < l.levels(); ++k) {
      CHECK(l.beta(k) - l.beta(k - 1) == doctest::Approx(step));
      CHECK(l.eps[k] < l.eps[k - 1]);
    }
    for (int k = 0; k < l.levels(); ++k) CHECK(l.h[k] == doctest::Approx(std::min(0.5 * l.eps[k] * l.eps[k], 1.0)));
    CHECK(build_ladder(2.0, 0.5, 1.0, 1.0).h[0] == 1.0);
  }

  TEST_CASE("invalid ladders") {
    CHECK_THROWS_AS(build_ladder(0.1, 1.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_ladder(1.0, 0.1, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_ladder(1.0, 0.1, 1.0, -1.0), std::invalid_argument);
  }
}

TEST_SUITE("kernels") {
  TEST_CASE("Metropolis log ratios") {
    CHECK(std::exp(metropolis_log_ratio(0.0, 0.1, 0.1)) == doctest::Approx(std::exp(-1.0)));
    CHECK(metropolis_log_ratio(1.0, 0.5, 0.1) > 0.0);
    CHECK(swap_log_ratio(1.0, 1.0, 0.3, 0.7) == 0.0);
    CHECK(swap_log_ratio(1.0, 2.0, 0.0, 1.0) == doctest::Approx(1.0));
  }

  TEST_CASE("swap ratio matches the product of Gibbs densities") {
    RngStream rng(17, 0);
    for (int i = 0; i < 1000; ++i) {
      const double bi = rng.uniform(0.5, 10.0), bj = rng.uniform(0.5, 10.0);
      const double ui = rng.uniform(0.0, 3.0), uj = rng.uniform(0.0, 3.0);
      // log[pi_i(X_j) pi_j(X_i) / (pi_i(X_i) pi_j(X_j))]
      const double direct = (-bi * uj - bj * ui) - (-bi * ui - bj * uj);
      CHECK(std::abs(swap_log_ratio(bi, bj, ui, uj) - direct) <= 1e-12);
    }
  }

  TEST_CASE("acceptance frequencies") {
    RngStream rng(4, 0);
    int acc = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) acc += metropolis_accept(-1.0, rng);
    CHECK(static_cast<double>(acc) / n == doctest::Approx(std::exp(-1.0)).epsilon(0.01));
    CHECK(metropolis_accept(0.0, rng));
    CHECK(metropolis_accept(5.0, rng));
  }

  TEST_CASE("flat target accepts every proposal") {
    const auto pot = flat_potential(2);
    RngStream rng(1, 0);
    StepCounters c;
    auto x = wrap({0.3, 0.3});
    for (int i = 0; i < 1000; ++i) x = mrw_step(pot, 0.1, 0.05, x, rng, &c);
    CHECK(c.mrw_accepts == c.mrw_proposals);
    CHECK(c.mrw_proposals == 1000);
  }

  TEST_CASE("restricted step never leaves its basin") {
    const BasinClassifier cls(builtin_potential("DW1"));
    const BasinLabelFn label = [&](const TorusPoint& x) { return cls.label(x); };
    RngStream rng(2, 0);
    auto x = wrap({0.2});
    StepCounters c;
    for (int i = 0; i < 5000; ++i) {
      x = restricted_mrw_step(cls.potential(), label, 1, 1.0, 0.1, x, rng, &c);
      REQUIRE(cls.label(x) == 1);
    }
    CHECK(c.restriction_rejects > 0);
    CHECK_THROWS_AS(restricted_mrw_step(cls.potential(), label, 1, 1.0, 0.1, wrap({0.5}), rng), std::invalid_argument);
  }

  TEST_CASE("ST level sampling follows the Gibbs weights") {
    const auto l = custom_ladder({1.0, 0.5}, {0.1, 0.1});
    RngStream rng(5, 0);
    const double u = 0.7;
    const double w0 = std::exp(-u / 1.0), w1 = std::exp(-u / 0.5);
    int top = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) top += st_sample_level(u, l, rng) == 0;
    CHECK(static_cast<double>(top) / n == doctest::Approx(w0 / (w0 + w1)).epsilon(0.01));
    // Huge energies at tiny temperatures must not underflow.
    const auto cold = custom_ladder({1.0, 0.01}, {0.1, 0.1});
    CHECK(st_sample_level(50.0, cold, rng) == 0);
  }

  TEST_CASE("PT swap sweep preserves the multiset of replicas") {
    const auto pot = builtin_potential("DW1");
    const auto l = build_ladder(1.0, 0.2, 1.0, 0.5);
    PTState s;
    for (int k = 0; k < l.levels(); ++k) s.replicas.push_back(wrap({0.1 * k}));
    RngStream rng(6, 0);
    StepCounters c;
    for (int i = 0; i < 200; ++i) {
      s = pt_swap_sweep(pot, l, s, rng, &c);
      std::vector<double> xs;
      for (const auto& r : s.replicas) xs.push_back(r[0]);
      std::sort(xs.begin(), xs.end());
      for (int k = 0; k < l.levels(); ++k) CHECK(xs[k] == doctest::Approx(0.1 * k));
    }
    CHECK(c.swap_proposals > 50);
    CHECK(c.swap_accepts <= c.swap_proposals);
  }
}

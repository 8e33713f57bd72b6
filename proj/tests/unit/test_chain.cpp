#include <doctest.h>

#include "tempergap/chain.hpp"

using namespace tempergap;

TEST_SUITE("chain") {
  TEST_CASE("run_chain validates its options") {
    const auto k = mrw_kernel(builtin_potential("DW1"), 0.5, 0.1);
    RngStream rng(1, 0);
    const auto s = initial_state(k, wrap({0.0}));
    CHECK_THROWS_AS(run_chain(k, s, {coordinate_observable(0)}, {0, 1, 0}, rng), std::invalid_argument);
    CHECK_THROWS_AS(run_chain(k, s, {coordinate_observable(0)}, {10, 0, 0}, rng), std::invalid_argument);
    CHECK_THROWS_AS(run_chain(k, s, {coordinate_observable(0)}, {10, 1, -1}, rng), std::invalid_argument);
  }

  TEST_CASE("thinning and burn-in") {
    const auto k = mrw_kernel(builtin_potential("DW1"), 0.5, 0.1);
    RngStream rng(1, 0);
    const auto tr = run_chain(k, initial_state(k, wrap({0.0})), {coordinate_observable(0)}, {1000, 10, 200}, rng);
    CHECK(tr.length() == 100);
    CHECK(tr.counters.steps == 1000);  // burn-in steps are not counted
    CHECK(tr.names == std::vector<std::string>{"x0"});
  }

  TEST_CASE("same seed reproduces the trace") {
    const auto k = st_kernel(builtin_potential("DW1"), build_ladder(1.0, 0.2, 1.0, 0.5));
    std::vector<Observable> obs{energy_observable(k.potential), level_observable()};
    RngStream a(42, 3), b(42, 3), c(43, 3);
    const auto s = initial_state(k, wrap({0.0}));
    const auto ta = run_chain(k, s, obs, {5000, 1, 0}, a);
    const auto tb = run_chain(k, s, obs, {5000, 1, 0}, b);
    const auto tc = run_chain(k, s, obs, {5000, 1, 0}, c);
    CHECK(ta.columns == tb.columns);
    CHECK(ta.columns != tc.columns);
  }

  TEST_CASE("initial states") {
    const auto l = build_ladder(1.0, 0.2, 1.0, 0.5);
    const auto pt = initial_state(pt_kernel(builtin_potential("DW1"), l), wrap({0.3}));
    CHECK(std::get<PTState>(pt).replicas.size() == static_cast<std::size_t>(l.levels()));
    const auto st = initial_state(st_kernel(builtin_potential("DW1"), l), wrap({0.3}));
    CHECK(std::get<STState>(st).level == 0);
    CHECK(coldest_point(pt)[0] == doctest::Approx(0.3));
  }

  TEST_CASE("kind names round-trip") {
    for (auto k : {KernelKind::MRW, KernelKind::LazyMRW, KernelKind::RestrictedMRW, KernelKind::PT, KernelKind::ST})
      CHECK(kernel_kind_from_string(to_string(k)) == k);
    CHECK_THROWS(kernel_kind_from_string("HMC"));
  }

  TEST_CASE("crossing count") {
    CHECK(count_crossings({}) == 0);
    CHECK(count_crossings({1, 1, 1}) == 0);
    CHECK(count_crossings({1, 2, 2, 1, 2}) == 3);
  }

  TEST_CASE("lazy chain holds about half the time") {
    const auto k = mrw_kernel(flat_potential(1), 0.5, 0.1, true);
    RngStream rng(9, 0);
    const auto tr = run_chain(k, initial_state(k, wrap({0.0})), {coordinate_observable(0)}, {20000, 1, 0}, rng);
    const auto& x = tr.column("x0");
    int stays = 0;
    for (std::size_t i = 1; i < x.size(); ++i) stays += x[i] == x[i - 1];
    CHECK(static_cast<double>(stays) / (x.size() - 1) == doctest::Approx(0.5).epsilon(0.03));
  }
}

#include <doctest.h>

#include <cmath>

#include "tempergap/torus.hpp"

using namespace tempergap;

TEST_SUITE("torus") {
  TEST_CASE("wrap reduces every coordinate into [0,1)") {
    const auto p = wrap({1.25, -0.25, 3.0});
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == doctest::Approx(0.75));
    CHECK(p[2] == 0.0);
    CHECK_THROWS(wrap({std::nan("")}));
    CHECK_THROWS(wrap({INFINITY}));
  }

  TEST_CASE("displacement picks the minimal representative") {
    const auto x = wrap({0.9, 0.1});
    const auto y = wrap({0.1, 0.9});
    const Vec d = torus_displacement(x, y);
    CHECK(d[0] == doctest::Approx(0.2));
    CHECK(d[1] == doctest::Approx(-0.2));
    CHECK(torus_distance(x, y) == doctest::Approx(std::sqrt(0.08)));
    // Antipodal points sit at distance 1/2 per axis.
    CHECK(torus_displacement(wrap({0.0}), wrap({0.5}))[0] == doctest::Approx(0.5));
  }

  TEST_CASE("distance is a metric on random triples") {
    RngStream rng(3, 0);
    for (int i = 0; i < 500; ++i) {
      const auto a = wrap({rng.uniform(), rng.uniform()});
      const auto b = wrap({rng.uniform(), rng.uniform()});
      const auto c = wrap({rng.uniform(), rng.uniform()});
      CHECK(torus_distance(a, b) == doctest::Approx(torus_distance(b, a)));
      CHECK(torus_distance(a, c) <= torus_distance(a, b) + torus_distance(b, c) + 1e-12);
      CHECK(torus_distance(a, b) <= std::sqrt(0.5) + 1e-12);
      const Vec v = torus_displacement(a, b);
      CHECK(torus_distance(translate(a, v), b) < 1e-12);
    }
  }

  TEST_CASE("ball samples stay in the ball and match the second moment") {
    for (int d : {1, 2, 3}) {
      RngStream rng(11, d);
      double m2 = 0.0;
      const int n = 200000;
      for (int i = 0; i < n; ++i) {
        const Vec z = sample_unit_ball(d, rng);
        REQUIRE(z.norm() <= 1.0);
        m2 += z[0] * z[0];
      }
      CHECK(m2 / n == doctest::Approx(uniform_ball_second_moment(d)).epsilon(0.02));
    }
    RngStream rng(1, 1);
    const auto c = wrap({0.99, 0.01});
    for (int i = 0; i < 1000; ++i) CHECK(torus_distance(sample_ball(c, 0.05, rng), c) <= 0.05 + 1e-12);
  }

  TEST_CASE("rng streams are reproducible and distinct") {
    RngStream a(5, 0), b(5, 0), c(5, 1);
    bool differ = false;
    for (int i = 0; i < 100; ++i) {
      const auto x = a.next_u64();
      CHECK(x == b.next_u64());
      differ = differ || x != c.next_u64();
    }
    CHECK(differ);
    RngStream r(9, 2);
    for (int i = 0; i < 1000; ++i) {
      const double u = r.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      CHECK(r.uniform_index(7) < 7u);
    }
  }
}

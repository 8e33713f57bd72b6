#include <doctest.h>

#include <cmath>

#include "tempergap/errors.hpp"
#include "tempergap/spectral.hpp"

using namespace tempergap;

TEST_SUITE("spectral") {
  TEST_CASE("two-state chain") {
    GridKernel k;
    const double p = 0.3, q = 0.1;
    std::vector<Eigen::Triplet<double>> t{{0, 0, 1 - p}, {0, 1, p}, {1, 0, q}, {1, 1, 1 - q}};
    k.P.resize(2, 2);
    k.P.setFromTriplets(t.begin(), t.end());
    k.pi.resize(2);
    k.pi << q / (p + q), p / (p + q);
    validate_kernel(k);
    const auto r = spectral_gap(k, EigenMethod::Dense);
    CHECK(r.gap == doctest::Approx(p + q));
    CHECK(r.method == "dense");
  }

  TEST_CASE("Lanczos agrees with the dense solver") {
    const auto pot = builtin_potential("DW1", {{"delta", 0.4}});
    for (double eps : {1.0, 0.3, 0.15}) {
      const auto k = discretize_mrw_1d(pot, eps, 0.05, 512);
      const auto d = spectral_gap(k, EigenMethod::Dense);
      const auto i = spectral_gap(k, EigenMethod::Iterative);
      CHECK(i.method == "iterative");
      CHECK(i.gap == doctest::Approx(d.gap).epsilon(1e-7));
      CHECK(i.residual <= 1e-9);
    }
  }

  TEST_CASE("ST kernel above the dense limit uses Lanczos") {
    const auto pot = builtin_potential("DW1");
    const auto k = discretize_st(pot, build_ladder(1.0, 0.125, 1.0, 0.5), 256);
    CHECK(k.size() > 2000);
    const auto r = spectral_gap(k);
    CHECK(r.method == "iterative");
    CHECK(r.gap > 0.0);
    CHECK(r.gap < 1.0);
  }

  TEST_CASE("symmetrization is symmetric") {
    const auto k = discretize_mrw_1d(builtin_potential("DW1", {{"mu", 0.3}}), 0.2, 0.05, 128);
    const SparseMatrix s = symmetrized(k);
    const SparseMatrix st = s.transpose();
    CHECK((Eigen::MatrixXd(s) - Eigen::MatrixXd(st)).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("gap is monotone in the proposal width on the flat torus") {
    double prev = 0.0;
    for (int w : {1, 2, 4, 8}) {
      const double g = spectral_gap(discretize_mrw_1d_w(flat_potential(1), 1.0, w, 256)).gap;
      CHECK(g > prev);
      prev = g;
    }
  }

  TEST_CASE("flat potential gap does not depend on eps") {
    const int M = 1024;
    const double g1 = spectral_gap(discretize_mrw_1d(flat_potential(1), 0.3, 0.02, M)).gap;
    const double g2 = spectral_gap(discretize_mrw_1d(flat_potential(1), 0.7, 0.02, M)).gap;
    CHECK(g1 == doctest::Approx(g2));
  }
}

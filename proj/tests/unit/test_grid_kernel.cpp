#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tempergap/basin.hpp"
#include "tempergap/errors.hpp"
#include "tempergap/grid_kernel.hpp"
#include "tempergap/spectral.hpp"

using namespace tempergap;

namespace {
double circulant_gap(int M, int w) {
  double top = -2.0;
  for (int k = 1; k < M; ++k) {
    double s = 0.0;
    for (int j = 1; j <= w; ++j) s += 2.0 * std::cos(2.0 * std::numbers::pi * k * j / M);
    top = std::max(top, s / (2.0 * w));
  }
  return 1.0 - top;
}
}  // namespace

TEST_SUITE("grid_kernel") {
  TEST_CASE("flat potential gives the circulant spectrum") {
    for (auto [M, w] : {std::pair{64, 1}, {64, 5}, {128, 8}, {256, 12}}) {
      const auto k = discretize_mrw_1d_w(flat_potential(1), 0.3, w, M);
      validate_kernel(k);
      CHECK((k.pi.array() - 1.0 / M).abs().maxCoeff() < 1e-15);
      CHECK(spectral_gap(k, EigenMethod::Dense).gap == doctest::Approx(circulant_gap(M, w)).epsilon(1e-10));
    }
  }

  TEST_CASE("detailed balance and stochasticity on DW1") {
    const auto pot = builtin_potential("DW1", {{"delta", 0.4}, {"mu", 0.1}});
    for (double eps : {0.05, 0.2, 1.0}) {
      for (bool lazy : {false, true}) {
        MrwGridOptions o;
        o.lazy = lazy;
        const auto k = discretize_mrw_1d(pot, eps, 0.05, 256, o);
        const auto d = kernel_diagnostics(k);
        CHECK(d.detailed_balance_error <= 1e-12);
        CHECK(d.row_sum_error <= 1e-12);
        CHECK(d.min_entry >= 0.0);
      }
    }
  }

  TEST_CASE("lazy kernel has nonnegative spectrum and half the gap") {
    const auto pot = builtin_potential("DW1");
    const auto k = discretize_mrw_1d(pot, 0.5, 0.05, 128);
    const auto lz = make_lazy(k);
    CHECK(spectrum(lz).minCoeff() >= -1e-12);
    CHECK(spectral_gap(lz).gap == doctest::Approx(0.5 * spectral_gap(k).gap).epsilon(1e-9));
  }

  TEST_CASE("restriction compacts to the basin and keeps detailed balance") {
    const BasinClassifier cls(builtin_potential("DW1"));
    const auto labels = grid_node_labels(cls, 128);
    CHECK(labels[0] == 1);
    CHECK(labels[64] == 2);
    CHECK(labels[32] == 0);
    MrwGridOptions o;
    o.restriction = 1;
    o.node_labels = &labels;
    const auto k = discretize_mrw_1d(cls.potential(), 0.3, 0.05, 128, o);
    validate_kernel(k);
    CHECK(k.size() < 128);
    for (int s : k.states) CHECK(labels[s] == 1);
  }

  TEST_CASE("resolution and size guards") {
    const auto pot = builtin_potential("DW1");
    CHECK_THROWS_AS(discretize_mrw_1d(pot, 0.3, 0.05, 16), ResolutionError);
    CHECK_THROWS_AS(discretize_mrw_1d(pot, 0.3, 0.001, 256), ResolutionError);
    const auto l = build_ladder(1.0, 0.02, 1.0, 0.5);
    CHECK_THROWS_AS(discretize_st(pot, l, 512), SizeError);
  }

  TEST_CASE("ST kernel stationary law is the joint Gibbs law") {
    const auto pot = builtin_potential("DW1");
    const auto l = build_ladder(1.0, 0.3, 1.0, 0.5);
    const int M = 64;
    const auto k = discretize_st(pot, l, M);
    validate_kernel(k);
    CHECK(k.size() == M * l.levels());
    CHECK(k.pi.sum() == doctest::Approx(1.0));
    Eigen::VectorXd lw(k.size());
    for (int lev = 0; lev < l.levels(); ++lev)
      for (int i = 0; i < M; ++i) lw[lev * M + i] = -pot(wrap({static_cast<double>(i) / M})) / l.eps[lev];
    CHECK((normalize_log_weights(lw) - k.pi).cwiseAbs().maxCoeff() < 1e-14);
    // pi P = pi
    const Eigen::VectorXd pp = k.P.transpose() * k.pi;
    CHECK((pp - k.pi).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("neighbor count") {
    CHECK(neighbors_for(0.05, 256) == 12);
    CHECK(neighbors_for(0.0001, 256) == 1);
    CHECK(neighbors_for(0.25, 256) == 64);
  }

  TEST_CASE("log weights normalize without underflow") {
    Eigen::VectorXd lw(3);
    lw << -1e4, -1e4 - std::log(2.0), -2e4;
    const auto p = normalize_log_weights(lw);
    CHECK(p[0] == doctest::Approx(2.0 / 3.0));
    CHECK(p[2] == 0.0);
  }
}

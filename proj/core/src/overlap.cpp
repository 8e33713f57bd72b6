#include "tempergap/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grid_util.hpp"
#include "tempergap/assumptions.hpp"
#include "tempergap/errors.hpp"
#include "tempergap/grid_kernel.hpp"
#include "tempergap/spectral.hpp"

namespace tempergap {
namespace {

constexpr int kBvPoints = 64;

struct GridField {
  std::vector<double> u;
  std::vector<std::int8_t> labels;
  double umin = 0.0;
  double umax = 0.0;
};

GridField sample_field(const BasinClassifier& cls, int res) {
  const detail::PeriodicGrid grid(cls.dim(), res);
  GridField f;
  f.labels = *cls.grid_labels(res);
  f.u.resize(static_cast<std::size_t>(grid.size()));
  for (std::int64_t n = 0; n < grid.size(); ++n) f.u[n] = cls.potential().value(grid.point(n));
  f.umin = *std::min_element(f.u.begin(), f.u.end());
  f.umax = *std::max_element(f.u.begin(), f.u.end());
  return f;
}

// Normalized grid density at temperature eps.
std::vector<double> density(const GridField& f, double eps) {
  std::vector<double> p(f.u.size());
  double s = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) s += p[n] = std::exp(-(f.u[n] - f.umin) / eps);
  for (auto& v : p) v /= s;
  return p;
}

// Basin weight of a node: 1 inside, 1/2 on the boundary.
double weight(std::int8_t lab, int i) { return lab == i ? 1.0 : (lab == 0 ? 0.5 : 0.0); }

std::array<double, 2> masses(const GridField& f, const std::vector<double>& p) {
  std::array<double, 2> m{0.0, 0.0};
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (int i = 0; i < 2; ++i) m[i] += weight(f.labels[n], i + 1) * p[n];
  }
  return m;
}

}  // namespace

OverlapReport overlap_quantities(const BasinClassifier& cls, const TemperatureLadder& ladder, int resolution,
                                 std::optional<double> c_m) {
  if (resolution < 2) throw ResolutionError("overlap_quantities: resolution must be >= 2");
  OverlapReport r;
  r.resolution = resolution;
  if (resolution < 128) r.warnings.push_back("quadrature resolution below 128 nodes per axis");
  const GridField f = sample_field(cls, resolution);
  r.sup_norm = f.umax - f.umin;

  std::vector<std::vector<double>> dens;
  for (int k = 0; k < ladder.levels(); ++k) {
    dens.push_back(density(f, ladder.eps[k]));
    r.level_masses.push_back(masses(f, dens.back()));
  }

  r.gamma_pt = 1.0;
  for (int i = 0; i < 2; ++i) {
    double prod = 1.0;
    for (int k = 1; k < ladder.levels(); ++k) {
      prod *= std::min(1.0, r.level_masses[k - 1][i] / r.level_masses[k][i]);
    }
    r.gamma_pt = std::min(r.gamma_pt, prod);
  }

  r.delta_pt = 1.0;
  for (int k = 0; k + 1 < ladder.levels(); ++k) {
    for (int i = 0; i < 2; ++i) {
      double overlap = 0.0;
      for (std::size_t n = 0; n < f.u.size(); ++n) {
        overlap += weight(f.labels[n], i + 1) * std::min(dens[k][n], dens[k + 1][n]);
      }
      r.delta_pt = std::min({r.delta_pt, overlap / r.level_masses[k][i], overlap / r.level_masses[k + 1][i]});
    }
  }

  const double lo = ladder.eps.back();
  const double hi = ladder.eps.front();
  if (hi > lo) {
    std::vector<double> e(kBvPoints);
    std::vector<std::array<double, 2>> m(kBvPoints);
    for (int j = 0; j < kBvPoints; ++j) {
      e[j] = lo + (hi - lo) * j / (kBvPoints - 1);
      m[j] = masses(f, density(f, e[j]));
    }
    for (int i = 0; i < 2; ++i) {
      std::vector<double> der(kBvPoints);
      for (int j = 0; j < kBvPoints; ++j) {
        const int a = std::max(0, j - 1);
        const int b = std::min(kBvPoints - 1, j + 1);
        der[j] = std::abs((m[b][i] - m[a][i]) / (e[b] - e[a]));
      }
      double integral = 0.0;
      for (int j = 0; j + 1 < kBvPoints; ++j) integral += 0.5 * (der[j] + der[j + 1]) * (e[j + 1] - e[j]);
      r.c_bv = std::max(r.c_bv, integral);
    }
  }

  r.c_m = c_m ? *c_m : validate_assumptions(cls, lo, std::max(hi, lo * (1.0 + 1e-9))).mass_ratio_constant;
  r.bound_gamma = std::exp(-r.c_m * r.c_m * r.c_bv);
  r.bound_delta = std::exp(-ladder.nu_bar * r.sup_norm);
  return r;
}

FirstLevelReport first_level_gap_check(const PotentialSpec& pot, int M, double eta, const std::vector<double>& eps_grid,
                                       double factor) {
  if (pot.dim() != 1) throw std::invalid_argument("first_level_gap_check: one-dimensional potentials only");
  double umin = std::numeric_limits<double>::infinity();
  double umax = -umin;
  for (int i = 0; i < M; ++i) {
    const double u = pot.value(wrap({static_cast<double>(i) / M}));
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  const double osc = umax - umin;
  FirstLevelReport r;
  r.min_normalized = std::numeric_limits<double>::infinity();
  for (double eps : eps_grid) {
    FirstLevelPoint p;
    p.eps = eps;
    p.h = std::min(eta * eps * eps, 1.0);
    p.w = neighbors_for(p.h, M);
    MrwGridOptions opts;
    opts.lazy = true;
    p.gap = spectral_gap(discretize_mrw_1d(pot, eps, p.h, M, opts)).gap;
    p.normalized = p.gap * std::exp(2.0 * osc / eps) / (p.h * p.h);
    r.min_normalized = std::min(r.min_normalized, p.normalized);
    r.max_normalized = std::max(r.max_normalized, p.normalized);
    r.points.push_back(p);
  }
  r.positive = r.min_normalized > 0.0;
  r.spread = r.max_normalized / r.min_normalized;
  r.stable = r.positive && r.spread <= factor;
  return r;
}

}  // namespace tempergap

#include "tempergap/studies.hpp"
#include <algorithm>

#include <cmath>
#include <stdexcept>

#include "tempergap/errors.hpp"
#include "tempergap/ladder.hpp"
#include "tempergap/parallel.hpp"

namespace tempergap {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  if (x.size() < 4) throw std::invalid_argument("fit_line: at least four points are required");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LinearFit f;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("fit_line: abscissae are all equal");
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ss_res += std::pow(y[i] - f.intercept - f.slope * x[i], 2);
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

ArrheniusStudy mrw_arrhenius(const PotentialSpec& pot, int M, double h, const std::vector<double>& eps) {
  if (eps.size() < 4) throw std::invalid_argument("mrw-arrhenius: at least four temperatures are required");
  ArrheniusStudy s;
  s.rows.resize(eps.size());
  parallel_for(static_cast<std::int64_t>(eps.size()), [&](std::int64_t i) {
    auto& r = s.rows[i];
    r.eps = eps[i];
    r.h = h;
    r.w = neighbors_for(h, M);
    r.gap = spectral_gap(discretize_mrw_1d(pot, eps[i], h, M));
  });
  std::vector<double> x, y;
  for (const auto& r : s.rows) {
    x.push_back(1.0 / r.eps);
    y.push_back(std::log(r.gap.gap));
  }
  s.fit = fit_line(x, y);
  return s;
}

StStudy st_polynomial(const PotentialSpec& pot, int M, double eps_high, double nu_bar, double eta,
                      const std::vector<double>& eps_low, bool allow_large) {
  if (eps_low.size() < 4) throw std::invalid_argument("st-polynomial: at least four temperatures are required");
  StStudy s;
  s.rows.resize(eps_low.size());
  parallel_for(static_cast<std::int64_t>(eps_low.size()), [&](std::int64_t i) {
    auto& r = s.rows[i];
    const TemperatureLadder ladder = build_ladder(eps_high, eps_low[i], nu_bar, eta);
    r.eps_low = eps_low[i];
    r.N = ladder.N;
    r.states = M * ladder.levels();
    r.w_low = neighbors_for(ladder.h.back(), M);
    r.st = spectral_gap(discretize_st(pot, ladder, M, allow_large));
    r.mrw = spectral_gap(discretize_mrw_1d_w(pot, eps_low[i], r.w_low, M));
    r.ratio = r.st.gap / r.mrw.gap;
  });
  std::vector<double> x, y;
  for (const auto& r : s.rows) {
    x.push_back(std::log(1.0 / r.eps_low));
    y.push_back(std::log(r.st.gap));
  }
  s.fit = fit_line(x, y);
  // Order by 1 / eps_low before checking monotonicity.
  std::vector<const StRow*> order;
  for (const auto& r : s.rows) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const StRow* a, const StRow* b) { return a->eps_low > b->eps_low; });
  s.ratio_increasing = true;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (!(order[i]->ratio > order[i - 1]->ratio)) s.ratio_increasing = false;
  }
  return s;
}

RestrictedStudy restricted_gap_study(const BasinClassifier& cls, int label, int M, double eta,
                                     const std::vector<double>& eps) {
  if (eps.size() < 4) throw std::invalid_argument("restricted-gap: at least four temperatures are required");
  const auto labels = grid_node_labels(cls, M);
  RestrictedStudy s;
  s.rows.resize(eps.size());
  parallel_for(static_cast<std::int64_t>(eps.size()), [&](std::int64_t i) {
    auto& r = s.rows[i];
    r.eps = eps[i];
    r.h = std::min(eta * eps[i] * eps[i], 1.0);
    r.w = neighbors_for(r.h, M);
    MrwGridOptions opts;
    opts.restriction = label;
    opts.node_labels = &labels;
    const GridKernel k = discretize_mrw_1d(cls.potential(), eps[i], r.h, M, opts);
    r.states = k.size();
    r.gap = spectral_gap(k);
    r.normalized = r.gap.gap * r.eps / std::pow(r.h, 4);
  });
  s.min_normalized = s.max_normalized = s.rows.front().normalized;
  for (const auto& r : s.rows) {
    s.min_normalized = std::min(s.min_normalized, r.normalized);
    s.max_normalized = std::max(s.max_normalized, r.normalized);
  }
  s.spread = s.max_normalized / s.min_normalized;
  return s;
}

Table to_table(const ArrheniusStudy& s) {
  Table t{{"eps", "h", "w", "gap", "method", "residual"}, {}};
  for (const auto& r : s.rows) t.add({r.eps, r.h, static_cast<long>(r.w), r.gap.gap, r.gap.method, r.gap.residual});
  return t;
}

Table to_table(const StStudy& s) {
  Table t{{"eps_low", "N", "states", "w_low", "gap_st_exact", "gap_mrw_exact", "ratio", "method_st"}, {}};
  for (const auto& r : s.rows) {
    t.add({r.eps_low, static_cast<long>(r.N), static_cast<long>(r.states), static_cast<long>(r.w_low), r.st.gap, r.mrw.gap,
           r.ratio, r.st.method});
  }
  return t;
}

Table to_table(const RestrictedStudy& s) {
  Table t{{"eps", "h", "w", "states", "gap", "normalized_gap"}, {}};
  for (const auto& r : s.rows) {
    t.add({r.eps, r.h, static_cast<long>(r.w), static_cast<long>(r.states), r.gap.gap, r.normalized});
  }
  return t;
}

}  // namespace tempergap

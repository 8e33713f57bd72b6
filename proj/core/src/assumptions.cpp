#include "tempergap/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tempergap/errors.hpp"

namespace tempergap {

constexpr int kTemperatureSamples = 32;
constexpr int kMassResolution = 256;

AssumptionReport validate_assumptions(const BasinClassifier& cls, double theta_low, double theta_high,
                                      const std::vector<std::string>& search_warnings) {
  if (!(theta_low > 0.0) || !(theta_high > theta_low)) {
    throw std::invalid_argument("validate_assumptions: need 0 < theta_low < theta_high");
  }
  AssumptionReport r;
  r.two_minima = true;
  r.all_nondegenerate = true;
  r.m1 = cls.minimum(1);
  r.m2 = cls.minimum(2);
  r.theta_low = theta_low;
  r.theta_high = theta_high;
  r.warnings = search_warnings;

  const int d = cls.dim();
  const int grid = d == 1 ? 1024 : 128;
  const auto sh = saddle_height(cls.potential(), r.m1, r.m2, grid);
  const auto& saddles = cls.boundary_saddles();
  if (saddles.empty()) throw AssumptionViolation("no index-1 critical point separates the two basins");
  const auto nearest = std::min_element(saddles.begin(), saddles.end(), [&](const auto& a, const auto& b) {
    return torus_distance(a.location, sh.bottleneck) < torus_distance(b.location, sh.bottleneck);
  });
  r.lowest_saddle = *nearest;
  r.saddle_height = nearest->value;
  int ties = 0;
  for (const auto& s : saddles) {
    if (std::abs(s.value - nearest->value) <= 1e-9 * std::max(1.0, std::abs(nearest->value))) ++ties;
  }
  r.lowest_saddle_unique = ties == 1;
  if (!r.lowest_saddle_unique) r.warnings.push_back("lowest saddle is not unique");

  double worst = std::numeric_limits<double>::infinity();
  const double lg0 = std::log(theta_low);
  const double lg1 = std::log(theta_high);
  for (int k = 0; k < kTemperatureSamples; ++k) {
    const double eps = std::exp(lg0 + (lg1 - lg0) * k / (kTemperatureSamples - 1));
    const auto m = basin_masses(cls, eps, kMassResolution);
    worst = std::min({worst, m[0], m[1]});
  }
  r.mass_ratio_constant = 1.0 / std::sqrt(worst);
  return r;
}

AssumptionReport validate_assumptions(const PotentialSpec& pot, double theta_low, double theta_high) {
  const auto search = find_critical_points(pot, BasinClassifier::kDefaultCriticalResolution);
  const BasinClassifier cls(pot, search);
  return validate_assumptions(cls, theta_low, theta_high, search.warnings);
}

}  // namespace tempergap

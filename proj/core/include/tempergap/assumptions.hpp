#pragma once

#include <string>
#include <vector>

#include "tempergap/basin.hpp"

namespace tempergap {

struct AssumptionReport {
  bool two_minima = false;
  bool all_nondegenerate = false;
  TorusPoint m1;
  TorusPoint m2;
  double saddle_height = 0.0;
  CriticalPoint lowest_saddle;
  bool lowest_saddle_unique = false;
  double mass_ratio_constant = 0.0;  // C_m
  double theta_low = 0.0;
  double theta_high = 0.0;
  std::vector<std::string> warnings;
};

/// Check the two-well, nondegeneracy and uniform multimodality conditions.
///
/// C_m = (inf_eps min_i pi_eps(Omega_i))^{-1/2} over 32 log-spaced
/// temperatures in [theta_low, theta_high]. Throws AssumptionViolation when
/// the potential does not have exactly two minima and DegeneracyError for a
/// degenerate critical point.
AssumptionReport validate_assumptions(const BasinClassifier& classifier, double theta_low, double theta_high,
                                      const std::vector<std::string>& search_warnings = {});
AssumptionReport validate_assumptions(const PotentialSpec& pot, double theta_low, double theta_high);

}  // namespace tempergap

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tempergap/basin.hpp"
#include "tempergap/ladder.hpp"

namespace tempergap {

struct OverlapReport {
  double gamma_pt = 0.0;
  double delta_pt = 0.0;
  double c_bv = 0.0;
  double c_m = 0.0;
  double sup_norm = 0.0;  // oscillation max U - min U
  double bound_gamma = 0.0;  // exp(-C_m^2 C_BV)
  double bound_delta = 0.0;  // exp(-nu_bar ||U||)
  int resolution = 0;
  std::vector<std::array<double, 2>> level_masses;  // pi_k(Omega_i) per ladder level
  std::vector<std::string> warnings;

  bool gamma_ok(double tol) const { return gamma_pt >= bound_gamma - tol; }
  bool delta_ok(double tol) const { return delta_pt >= bound_delta - tol; }
};

/// Overlap quantities of a ladder by periodic grid quadrature with
/// `resolution` nodes per axis. C_BV integrates central differences of
/// eps -> pi_eps(Omega_i) over 64 points in [eps_N, eps_0]. When `c_m` is
/// absent it is computed over the same interval.
OverlapReport overlap_quantities(const BasinClassifier& classifier, const TemperatureLadder& ladder, int resolution,
                                 std::optional<double> c_m = std::nullopt);

struct FirstLevelPoint {
  double eps = 0.0;
  double h = 0.0;
  int w = 0;
  double gap = 0.0;
  double normalized = 0.0;  // gap exp(2 ||U|| / eps) / h^2
};

struct FirstLevelReport {
  std::vector<FirstLevelPoint> points;
  double min_normalized = 0.0;
  double max_normalized = 0.0;
  double spread = 0.0;  // max / min
  bool positive = false;
  bool stable = false;  // spread <= factor
};

/// Exact gaps of the lazy grid MRW on the whole torus with h = min(eta eps^2, 1).
FirstLevelReport first_level_gap_check(const PotentialSpec& pot, int M, double eta,
                                       const std::vector<double>& eps_grid = {0.5, 0.75, 1.0, 1.5, 2.0},
                                       double factor = 5.0);

}  // namespace tempergap

#pragma once

#include <vector>

namespace tempergap {

/// Temperatures eps_0 > ... > eps_N with linearly spaced inverse temperatures
/// and step sizes h_k = min(eta * eps_k^2, 1).
struct TemperatureLadder {
  int N = 0;
  std::vector<double> eps;
  std::vector<double> h;
  double eps_high = 0.0;
  double eps_low = 0.0;
  double nu_bar = 0.0;
  double eta = 0.0;

  int levels() const { return N + 1; }
  double beta(int k) const { return 1.0 / eps[k]; }
};

/// N = ceil(1 / (nu_bar * eps_low)), eps_0 = eps_high, eps_N = eps_low.
TemperatureLadder build_ladder(double eps_high, double eps_low, double nu_bar, double eta);

/// Single-level ladder (N = 0) with an explicit step size.
TemperatureLadder single_level(double eps, double h);

/// Ladder with explicit temperatures and step sizes (validated).
TemperatureLadder custom_ladder(std::vector<double> eps, std::vector<double> h);

}  // namespace tempergap

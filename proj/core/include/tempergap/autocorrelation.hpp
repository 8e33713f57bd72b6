#pragma once

#include <string>
#include <vector>

#include "tempergap/chain.hpp"

namespace tempergap {

/// Normalized autocorrelation rho(0..max_lag) of a series, via FFT.
std::vector<double> autocorrelation(const std::vector<double>& x, int max_lag);

/// Integrated autocorrelation time 1 + 2 sum rho(t) with Sokal's
/// self-consistent window (c = 5).
double integrated_autocorrelation_time(const std::vector<double>& x);

struct EmpiricalGapOptions {
  double rho_high = 0.8;
  double rho_low = 0.05;
  int blocks = 20;
  int bootstrap_samples = 400;
  std::uint64_t seed = 7;
  long min_length = 10000;
};

struct EmpiricalGap {
  double gap = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool white_noise = false;  // rho(1) < rho_low: only a lower bound is available
  double gap_lower_bound = 0.0;
  double slope = 0.0;        // per recorded sample
  int window_first = 0;      // fitted lag range (in recorded samples)
  int window_last = 0;
  double tau_int = 0.0;
  long block_length = 0;
  bool block_length_ok = true;  // block length >= 5 tau_int
};

/// Fit log rho(t) over the lags where rho lies in [rho_low, rho_high] and
/// convert the slope to a gap with the recording interval `thin`.
EmpiricalGap empirical_gap(const std::vector<double>& series, long thin, const EmpiricalGapOptions& opts = {});
EmpiricalGap empirical_gap(const Trace& trace, const std::string& observable, const EmpiricalGapOptions& opts = {});

}  // namespace tempergap

#pragma once

#include <string>
#include <vector>

#include "tempergap/basin.hpp"
#include "tempergap/output.hpp"
#include "tempergap/spectral.hpp"

namespace tempergap {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares y = intercept + slope x; needs at least four points.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ArrheniusRow {
  double eps = 0.0;
  double h = 0.0;
  int w = 0;
  SpectralReport gap;
};

struct ArrheniusStudy {
  std::vector<ArrheniusRow> rows;
  LinearFit fit;  // log gap against 1 / eps
};

/// Exact MRW gaps at a fixed step size.
ArrheniusStudy mrw_arrhenius(const PotentialSpec& pot, int M, double h, const std::vector<double>& eps);

struct StRow {
  double eps_low = 0.0;
  int N = 0;
  int states = 0;
  int w_low = 0;
  SpectralReport st;
  SpectralReport mrw;  // plain MRW at eps_low with the coldest level's step
  double ratio = 0.0;  // gap_st / gap_mrw
};

struct StStudy {
  std::vector<StRow> rows;
  LinearFit fit;  // log gap_st against log(1 / eps_low)
  bool ratio_increasing = false;  // in 1 / eps_low
};

StStudy st_polynomial(const PotentialSpec& pot, int M, double eps_high, double nu_bar, double eta,
                      const std::vector<double>& eps_low, bool allow_large = false);

struct RestrictedRow {
  double eps = 0.0;
  double h = 0.0;
  int w = 0;
  int states = 0;
  SpectralReport gap;
  double normalized = 0.0;  // gap eps / h^4
};

struct RestrictedStudy {
  std::vector<RestrictedRow> rows;
  double min_normalized = 0.0;
  double max_normalized = 0.0;
  double spread = 0.0;
};

/// Exact gaps of the grid MRW restricted to one basin with h = eta eps^2.
RestrictedStudy restricted_gap_study(const BasinClassifier& cls, int label, int M, double eta,
                                     const std::vector<double>& eps);

Table to_table(const ArrheniusStudy& s);
Table to_table(const StStudy& s);
Table to_table(const RestrictedStudy& s);

}  // namespace tempergap

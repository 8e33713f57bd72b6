#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "tempergap/grid_kernel.hpp"

namespace tempergap {

struct HolleyStroockReport {
  double gap1 = 0.0;
  double gap2 = 0.0;
  double a = 0.0;  // min p1/p2 (normalized densities)
  double b = 0.0;  // max p1/p2
  double lower = 0.0;  // (a/b)^2 Gap(P2)
  double upper = 0.0;  // (b/a)^2 Gap(P2)
  bool holds = false;
};

/// Metropolis kernels for p1 and p2 with a common symmetric proposal, exact
/// gaps, and the two-sided comparison checked within `tol`.
HolleyStroockReport holley_stroock_check(const Eigen::VectorXd& p1, const Eigen::VectorXd& p2,
                                         const SparseMatrix& proposal, double tol = 1e-9);

struct DriftFit {
  double lambda1 = 0.0;
  double b1 = 0.0;
};

/// Largest lambda1 and smallest b1 >= 0 with PV <= (1 - lambda1) V + b1 1_K.
DriftFit fit_drift_constants(const GridKernel& P, const Eigen::VectorXd& V, const std::vector<char>& K);

struct LyapunovGapReport {
  bool drift_holds = false;
  int worst_state = -1;       // largest drift violation
  double worst_violation = 0.0;
  double alpha1 = 0.0;        // Gap(P restricted to K)
  double gap = 0.0;
  double bound = 0.0;         // alpha1 lambda1 / (b1 + alpha1)
  bool holds = false;         // drift_holds and gap >= bound - tol
  std::string detail;
};

LyapunovGapReport lyapunov_gap_bound_check(const GridKernel& P, const Eigen::VectorXd& V, const std::vector<char>& K,
                                           double lambda1, double b1, double tol = 1e-9);

struct TvBoundReport {
  bool applicable = false;  // false when P has negative eigenvalues
  double min_eigenvalue = 0.0;
  double gap = 0.0;
  double chi2 = 0.0;        // || d nu0 / d pi - 1 ||_{L^2(pi)}
  std::vector<double> lhs;  // ||nu0 P^m - pi||_TV, m = 1..m_max
  std::vector<double> rhs;  // 1/2 (1 - gap)^m chi2
  bool holds = false;
  int worst_m = 0;
};

TvBoundReport tv_bound_check(const GridKernel& P, const Eigen::VectorXd& nu0, int m_max, double tol = 1e-9);

}  // namespace tempergap

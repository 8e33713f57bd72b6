#include "tempergap/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tempergap/spectral.hpp"

namespace tempergap {

HolleyStroockReport holley_stroock_check(const Eigen::VectorXd& p1, const Eigen::VectorXd& p2,
                                         const SparseMatrix& proposal, double tol) {
  if (p1.size() != p2.size()) throw std::invalid_argument("holley_stroock_check: density size mismatch");
  if ((p1.array() <= 0.0).any() || (p2.array() <= 0.0).any()) {
    throw std::invalid_argument("holley_stroock_check: densities must be strictly positive");
  }
  const Eigen::VectorXd l1 = p1.array().log();
  const Eigen::VectorXd l2 = p2.array().log();
  const GridKernel k1 = metropolis_kernel(l1, proposal, "p1");
  const GridKernel k2 = metropolis_kernel(l2, proposal, "p2");
  HolleyStroockReport r;
  r.gap1 = spectral_gap(k1, EigenMethod::Dense).gap;
  r.gap2 = spectral_gap(k2, EigenMethod::Dense).gap;
  const Eigen::ArrayXd ratio = k1.pi.array() / k2.pi.array();
  r.a = ratio.minCoeff();
  r.b = ratio.maxCoeff();
  r.lower = std::pow(r.a / r.b, 2) * r.gap2;
  r.upper = std::pow(r.b / r.a, 2) * r.gap2;
  r.holds = r.lower <= r.gap1 + tol && r.gap1 <= r.upper + tol;
  return r;
}

DriftFit fit_drift_constants(const GridKernel& P, const Eigen::VectorXd& V, const std::vector<char>& K) {
  const Eigen::VectorXd PV = P.P * V;
  DriftFit f;
  f.lambda1 = 1.0;
  for (int i = 0; i < V.size(); ++i) {
    if (!K[i]) f.lambda1 = std::min(f.lambda1, 1.0 - PV[i] / V[i]);
  }
  for (int i = 0; i < V.size(); ++i) {
    if (K[i]) f.b1 = std::max(f.b1, PV[i] - (1.0 - f.lambda1) * V[i]);
  }
  return f;
}

LyapunovGapReport lyapunov_gap_bound_check(const GridKernel& P, const Eigen::VectorXd& V, const std::vector<char>& K,
                                           double lambda1, double b1, double tol) {
  const int n = P.size();
  if (V.size() != n || static_cast<int>(K.size()) != n) throw std::invalid_argument("lyapunov_gap_bound_check: size mismatch");
  if ((V.array() < 1.0).any()) throw std::invalid_argument("lyapunov_gap_bound_check: V must be >= 1");
  LyapunovGapReport r;
  const Eigen::VectorXd PV = P.P * V;
  r.drift_holds = true;
  for (int i = 0; i < n; ++i) {
    const double viol = PV[i] - ((1.0 - lambda1) * V[i] + (K[i] ? b1 : 0.0));
    // Relative slack for round-off in the products.
    if (viol > r.worst_violation) {
      r.worst_violation = viol;
      r.worst_state = i;
    }
    if (viol > 1e-12 * std::max(1.0, V[i])) r.drift_holds = false;
  }
  if (!r.drift_holds) {
    r.detail = "drift inequality fails at state " + std::to_string(r.worst_state) + " by " + std::to_string(r.worst_violation);
    return r;
  }
  r.gap = spectral_gap(P).gap;
  r.alpha1 = spectral_gap(restrict_kernel(P, K)).gap;
  r.bound = r.alpha1 * lambda1 / (b1 + r.alpha1);
  r.holds = r.gap >= r.bound - tol;
  return r;
}

TvBoundReport tv_bound_check(const GridKernel& P, const Eigen::VectorXd& nu0, int m_max, double tol) {
  if (nu0.size() != P.size()) throw std::invalid_argument("tv_bound_check: size mismatch");
  if (m_max < 1) throw std::invalid_argument("tv_bound_check: m_max must be >= 1");
  TvBoundReport r;
  r.min_eigenvalue = spectrum(P)[0];
  r.applicable = r.min_eigenvalue >= -1e-12;
  if (!r.applicable) return r;
  r.gap = spectral_gap(P, EigenMethod::Dense).gap;
  const Eigen::VectorXd nu = nu0 / nu0.sum();
  r.chi2 = std::sqrt(((nu.array() / P.pi.array() - 1.0).square() * P.pi.array()).sum());
  Eigen::RowVectorXd row = nu.transpose();
  r.holds = true;
  double worst = -1e300;
  for (int m = 1; m <= m_max; ++m) {
    row = row * P.P;
    const double lhs = 0.5 * (row.transpose() - P.pi).cwiseAbs().sum();
    const double rhs = 0.5 * std::pow(1.0 - r.gap, m) * r.chi2;
    r.lhs.push_back(lhs);
    r.rhs.push_back(rhs);
    if (lhs - rhs > worst) {
      worst = lhs - rhs;
      r.worst_m = m;
    }
    if (lhs > rhs + tol) r.holds = false;
  }
  return r;
}

}  // namespace tempergap

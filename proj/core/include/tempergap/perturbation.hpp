#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tempergap/basin.hpp"

namespace tempergap {

/// Smooth cutoff chi: [0, inf) -> [0, 1], equal to 1 on [0, 1/2] and 0 on [1, inf).
struct CutoffFn {
  std::function<double(double)> chi;
  std::function<double(double)> derivative;
  double sup_abs_derivative = 0.0;  // upper bound on |chi'|

  double operator()(double t) const { return chi(t); }
};

/// chi(t) = g(1-t) / (g(1-t) + g(t-1/2)) on (1/2, 1) with g(s) = exp(-1/s).
CutoffFn default_cutoff();

struct SaddleFrameData {
  CriticalPoint saddle;
  double lambda_u = 0.0;                  // |negative Hessian eigenvalue|
  std::vector<double> stable_eigenvalues;  // ascending
  Vec normal;                             // outward from basin 1
  Mat P_s;                                // I - n n^T
  Mat H_s;                                // P_s H P_s
  Mat K;                                  // H_s - kappa P_s
  double kappa = 0.0;
  double w = 0.0;      // ball-moment constant
  double c_bar = 0.0;  // w / (2(d-1)); unbounded for d = 1
  bool identity = false;  // d = 1: P_s = 0, the perturbation vanishes

  /// Largest admissible kappa: min(c_bar, 1) * lambda_u (exclusive).
  double kappa_limit() const;
};

/// w defaults to sigma^2 / 2 = 1 / (2(d+2)); kappa defaults to half its limit.
SaddleFrameData build_saddle_frame(const BasinGeometry& geom, const CriticalPoint& saddle,
                                   std::optional<double> kappa = std::nullopt,
                                   std::optional<double> w = std::nullopt);

/// U_hat = U - P_hat with P_hat(x) = P(xi(x), x - xi(x)) near the saddle.
class PerturbedPotential {
 public:
  PerturbedPotential(std::shared_ptr<const BasinGeometry> geom, SaddleFrameData frame, double a, double eps,
                     CutoffFn cutoff);

  const PotentialSpec& base() const { return geom_->classifier().potential(); }
  const BasinGeometry& geometry() const { return *geom_; }
  std::shared_ptr<const BasinGeometry> geometry_ptr() const { return geom_; }
  const SaddleFrameData& frame() const { return frame_; }
  const CutoffFn& cutoff() const { return cutoff_; }
  double a() const { return a_; }
  double eps() const { return eps_; }
  double a_tilde() const { return a_tilde_; }
  double rho() const { return rho_; }
  /// a * sqrt(eps)
  double scale() const { return scale_; }
  /// rho * a * sqrt(eps)
  double support_radius() const { return rho_ * scale_; }
  double fd_step() const { return fd_step_; }
  bool identity() const { return frame_.identity; }

  double perturbation(const TorusPoint& x) const;
  Vec perturbation_gradient(const TorusPoint& x) const;
  Mat perturbation_hessian(const TorusPoint& x) const;

  double value(const TorusPoint& x) const { return base().value(x) - perturbation(x); }
  Vec gradient(const TorusPoint& x) const { return base().gradient(x) - perturbation_gradient(x); }
  Mat hessian(const TorusPoint& x) const { return base().hessian(x) - perturbation_hessian(x); }

  /// U_hat packaged as a potential for the samplers.
  PotentialSpec as_potential() const;

 private:
  std::shared_ptr<const BasinGeometry> geom_;
  SaddleFrameData frame_;
  CutoffFn cutoff_;
  double a_;
  double eps_;
  double a_tilde_;
  double rho_;
  double scale_;
  double fd_step_;
};

/// Throws WellDefinednessError unless rho * a * sqrt(eps) < r0 / 2.
PerturbedPotential build_perturbation(std::shared_ptr<const BasinGeometry> geom, const SaddleFrameData& frame,
                                      double a, double eps, const CutoffFn& cutoff = default_cutoff());

struct PerturbationCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::optional<TorusPoint> witness;
  std::string detail;
};

struct PerturbationReport {
  double eps = 0.0;
  double a = 0.0;
  double kappa = 0.0;
  double lambda_u = 0.0;
  double support_radius = 0.0;
  double sup_perturbation = 0.0;  // sup |U_hat - U|
  double c0 = 0.0;                // min |D U_hat(x)| / |x - saddle|
  double C1 = 0.0;                // sup |D P_hat| / (a sqrt eps)
  double C2 = 0.0;                // sup |D^2 P_hat|
  std::vector<double> saddle_eigenvalues;
  std::vector<PerturbationCheck> checks;

  bool all_passed() const;
};

/// Saddle Hessian check: eigenvalues equal {-lambda_u, kappa} within 2%.
PerturbationCheck check_saddle_hessian(const Mat& hessian, const SaddleFrameData& frame,
                                       std::vector<double>* eigenvalues = nullptr);

/// Boundary-normal vanishing, saddle Hessian, gradient lower bound and the
/// derivative scaling constants. Never throws on a failed check.
PerturbationReport verify_perturbation(const PerturbedPotential& pp);

/// Supremum of |U_hat - U| on a fine grid covering the perturbation support
/// together with a 200^2 global grid.
double perturbation_sup(const PerturbedPotential& pp);

}  // namespace tempergap

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tempergap/perturbation.hpp"

namespace tempergap {

/// The potential whose drift is measured together with the basin geometry
/// used for the restriction. `near_radius` delimits the near-saddle region.
struct DriftTarget {
  PotentialSpec potential;
  std::shared_ptr<const BasinGeometry> geometry;
  TorusPoint saddle;
  TorusPoint minimum;
  double offset = 0.0;  // U(m1), subtracted inside W
  double near_radius = 0.0;
  std::string name;
};

/// U_hat of a perturbation.
DriftTarget drift_target(const PerturbedPotential& pp);

/// The unperturbed U with the same regions as `pp`.
DriftTarget unperturbed_target(const PerturbedPotential& pp);

enum class QuadratureScheme { TensorGrid, MonteCarlo };

QuadratureScheme quadrature_scheme_from_string(const std::string& s);

struct DriftParams {
  double gamma = 0.5;
  double h = 0.0;
  double eps = 0.0;
  double a = 0.0;
  double eta = 0.0;  // when positive, h <= eta eps^2 is enforced
  QuadratureScheme scheme = QuadratureScheme::TensorGrid;
  int radial = 200;        // radial nodes (d = 2) or half the nodes (d = 1)
  int angular = 64;
  long samples = 100000;   // Monte Carlo proposals (antithetic pairs count twice)
  double tolerance = 1e-3; // required lambda_emp
  std::uint64_t seed = 1;
};

void validate_drift_params(const DriftParams& p);

/// exp(gamma (U_hat(x) - U(m1))).
double lyapunov_W(const DriftTarget& t, double gamma, const TorusPoint& x);

struct DriftValue {
  double drift = 0.0;  // (Q W)(x) / W(x) - 1
  double error = 0.0;  // standard error (Monte Carlo) or coarse-grid difference
  double max_reachable = 0.0;  // max U_hat over the evaluated proposals, incl. x
};

/// Drift of the restricted Metropolis walk at x in basin 1.
DriftValue drift_at(const DriftTarget& t, const DriftParams& p, const TorusPoint& x, std::uint64_t stream = 0);

enum class DriftRegion { NearSaddleBoundary, NearSaddleInterior, FarBoundary, FarInterior, InsideMinimumBall };

std::string to_string(DriftRegion r);

struct DriftPoint {
  TorusPoint location;
  DriftRegion region = DriftRegion::FarInterior;
  double drift = 0.0;
  double error = 0.0;
  double w = 1.0;
  double max_reachable = 0.0;
};

struct DriftReport {
  std::string target;
  DriftParams params;
  std::vector<DriftPoint> points;
  double lambda_emp = 0.0;
  double b_emp = 0.0;
  int worst_point = -1;          // index of the outside-ball point with the largest drift
  int nonnegative_near_saddle = 0;  // near-saddle points with drift >= 0
  bool passed = false;
};

/// Stratified scan over the four near/far x boundary/interior regions and
/// the minimum ball. Throws ConfigError when a region cannot be populated.
DriftReport drift_scan(const DriftTarget& t, const DriftParams& p, int budget);

}  // namespace tempergap

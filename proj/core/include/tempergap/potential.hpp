#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tempergap/torus.hpp"

namespace tempergap {

using ParamMap = std::map<std::string, double>;

/// An energy U on the torus with gradient and Hessian access.
///
/// Evaluators are pure; a spec is immutable after construction and may be
/// shared across threads. When gradient or Hessian evaluators are omitted,
/// central finite differences with step 1e-5 stand in for them.
class PotentialSpec {
 public:
  using ValueFn = std::function<double(const TorusPoint&)>;
  using GradientFn = std::function<Vec(const TorusPoint&)>;
  using HessianFn = std::function<Mat(const TorusPoint&)>;

  static constexpr double kFiniteDifferenceStep = 1e-5;

  PotentialSpec(std::string name, int dim, ValueFn value, GradientFn gradient = {},
                HessianFn hessian = {}, ParamMap params = {});

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const ParamMap& params() const { return params_; }

  double value(const TorusPoint& x) const { return value_(x); }
  double operator()(const TorusPoint& x) const { return value_(x); }
  Vec gradient(const TorusPoint& x) const;
  Mat hessian(const TorusPoint& x) const;

  /// False when either derivative falls back to finite differences.
  bool has_analytic_derivatives() const { return static_cast<bool>(gradient_) && static_cast<bool>(hessian_); }

  const std::vector<TorusPoint>& known_critical_points() const { return known_critical_points_; }
  void set_known_critical_points(std::vector<TorusPoint> pts) { known_critical_points_ = std::move(pts); }

 private:
  std::string name_;
  int dim_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  ParamMap params_;
  std::vector<TorusPoint> known_critical_points_;
};

/// Builtin double wells.
///
///   DW1 (d=1): U(x)   = 1/2(1-cos 4 pi x) + delta/2 (1-cos 2 pi x) + mu/2 (1+sin 2 pi x)
///   DW2 (d=2): U(x,y) = 1/2(1-cos 4 pi x) + c_y/2 (1-cos 2 pi y) + mu/2 (1+sin 2 pi x)
///
/// Parameter keys: DW1 {delta >= 0, mu >= 0}; DW2 {c_y > 0, mu >= 0}. Missing
/// keys take the defaults delta = 0, mu = 0, c_y = 6.
PotentialSpec builtin_potential(std::string_view name, const ParamMap& params = {});

/// U == 0 in dimension d.
PotentialSpec flat_potential(int d);

/// Max |U| over a tensor grid with `resolution` nodes per axis.
double sup_norm(const PotentialSpec& pot, int resolution);

/// Max over `samples` random points of |DU - FD(U)| / (1 + |DU|) with FD step 1e-5.
double gradient_consistency_error(const PotentialSpec& pot, int samples, std::uint64_t seed);

/// Same for the Hessian against central differences of the gradient.
double hessian_consistency_error(const PotentialSpec& pot, int samples, std::uint64_t seed);

struct CriticalPoint {
  TorusPoint location;
  double value = 0.0;
  int morse_index = 0;
  std::vector<double> hessian_eigenvalues;  // ascending
  Mat hessian_eigenvectors;                 // columns match hessian_eigenvalues
};

struct CriticalPointSearch {
  std::vector<CriticalPoint> points;  // sorted by (morse index, value)
  std::vector<std::string> warnings;
};

/// Newton iteration from every grid cell where |DU| is locally minimal.
///
/// Damped steps (halve until |DU| decreases), at most 100 iterations,
/// converged once |DU| <= 1e-12. Points closer than 1e-6 are merged. Throws
/// DegeneracyError if a Hessian eigenvalue lies within 1e-8 of zero.
CriticalPointSearch find_critical_points(const PotentialSpec& pot, int grid_resolution);

/// Classify a Hessian into a CriticalPoint record; throws DegeneracyError.
CriticalPoint describe_critical_point(const PotentialSpec& pot, const TorusPoint& x);

struct SaddleHeightResult {
  double value = 0.0;
  TorusPoint bottleneck;
  std::vector<TorusPoint> path;
};

/// Minimax path value between two points over the axis-neighbor grid graph.
SaddleHeightResult saddle_height(const PotentialSpec& pot, const TorusPoint& m1,
                                 const TorusPoint& m2, int grid_resolution);

}  // namespace tempergap

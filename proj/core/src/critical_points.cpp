#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "grid_util.hpp"
#include "tempergap/errors.hpp"
#include "tempergap/potential.hpp"

namespace tempergap {
namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr double kGradientTolerance = 1e-12;
constexpr double kResidualFloor = 1e-9;
constexpr double kMergeDistance = 1e-6;
constexpr double kDegeneracyTolerance = 1e-8;

std::string format_point(const TorusPoint& x) {
  std::ostringstream os;
  os.precision(10);
  os << "(";
  for (int i = 0; i < x.dim(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

std::optional<TorusPoint> newton(const PotentialSpec& pot, TorusPoint x) {
  Vec g = pot.gradient(x);
  double gnorm = g.norm();
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    if (gnorm <= kGradientTolerance) return x;
    const Mat h = pot.hessian(x);
    Eigen::FullPivLU<Mat> lu(h);
    if (!lu.isInvertible()) return gnorm <= kResidualFloor ? std::optional(x) : std::nullopt;
    const Vec step = -lu.solve(g);
    double t = 1.0;
    bool improved = false;
    while (t > 1e-12) {
      const TorusPoint trial = translate(x, t * step);
      const Vec gt = pot.gradient(trial);
      if (gt.norm() < gnorm) {
        x = trial;
        g = gt;
        gnorm = gt.norm();
        improved = true;
        break;
      }
      t *= 0.5;
    }
    // Stalled at the round-off floor counts as converged.
    if (!improved) return gnorm <= kResidualFloor ? std::optional(x) : std::nullopt;
  }
  return gnorm <= kResidualFloor ? std::optional(x) : std::nullopt;
}

bool gradient_changes_sign(const PotentialSpec& pot, const detail::PeriodicGrid& grid,
                           std::int64_t node) {
  const auto nbrs = grid.block_neighbors(node, 1);
  const int d = pot.dim();
  for (int i = 0; i < d; ++i) {
    bool neg = false;
    bool pos = false;
    for (auto n : nbrs) {
      const double gi = pot.gradient(grid.point(n))[i];
      neg = neg || gi < 0.0;
      pos = pos || gi > 0.0;
    }
    if (!(neg && pos)) return false;
  }
  return true;
}

}  // namespace

CriticalPoint describe_critical_point(const PotentialSpec& pot, const TorusPoint& x) {
  CriticalPoint cp;
  cp.location = x;
  cp.value = pot.value(x);
  Eigen::SelfAdjointEigenSolver<Mat> eig(pot.hessian(x));
  const int d = pot.dim();
  cp.hessian_eigenvalues.resize(d);
  cp.hessian_eigenvectors = eig.eigenvectors();
  cp.morse_index = 0;
  for (int i = 0; i < d; ++i) {
    const double lam = eig.eigenvalues()[i];
    if (std::abs(lam) <= kDegeneracyTolerance) {
      throw DegeneracyError("degenerate critical point at " + format_point(x) +
                            ": Hessian eigenvalue " + std::to_string(lam));
    }
    cp.hessian_eigenvalues[i] = lam;
    if (lam < 0.0) ++cp.morse_index;
  }
  return cp;
}

CriticalPointSearch find_critical_points(const PotentialSpec& pot, int grid_resolution) {
  if (grid_resolution < 16) throw std::invalid_argument("find_critical_points: resolution must be >= 16");
  const detail::PeriodicGrid grid(pot.dim(), grid_resolution);
  std::vector<double> gnorm(static_cast<std::size_t>(grid.size()));
  for (std::int64_t n = 0; n < grid.size(); ++n) gnorm[n] = pot.gradient(grid.point(n)).norm();

  CriticalPointSearch out;
  std::vector<TorusPoint> found;
  for (std::int64_t n = 0; n < grid.size(); ++n) {
    bool local_min = true;
    for (auto m : grid.block_neighbors(n, 1)) {
      if (gnorm[m] < gnorm[n]) {
        local_min = false;
        break;
      }
    }
    if (!local_min) continue;
    auto root = newton(pot, grid.point(n));
    if (!root) {
      if (gradient_changes_sign(pot, grid, n)) {
        out.warnings.push_back("Newton did not converge from seed " + format_point(grid.point(n)) +
                               " where every gradient component changes sign");
      }
      continue;
    }
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const TorusPoint& p) {
      return torus_distance(p, *root) < kMergeDistance;
    });
    if (!duplicate) found.push_back(*root);
  }

  for (const auto& p : found) out.points.push_back(describe_critical_point(pot, p));
  std::sort(out.points.begin(), out.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.morse_index != b.morse_index) return a.morse_index < b.morse_index;
    if (a.value != b.value) return a.value < b.value;
    for (int i = 0; i < a.location.dim(); ++i) {
      if (a.location[i] != b.location[i]) return a.location[i] < b.location[i];
    }
    return false;
  });
  return out;
}

}  // namespace tempergap

#include "tempergap/basin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "grid_util.hpp"
#include "tempergap/errors.hpp"
#include "tempergap/parallel.hpp"

namespace tempergap {
namespace {

constexpr double kStallGradient = 1e-8;
constexpr double kMinimumProximity = 1e-4;
constexpr double kSaddleProximity = 1e-7;
constexpr double kMaxDisplacement = 1e-2;
constexpr double kMinStep = 1e-14;
constexpr double kSaddleKick = 1e-4;

std::vector<Vec> probe_directions(int d) {
  std::vector<Vec> dirs;
  if (d == 1) {
    for (double s : {-1.0, 1.0}) {
      Vec v(1);
      v[0] = s;
      dirs.push_back(v);
    }
  } else if (d == 2) {
    for (int k = 0; k < 64; ++k) {
      const double th = 2.0 * std::numbers::pi * k / 64.0;
      Vec v(2);
      v << std::cos(th), std::sin(th);
      dirs.push_back(v);
    }
  } else {
    RngStream rng(0x5eedba5e, 0);
    for (int k = 0; k < 256; ++k) {
      Vec v = sample_unit_ball(d, rng);
      if (v.norm() > 1e-3) dirs.push_back(v / v.norm());
    }
  }
  return dirs;
}

}  // namespace

struct BasinClassifier::LabelMemo {
  std::mutex mutex;
  std::map<int, std::shared_ptr<const std::vector<std::int8_t>>> grids;
};

BasinClassifier::BasinClassifier(PotentialSpec pot, int critical_resolution)
    : BasinClassifier(pot, find_critical_points(pot, critical_resolution)) {}

BasinClassifier::BasinClassifier(PotentialSpec pot, const CriticalPointSearch& critical)
    : pot_(std::move(pot)), critical_(critical.points), memo_(std::make_shared<LabelMemo>()) {
  std::vector<CriticalPoint> minima;
  for (const auto& cp : critical_) {
    if (cp.morse_index == 0) minima.push_back(cp);
  }
  if (minima.size() != 2) {
    throw AssumptionViolation("expected exactly two local minima, found " + std::to_string(minima.size()));
  }
  // Deeper well first; equal depths ordered by distance to the origin.
  const TorusPoint origin = wrap(Vec::Zero(pot_.dim()));
  std::sort(minima.begin(), minima.end(), [&](const CriticalPoint& a, const CriticalPoint& b) {
    if (std::abs(a.value - b.value) > 1e-12) return a.value < b.value;
    return torus_distance(a.location, origin) < torus_distance(b.location, origin);
  });
  minima_ = {minima[0], minima[1]};

  double curvature = 1.0;
  for (const auto& cp : critical_) {
    for (double lam : cp.hessian_eigenvalues) curvature = std::max(curvature, std::abs(lam));
  }
  dt_max_ = 0.5 / curvature;

  compute_capture_radii();
  resolve_saddles();
}

void BasinClassifier::compute_capture_radii() {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& cp : critical_) {
    if (cp.morse_index > 0) lowest = std::min(lowest, cp.value);
  }
  const auto dirs = probe_directions(dim());
  for (int i = 0; i < 2; ++i) {
    const auto& m = minima_[i];
    const double level = std::isfinite(lowest) ? m.value + 0.5 * (lowest - m.value) : m.value + 1.0;
    auto inside = [&](double r) {
      for (int j = 1; j <= 8; ++j) {
        for (const auto& v : dirs) {
          if (pot_.value(translate(m.location, (r * j / 8.0) * v)) >= level) return false;
        }
      }
      return true;
    };
    double lo = 0.0;
    double hi = 0.5;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (inside(mid) ? lo : hi) = mid;
    }
    capture_[i] = std::max(0.9 * lo, kMinimumProximity);
  }
}

void BasinClassifier::resolve_saddles() {
  for (const auto& cp : critical_) {
    if (cp.morse_index != 1) continue;
    const Vec vu = cp.hessian_eigenvectors.col(0);
    int labels[2] = {0, 0};
    for (int s = 0; s < 2; ++s) {
      const TorusPoint start = translate(cp.location, (s == 0 ? kSaddleKick : -kSaddleKick) * vu);
      try {
        labels[s] = flow(start).label;
      } catch (const ConvergenceError&) {
        labels[s] = 0;
      }
    }
    if (labels[0] != 0 && labels[0] == labels[1]) {
      interior_saddles_.emplace_back(cp, labels[0]);
    } else {
      boundary_saddles_.push_back(cp);
    }
  }
}

int BasinClassifier::captured(const TorusPoint& y) const {
  for (int i = 0; i < 2; ++i) {
    if (torus_distance(y, minima_[i].location) < capture_[i]) return i + 1;
  }
  return 0;
}

BasinClassifier::FlowOutcome BasinClassifier::flow(const TorusPoint& x) const {
  TorusPoint y = x;
  double u = pot_.value(y);
  double dt = dt_max_;
  for (long step = 0; step < kMaxFlowSteps; ++step) {
    if (int c = captured(y)) return {c};
    for (const auto& cp : critical_) {
      if (cp.morse_index == 0) continue;
      if (torus_distance(y, cp.location) >= kSaddleProximity) continue;
      for (const auto& [s, lab] : interior_saddles_) {
        if (torus_distance(s.location, cp.location) == 0.0) return {lab};
      }
      return {0};
    }
    const Vec g = pot_.gradient(y);
    const double gn = g.norm();
    if (gn <= kStallGradient) {
      for (int i = 0; i < 2; ++i) {
        if (torus_distance(y, minima_[i].location) <= kMinimumProximity) return {i + 1};
      }
      int best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < interior_saddles_.size(); ++k) {
        const double dist = torus_distance(y, interior_saddles_[k].first.location);
        if (dist < best_dist) {
          best_dist = dist;
          best = static_cast<int>(k);
        }
      }
      if (best >= 0 && best_dist <= kMinimumProximity) return {interior_saddles_[best].second};
      return {0};
    }
    dt = std::min({dt, dt_max_, kMaxDisplacement / gn});
    for (;;) {
      const Vec k1 = -g;
      const Vec k2 = -pot_.gradient(translate(y, 0.5 * dt * k1));
      const Vec k3 = -pot_.gradient(translate(y, 0.5 * dt * k2));
      const Vec k4 = -pot_.gradient(translate(y, dt * k3));
      const Vec inc = (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const TorusPoint next = translate(y, inc);
      const double un = pot_.value(next);
      // Energy comparisons tolerate round-off so the step does not collapse
      // once decreases fall below machine precision.
      if (un <= u + 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(u))) {
        y = next;
        u = un;
        dt *= 1.5;
        break;
      }
      dt *= 0.5;
      if (dt < kMinStep) {
        // The energy can no longer decrease at representable step sizes.
        for (int i = 0; i < 2; ++i) {
          if (torus_distance(y, minima_[i].location) <= kMinimumProximity) return {i + 1};
        }
        return {0};
      }
    }
  }
  throw ConvergenceError("gradient flow did not settle within 10^6 steps");
}

int BasinClassifier::label(const TorusPoint& x) const {
  if (x.dim() != dim()) throw std::invalid_argument("classify_basin: dimension mismatch");
  const int l = flow(x).label;
  if (l == 0) throw UndefinedBasinError("gradient flow stalls on the basin boundary");
  return l;
}

int BasinClassifier::try_label(const TorusPoint& x) const {
  if (x.dim() != dim()) throw std::invalid_argument("classify_basin: dimension mismatch");
  return flow(x).label;
}

std::shared_ptr<const std::vector<std::int8_t>> BasinClassifier::grid_labels(int res) const {
  {
    std::lock_guard lock(memo_->mutex);
    auto it = memo_->grids.find(res);
    if (it != memo_->grids.end()) return it->second;
  }
  const detail::PeriodicGrid grid(dim(), res);
  auto labels = std::make_shared<std::vector<std::int8_t>>(static_cast<std::size_t>(grid.size()));
  parallel_for(grid.size(), [&](std::int64_t n) {
    (*labels)[n] = static_cast<std::int8_t>(try_label(grid.point(n)));
  });
  std::lock_guard lock(memo_->mutex);
  auto [it, inserted] = memo_->grids.emplace(res, std::move(labels));
  return it->second;
}

BasinCache::BasinCache(BasinClassifier classifier, int resolution)
    : classifier_(std::move(classifier)), res_(resolution) {
  if (classifier_.dim() > 2) throw std::invalid_argument("BasinCache supports d <= 2");
  if (resolution < 16) throw ResolutionError("BasinCache resolution must be >= 16");
  labels_ = classifier_.grid_labels(resolution);
}

int BasinCache::cached(const TorusPoint& x) const {
  const int d = classifier_.dim();
  int idx[2] = {0, 0};
  for (int i = 0; i < d; ++i) idx[i] = static_cast<int>(std::lround(x[i] * res_)) % res_;
  auto at = [&](int i0, int i1) {
    const int a = ((i0 % res_) + res_) % res_;
    const int b = ((i1 % res_) + res_) % res_;
    return (*labels_)[static_cast<std::size_t>(b) * res_ + a];
  };
  const std::int8_t center = d == 1 ? at(idx[0], 0) : at(idx[0], idx[1]);
  if (center == 0) return 0;
  const int span1 = d == 2 ? 2 : 0;
  for (int dj = -span1; dj <= span1; ++dj) {
    for (int di = -2; di <= 2; ++di) {
      if (at(idx[0] + di, idx[1] + dj) != center) return 0;
    }
  }
  return center;
}

int BasinCache::label(const TorusPoint& x) const {
  const int c = cached(x);
  return c != 0 ? c : classifier_.label(x);
}

int BasinCache::try_label(const TorusPoint& x) const {
  const int c = cached(x);
  return c != 0 ? c : classifier_.try_label(x);
}

std::array<double, 2> basin_masses(const BasinClassifier& classifier, double eps, int resolution) {
  if (!(eps > 0.0)) throw std::invalid_argument("basin_masses: temperature must be positive");
  if (resolution < 2) throw ResolutionError("basin_masses: resolution must be >= 2");
  const auto labels = classifier.grid_labels(resolution);
  const detail::PeriodicGrid grid(classifier.dim(), resolution);
  std::vector<double> logw(static_cast<std::size_t>(grid.size()));
  double top = -std::numeric_limits<double>::infinity();
  for (std::int64_t n = 0; n < grid.size(); ++n) {
    logw[n] = -classifier.potential().value(grid.point(n)) / eps;
    top = std::max(top, logw[n]);
  }
  double mass[3] = {0.0, 0.0, 0.0};
  for (std::int64_t n = 0; n < grid.size(); ++n) mass[(*labels)[n]] += std::exp(logw[n] - top);
  const double total = mass[0] + mass[1] + mass[2];
  return {(mass[1] + 0.5 * mass[0]) / total, (mass[2] + 0.5 * mass[0]) / total};
}

double mass_of_basin(const BasinClassifier& classifier, double eps, int label, int resolution) {
  if (label != 1 && label != 2) throw std::invalid_argument("mass_of_basin: label must be 1 or 2");
  return basin_masses(classifier, eps, resolution)[label - 1];
}

}  // namespace tempergap

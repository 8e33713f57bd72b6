#include "tempergap/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tempergap/errors.hpp"
#include "tempergap/parallel.hpp"
#include "tempergap/rng.hpp"

namespace tempergap {
namespace {

int basin_of(const BasinGeometry& g, const TorusPoint& y) {
  try {
    return g.label(y);
  } catch (const UndefinedBasinError&) {
    return 0;
  }
}

struct Node {
  Vec zeta;
  double weight;
};

std::vector<Node> ball_nodes(int d, int radial, int angular) {
  std::vector<Node> nodes;
  if (d == 1) {
    const int n = 2 * radial;
    for (int j = 0; j < n; ++j) {
      Vec z(1);
      z[0] = -1.0 + (j + 0.5) * 2.0 / n;
      nodes.push_back({z, 1.0 / n});
    }
  } else if (d == 2) {
    double total = 0.0;
    for (int i = 0; i < radial; ++i) {
      const double r = (i + 0.5) / radial;
      for (int j = 0; j < angular; ++j) {
        const double th = 2.0 * std::numbers::pi * (j + 0.5) / angular;
        Vec z(2);
        z << r * std::cos(th), r * std::sin(th);
        nodes.push_back({z, r});
        total += r;
      }
    }
    for (auto& n : nodes) n.weight /= total;
  } else {
    throw std::invalid_argument("drift_at: tensor-grid quadrature supports d <= 2");
  }
  return nodes;
}

struct Integrand {
  const DriftTarget& t;
  const DriftParams& p;
  const TorusPoint& x;
  double ux;
  double max_u;
  bool near_boundary;  // B(x, h) may cross the boundary

  double operator()(const Vec& zeta) {
    const TorusPoint y = translate(x, p.h * zeta);
    if (near_boundary && basin_of(*t.geometry, y) != 1) return 0.0;
    const double uy = t.potential.value(y);
    max_u = std::max(max_u, uy);
    const double du = uy - ux;
    return std::min(1.0, std::exp(-du / p.eps)) * std::expm1(p.gamma * du);
  }
};

}  // namespace

DriftTarget drift_target(const PerturbedPotential& pp) {
  DriftTarget t{pp.as_potential(), pp.geometry_ptr(), pp.frame().saddle.location, pp.geometry().classifier().minimum(1),
                pp.base().value(pp.geometry().classifier().minimum(1)), pp.support_radius(), "perturbed"};
  return t;
}

DriftTarget unperturbed_target(const PerturbedPotential& pp) {
  DriftTarget t = drift_target(pp);
  t.potential = pp.base();
  t.name = "unperturbed";
  return t;
}

QuadratureScheme quadrature_scheme_from_string(const std::string& s) {
  if (s == "tensor-grid" || s == "grid") return QuadratureScheme::TensorGrid;
  if (s == "monte-carlo" || s == "mc") return QuadratureScheme::MonteCarlo;
  throw std::invalid_argument("unknown quadrature scheme '" + s + "'");
}

void validate_drift_params(const DriftParams& p) {
  if (!(p.gamma >= 0.0)) throw std::invalid_argument("drift: gamma must be >= 0");
  if (!(p.h > 0.0) || p.h > 1.0) throw std::invalid_argument("drift: h must lie in (0, 1]");
  if (!(p.eps > 0.0)) throw std::invalid_argument("drift: eps must be positive");
  if (p.eta > 0.0 && p.h > p.eta * p.eps * p.eps * (1.0 + 1e-12)) {
    throw std::invalid_argument("drift: h exceeds eta * eps^2");
  }
  if (p.radial < 2 || p.angular < 4) throw std::invalid_argument("drift: quadrature grid too coarse");
  if (p.samples < 2) throw std::invalid_argument("drift: need at least two Monte Carlo samples");
}

double lyapunov_W(const DriftTarget& t, double gamma, const TorusPoint& x) {
  return std::exp(gamma * (t.potential.value(x) - t.offset));
}

DriftValue drift_at(const DriftTarget& t, const DriftParams& p, const TorusPoint& x, std::uint64_t stream) {
  validate_drift_params(p);
  if (basin_of(*t.geometry, x) != 1) throw std::invalid_argument("drift_at: point is not in basin 1");
  DriftValue out;
  const double reach = p.h + 2.0 * t.geometry->polyline_error() + 1e-12;
  Integrand f{t, p, x, t.potential.value(x), 0.0, t.geometry->nearest(x).distance <= reach};
  f.max_u = f.ux;
  if (p.gamma == 0.0) {
    out.max_reachable = f.ux;
    return out;
  }
  const int d = x.dim();
  if (p.scheme == QuadratureScheme::TensorGrid) {
    const auto fine = ball_nodes(d, p.radial, p.angular);
    const auto coarse = ball_nodes(d, p.radial / 2, p.angular / 2);
    double s_fine = 0.0;
    double s_coarse = 0.0;
    for (const auto& n : fine) s_fine += n.weight * f(n.zeta);
    for (const auto& n : coarse) s_coarse += n.weight * f(n.zeta);
    out.drift = s_fine;
    out.error = std::abs(s_fine - s_coarse);
  } else {
    RngStream rng(p.seed, 0x1000 + stream);
    const long pairs = std::max<long>(1, p.samples / 2);
    double mean = 0.0;
    double m2 = 0.0;
    for (long k = 0; k < pairs; ++k) {
      const Vec z = sample_unit_ball(d, rng);
      const double v = 0.5 * (f(z) + f(-z));
      const double delta = v - mean;
      mean += delta / static_cast<double>(k + 1);
      m2 += delta * (v - mean);
    }
    out.drift = mean;
    out.error = pairs > 1 ? std::sqrt(m2 / static_cast<double>(pairs - 1) / static_cast<double>(pairs)) : 0.0;
  }
  out.max_reachable = f.max_u;
  return out;
}

std::string to_string(DriftRegion r) {
  switch (r) {
    case DriftRegion::NearSaddleBoundary: return "near-saddle-boundary";
    case DriftRegion::NearSaddleInterior: return "near-saddle-interior";
    case DriftRegion::FarBoundary: return "far-boundary";
    case DriftRegion::FarInterior: return "far-interior";
    case DriftRegion::InsideMinimumBall: return "inside-minimum-ball";
  }
  return "unknown";
}

DriftReport drift_scan(const DriftTarget& t, const DriftParams& p, int budget) {
  validate_drift_params(p);
  if (budget < 100) throw std::invalid_argument("drift_scan: budget must be >= 100");
  const BasinGeometry& g = *t.geometry;
  const int d = g.dim();
  const double ball = p.a * std::sqrt(p.eps);
  const double near = t.near_radius;
  RngStream rng(p.seed, 0xd71f7);

  std::vector<DriftPoint> pts;
  auto add = [&](const TorusPoint& x, DriftRegion r) { pts.push_back({x, r}); };

  // Boundary points on the basin-1 side of every component.
  struct BoundarySite {
    TorusPoint b;
    Vec inward;
    bool near_saddle;
  };
  std::vector<BoundarySite> sites;
  for (const auto& c : g.components()) {
    for (const auto& v : c.vertices) {
      sites.push_back({v, -g.normal_at(v), torus_distance(v, t.saddle) < near});
    }
  }
  const double deltas[3] = {0.1, 0.5, 1.0};
  const int per = budget / 5;
  const long max_tries = 200000L * std::max(1, per);

  auto boundary_region = [&](bool want_near, DriftRegion region) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(sites.size()); ++i) {
      if (sites[i].near_saddle == want_near) idx.push_back(i);
    }
    if (idx.empty()) throw ConfigError("drift_scan: no boundary points in region " + to_string(region));
    int made = 0;
    long tries = 0;
    while (made < per) {
      if (++tries > max_tries) throw ConfigError("drift_scan: cannot populate region " + to_string(region));
      const auto& s = sites[idx[rng.uniform_index(idx.size())]];
      const TorusPoint x = translate(s.b, deltas[made % 3] * p.h * s.inward);
      if (basin_of(g, x) != 1 || torus_distance(x, t.minimum) < ball) continue;
      add(x, region);
      ++made;
    }
  };

  auto interior_region = [&](bool want_near, DriftRegion region) {
    int made = 0;
    long tries = 0;
    while (made < per) {
      if (++tries > max_tries) throw ConfigError("drift_scan: cannot populate region " + to_string(region));
      TorusPoint x;
      if (want_near) {
        x = translate(t.saddle, near * sample_unit_ball(d, rng));
      } else {
        Vec raw(d);
        for (int i = 0; i < d; ++i) raw[i] = rng.uniform();
        x = wrap(raw);
      }
      const bool is_near = torus_distance(x, t.saddle) < near;
      if (is_near != want_near) continue;
      if (torus_distance(x, t.minimum) < ball) continue;
      if (g.nearest(x).distance <= p.h) continue;
      if (basin_of(g, x) != 1) continue;
      add(x, region);
      ++made;
    }
  };

  boundary_region(true, DriftRegion::NearSaddleBoundary);
  interior_region(true, DriftRegion::NearSaddleInterior);
  boundary_region(false, DriftRegion::FarBoundary);
  interior_region(false, DriftRegion::FarInterior);
  const int inside = budget - 4 * per;
  for (int k = 0; k < inside; ++k) {
    const TorusPoint x = translate(t.minimum, ball * sample_unit_ball(d, rng));
    add(x, DriftRegion::InsideMinimumBall);
  }
  if (ball >= g.nearest(t.minimum).distance) {
    throw ConfigError("drift_scan: the minimum ball reaches the basin boundary");
  }

  parallel_for(static_cast<std::int64_t>(pts.size()), [&](std::int64_t i) {
    const auto v = drift_at(t, p, pts[i].location, static_cast<std::uint64_t>(i));
    pts[i].drift = v.drift;
    pts[i].error = v.error;
    pts[i].w = lyapunov_W(t, p.gamma, pts[i].location);
    pts[i].max_reachable = v.max_reachable;
  });

  DriftReport r;
  r.target = t.name;
  r.params = p;
  const double scale = p.gamma * p.h * p.h;
  r.lambda_emp = std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  bool margins_ok = true;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const auto& q = pts[i];
    if (q.region == DriftRegion::InsideMinimumBall) continue;
    const double lam = scale > 0.0 ? -q.drift / scale : 0.0;
    r.lambda_emp = std::min(r.lambda_emp, lam);
    if (q.drift > worst) {
      worst = q.drift;
      r.worst_point = i;
    }
    if (q.drift + 3.0 * q.error > -p.tolerance * scale) margins_ok = false;
    if ((q.region == DriftRegion::NearSaddleBoundary || q.region == DriftRegion::NearSaddleInterior) && q.drift >= 0.0) {
      ++r.nonnegative_near_saddle;
    }
  }
  const double lam_pos = std::max(r.lambda_emp, 0.0);
  r.b_emp = 0.0;
  for (const auto& q : pts) {
    if (q.region != DriftRegion::InsideMinimumBall) continue;
    r.b_emp = std::max(r.b_emp, q.w * (q.drift + lam_pos * scale));
  }
  r.points = std::move(pts);
  r.passed = scale > 0.0 && margins_ok && r.lambda_emp >= p.tolerance && std::isfinite(r.b_emp);
  return r;
}

}  // namespace tempergap

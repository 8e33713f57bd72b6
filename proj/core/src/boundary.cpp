#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "tempergap/basin.hpp"
#include "tempergap/errors.hpp"

namespace tempergap {
namespace {

constexpr double kBisectionTolerance = 1e-8;
constexpr double kOrientationProbe = 1e-4;
constexpr double kFrameTolerance = 1e-6;
constexpr int kMaxVertices = 100000;

Vec rot90(const Vec& t) {
  Vec n(2);
  n << -t[1], t[0];
  return n;
}

// Bisect between a and b (labels la != lb) along the segment to 1e-8.
Vec bisect(const BasinClassifier& cls, Vec a, Vec b, int la, int lb) {
  (void)lb;
  while ((b - a).norm() > kBisectionTolerance) {
    const Vec mid = 0.5 * (a + b);
    const int lm = cls.try_label(wrap(mid));
    if (lm == 0) return mid;
    if (lm == la) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

BoundaryComponent trace_component(const BasinClassifier& cls, const CriticalPoint& saddle, double res) {
  const Vec start = saddle.location.coords();
  const Vec t0 = saddle.hessian_eigenvectors.col(1).normalized();
  BoundaryComponent comp;
  comp.vertices.push_back(saddle.location);

  const Vec n0 = rot90(t0);
  const int plus = cls.try_label(translate(saddle.location, kOrientationProbe * n0));
  const int minus = cls.try_label(translate(saddle.location, -kOrientationProbe * n0));
  if (plus == 2 && minus == 1) {
    comp.orientation = 1;
  } else if (plus == 1 && minus == 2) {
    comp.orientation = -1;
  } else {
    throw GeometryError("saddle does not separate the two basins along its unstable direction");
  }

  Vec prev = start;
  Vec dir = t0;
  for (int k = 1; k < kMaxVertices; ++k) {
    const Vec predicted = prev + res * dir;
    const Vec nrm = rot90(dir);
    Vec vertex;
    bool found = false;
    for (double w = res; w <= 16.0 * res && !found; w *= 2.0) {
      const Vec a = predicted - w * nrm;
      const Vec b = predicted + w * nrm;
      const int la = cls.try_label(wrap(a));
      const int lb = cls.try_label(wrap(b));
      if (la == 0) {
        vertex = a;
        found = true;
      } else if (lb == 0) {
        vertex = b;
        found = true;
      } else if (la != lb) {
        vertex = bisect(cls, a, b, la, lb);
        found = true;
      }
    }
    if (!found) throw ExtractionError("boundary corrector lost the separatrix");
    const TorusPoint v = wrap(vertex);
    const double back = torus_distance(v, saddle.location);
    if (k > 3 && back < 1.5 * res && torus_displacement(saddle.location, v).dot(t0) < 0.0) {
      if (back >= 0.5 * res) comp.vertices.push_back(v);
      return comp;
    }
    comp.vertices.push_back(v);
    dir = (vertex - prev).normalized();
    prev = vertex;
  }
  throw ExtractionError("boundary polyline did not close within 10^5 vertices");
}

}  // namespace

BasinGeometry::BasinGeometry(BasinCache cache, std::vector<BoundaryComponent> components, double resolution)
    : cache_(std::move(cache)), components_(std::move(components)), resolution_(resolution) {
  if (components_.empty()) throw GeometryError("basin geometry needs at least one boundary component");
  const int d = dim();
  if (d != 1 && d != 2) throw std::invalid_argument("basin geometry supports d in {1, 2}");

  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (std::size_t j = i + 1; j < components_.size(); ++j) {
      for (const auto& a : components_[i].vertices) {
        for (const auto& b : components_[j].vertices) min_gap = std::min(min_gap, torus_distance(a, b));
      }
    }
  }
  r0_ = std::min(0.25, 0.5 * min_gap);

  polyline_error_ = kBisectionTolerance;
  if (d == 2) {
    for (int c = 0; c < static_cast<int>(components_.size()); ++c) {
      const auto& vs = components_[c].vertices;
      const int n = static_cast<int>(vs.size());
      for (int k = 0; k < n; ++k) {
        const Vec dir = torus_displacement(vs[k], vs[(k + 1) % n]);
        segments_.push_back({c, k, vs[k], dir});
        const Vec next = torus_displacement(vs[(k + 1) % n], vs[(k + 2) % n]);
        const double cosang = std::clamp(dir.normalized().dot(next.normalized()), -1.0, 1.0);
        polyline_error_ = std::max(polyline_error_, kBisectionTolerance + dir.norm() * std::acos(cosang) / 4.0);
      }
    }
    build_index();
  }
}

void BasinGeometry::build_index() {
  bucket_segments_.assign(static_cast<std::size_t>(buckets_) * buckets_, {});
  for (int s = 0; s < static_cast<int>(segments_.size()); ++s) {
    const auto& seg = segments_[s];
    const Vec a = seg.start.coords();
    const Vec b = a + seg.dir;
    const int x0 = static_cast<int>(std::floor(std::min(a[0], b[0]) * buckets_));
    const int x1 = static_cast<int>(std::floor(std::max(a[0], b[0]) * buckets_));
    const int y0 = static_cast<int>(std::floor(std::min(a[1], b[1]) * buckets_));
    const int y1 = static_cast<int>(std::floor(std::max(a[1], b[1]) * buckets_));
    for (int i = x0; i <= x1; ++i) {
      for (int j = y0; j <= y1; ++j) {
        const int ci = ((i % buckets_) + buckets_) % buckets_;
        const int cj = ((j % buckets_) + buckets_) % buckets_;
        bucket_segments_[static_cast<std::size_t>(cj) * buckets_ + ci].push_back(s);
      }
    }
  }
}

BasinGeometry::SegmentHit BasinGeometry::nearest_segment(const TorusPoint& x) const {
  SegmentHit best{std::numeric_limits<double>::infinity(), nullptr, 0.0, Vec()};
  auto consider = [&](const Segment& seg) {
    const Vec p = torus_displacement(seg.start, x);
    const double len2 = seg.dir.squaredNorm();
    const double s = len2 > 0.0 ? std::clamp(p.dot(seg.dir) / len2, 0.0, 1.0) : 0.0;
    const double dist = (p - s * seg.dir).norm();
    if (dist < best.distance) best = {dist, &seg, s, seg.start.coords() + s * seg.dir};
  };
  const int cx = static_cast<int>(std::floor(x[0] * buckets_)) % buckets_;
  const int cy = static_cast<int>(std::floor(x[1] * buckets_)) % buckets_;
  for (int r = 0; r <= buckets_ / 2; ++r) {
    for (int i = -r; i <= r; ++i) {
      for (int j = -r; j <= r; ++j) {
        if (std::max(std::abs(i), std::abs(j)) != r) continue;
        const int ci = (((cx + i) % buckets_) + buckets_) % buckets_;
        const int cj = (((cy + j) % buckets_) + buckets_) % buckets_;
        for (int s : bucket_segments_[static_cast<std::size_t>(cj) * buckets_ + ci]) consider(segments_[s]);
      }
    }
    if (best.segment && best.distance <= static_cast<double>(r) / buckets_) break;
  }
  if (!best.segment) throw GeometryError("boundary index is empty");
  return best;
}

BoundaryProjection BasinGeometry::nearest(const TorusPoint& x) const {
  if (x.dim() != dim()) throw std::invalid_argument("project_boundary: dimension mismatch");
  BoundaryProjection out;
  if (dim() == 1) {
    out.distance = std::numeric_limits<double>::infinity();
    for (int c = 0; c < static_cast<int>(components_.size()); ++c) {
      const double dist = torus_distance(x, components_[c].vertices.front());
      if (dist < out.distance) {
        out = {components_[c].vertices.front(), dist, c};
      }
    }
    return out;
  }
  const auto hit = nearest_segment(x);
  out.xi = wrap(hit.xi_raw);
  out.distance = hit.distance;
  out.component = hit.segment->component;
  return out;
}

BoundaryProjection BasinGeometry::project(const TorusPoint& x) const {
  auto out = nearest(x);
  if (out.distance >= r0_) throw OutOfTubeError("point lies outside the tubular neighborhood of the boundary");
  return out;
}

Vec BasinGeometry::vertex_tangent(int component, int index) const {
  const auto& vs = components_[component].vertices;
  const int n = static_cast<int>(vs.size());
  const int prev = (index - 1 + n) % n;
  const int next = (index + 1) % n;
  return torus_displacement(vs[prev], vs[next]).normalized();
}

Vec BasinGeometry::normal_at(const TorusPoint& b) const {
  if (dim() == 1) {
    const auto p = nearest(b);
    Vec n(1);
    n[0] = components_[p.component].orientation;
    return n;
  }
  const auto hit = nearest_segment(b);
  const auto& seg = *hit.segment;
  const int n = static_cast<int>(components_[seg.component].vertices.size());
  const Vec t = ((1.0 - hit.s) * vertex_tangent(seg.component, seg.index) +
                 hit.s * vertex_tangent(seg.component, (seg.index + 1) % n))
                    .normalized();
  return components_[seg.component].orientation * rot90(t);
}

double BasinGeometry::signed_distance(const TorusPoint& x) const {
  if (dim() == 1) {
    const auto p = project(x);
    if (p.distance == 0.0) return 0.0;
    const double side = torus_displacement(p.xi, x)[0] * components_[p.component].orientation;
    return side > 0.0 ? p.distance : -p.distance;
  }
  const auto hit = nearest_segment(x);
  if (hit.distance >= r0_) throw OutOfTubeError("point lies outside the tubular neighborhood of the boundary");
  if (hit.distance < 1e-15) return 0.0;
  const auto& seg = *hit.segment;
  const Vec diff = torus_displacement(seg.start, x) - hit.s * seg.dir;
  const Vec n = components_[seg.component].orientation * rot90(seg.dir);
  return diff.dot(n) > 0.0 ? hit.distance : -hit.distance;
}

BoundaryFrame BasinGeometry::frame(const TorusPoint& b) const {
  const auto p = nearest(b);
  if (p.distance > kFrameTolerance) throw std::invalid_argument("frame: point is not on the boundary");
  BoundaryFrame f;
  f.base = b;
  f.normal = normal_at(b);
  const auto& cls = classifier();
  if (cls.try_label(translate(b, kOrientationProbe * f.normal)) != 2 ||
      cls.try_label(translate(b, -kOrientationProbe * f.normal)) != 1) {
    throw GeometryError("boundary normal orientation is inconsistent with the basin labels");
  }
  if (dim() == 2) f.tangents.push_back(rot90(f.normal));
  return f;
}

int BasinGeometry::label(const TorusPoint& x) const {
  const auto p = nearest(x);
  if (p.distance < r0_) {
    if (p.distance <= 2.0 * polyline_error_) return classifier().label(x);
    return signed_distance(x) < 0.0 ? 1 : 2;
  }
  return cache_.label(x);
}

void BasinGeometry::write_csv(std::ostream& os) const {
  os << "component_id,vertex_index,x,y\n";
  os.precision(17);
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const auto& vs = components_[c].vertices;
    for (std::size_t k = 0; k < vs.size(); ++k) {
      os << c << ',' << k << ',' << vs[k][0] << ',';
      if (vs[k].dim() > 1) os << vs[k][1];
      os << '\n';
    }
  }
}

BasinGeometry extract_boundary(const BasinClassifier& cls, double resolution, int cache_resolution) {
  if (!(resolution > 0.0) || resolution > 0.05) {
    throw std::invalid_argument("extract_boundary: resolution must lie in (0, 0.05]");
  }
  const int d = cls.dim();
  if (d != 1 && d != 2) throw std::invalid_argument("extract_boundary: d must be 1 or 2");
  std::vector<BoundaryComponent> comps;
  for (const auto& s : cls.boundary_saddles()) {
    if (d == 1) {
      BoundaryComponent c;
      c.vertices.push_back(s.location);
      Vec e(1);
      e[0] = 1.0;
      const int right = cls.try_label(translate(s.location, kOrientationProbe * e));
      c.orientation = right == 2 ? 1 : -1;
      comps.push_back(std::move(c));
      continue;
    }
    bool covered = false;
    for (const auto& c : comps) {
      for (const auto& v : c.vertices) covered = covered || torus_distance(v, s.location) < 2.0 * resolution;
    }
    if (!covered) comps.push_back(trace_component(cls, s, resolution));
  }
  return BasinGeometry(BasinCache(cls, cache_resolution), std::move(comps), resolution);
}

}  // namespace tempergap

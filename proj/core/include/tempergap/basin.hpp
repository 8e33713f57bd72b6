#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "tempergap/potential.hpp"

namespace tempergap {

/// Gradient-flow basin classification for a two-minimum potential.
///
/// Label 1 is the deeper minimum m1 (ties broken by distance to the origin),
/// label 2 the other one. Integration is RK4 on dy/dt = -DU(y) with the step
/// halved whenever the energy fails to decrease. A flow stops as soon as it
/// enters the capture ball of a minimum: a ball contained in the sublevel set
/// below the lowest non-minimum critical value, from which the flow cannot
/// leave the minimum's basin.
class BasinClassifier {
 public:
  static constexpr int kDefaultCriticalResolution = 64;
  static constexpr long kMaxFlowSteps = 1'000'000;

  /// Throws AssumptionViolation unless the search found exactly two minima.
  BasinClassifier(PotentialSpec pot, const CriticalPointSearch& critical);
  explicit BasinClassifier(PotentialSpec pot, int critical_resolution = kDefaultCriticalResolution);

  const PotentialSpec& potential() const { return pot_; }
  int dim() const { return pot_.dim(); }
  const TorusPoint& minimum(int label) const { return minima_.at(label - 1).location; }
  const CriticalPoint& minimum_info(int label) const { return minima_.at(label - 1); }
  const std::vector<CriticalPoint>& critical_points() const { return critical_; }
  double capture_radius(int label) const { return capture_.at(label - 1); }

  /// Index-1 critical points whose unstable directions lead to different minima.
  const std::vector<CriticalPoint>& boundary_saddles() const { return boundary_saddles_; }

  /// Exact flow label in {1,2}. Throws UndefinedBasinError when the flow
  /// stalls on the basin boundary and ConvergenceError after 10^6 steps.
  int label(const TorusPoint& x) const;

  /// As label(), but returns 0 instead of throwing UndefinedBasinError.
  int try_label(const TorusPoint& x) const;

  /// Exact labels (0 on the boundary) of the periodic grid i/res, memoized.
  std::shared_ptr<const std::vector<std::int8_t>> grid_labels(int res) const;

 private:
  struct FlowOutcome {
    int label;  // 0 = stalled on the boundary
  };
  FlowOutcome flow(const TorusPoint& x) const;
  int captured(const TorusPoint& y) const;
  void compute_capture_radii();
  void resolve_saddles();

  PotentialSpec pot_;
  std::vector<CriticalPoint> critical_;
  std::array<CriticalPoint, 2> minima_;
  std::array<double, 2> capture_{0.0, 0.0};
  std::vector<CriticalPoint> boundary_saddles_;
  std::vector<std::pair<CriticalPoint, int>> interior_saddles_;
  double dt_max_ = 1e-3;

  struct LabelMemo;
  std::shared_ptr<LabelMemo> memo_;
};

inline int classify_basin(const BasinClassifier& c, const TorusPoint& x) { return c.label(x); }

/// Grid-cached labels (d <= 2): a query returns the cached label when every
/// node of the surrounding 5^d block agrees, and falls back to the exact flow
/// otherwise.
class BasinCache {
 public:
  static constexpr int kDefaultResolution = 512;

  explicit BasinCache(BasinClassifier classifier, int resolution = kDefaultResolution);

  const BasinClassifier& classifier() const { return classifier_; }
  int resolution() const { return res_; }
  int label(const TorusPoint& x) const;
  int try_label(const TorusPoint& x) const;

 private:
  int cached(const TorusPoint& x) const;

  BasinClassifier classifier_;
  int res_;
  std::shared_ptr<const std::vector<std::int8_t>> labels_;
};

/// Orthonormal frame at a boundary point; the normal points out of basin 1.
struct BoundaryFrame {
  TorusPoint base;
  Vec normal;
  std::vector<Vec> tangents;
};

struct BoundaryProjection {
  TorusPoint xi;
  double distance = 0.0;
  int component = -1;
};

/// One closed boundary curve (d = 2) or a single boundary point (d = 1).
struct BoundaryComponent {
  std::vector<TorusPoint> vertices;
  int orientation = 1;  // normal = orientation * rot90(tangent)
};

/// Basin boundary and tube geometry for d in {1, 2}.
class BasinGeometry {
 public:
  BasinGeometry(BasinCache cache, std::vector<BoundaryComponent> components, double resolution);

  int dim() const { return cache_.classifier().dim(); }
  const BasinClassifier& classifier() const { return cache_.classifier(); }
  const BasinCache& cache() const { return cache_; }
  const std::vector<BoundaryComponent>& components() const { return components_; }
  double tube_radius() const { return r0_; }
  double resolution() const { return resolution_; }
  /// Bound on the distance between the polyline and the true boundary.
  double polyline_error() const { return polyline_error_; }

  /// Nearest boundary point; throws OutOfTubeError when the distance is >= r0.
  BoundaryProjection project(const TorusPoint& x) const;

  /// Nearest boundary point without the tube check.
  BoundaryProjection nearest(const TorusPoint& x) const;

  /// -dist in basin 1, +dist otherwise, 0 on the boundary.
  double signed_distance(const TorusPoint& x) const;

  /// Outward (from basin 1) frame at a point within 1e-6 of the boundary.
  BoundaryFrame frame(const TorusPoint& b) const;

  /// Unit normal (outward from basin 1) at a boundary point, no flow checks.
  Vec normal_at(const TorusPoint& b) const;

  /// Fast label: boundary side inside the tube, grid cache elsewhere, exact
  /// flow within the polyline error band.
  int label(const TorusPoint& x) const;

  /// Boundary CSV: component_id, vertex_index, x, y.
  void write_csv(std::ostream& os) const;

 private:
  struct Segment {
    int component;
    int index;  // segment from vertex index to index + 1 (cyclic)
    TorusPoint start;
    Vec dir;
  };
  struct SegmentHit {
    double distance;
    const Segment* segment;
    double s;
    Vec xi_raw;
  };
  SegmentHit nearest_segment(const TorusPoint& x) const;
  Vec vertex_tangent(int component, int index) const;
  void build_index();

  BasinCache cache_;
  std::vector<BoundaryComponent> components_;
  double resolution_;
  double r0_ = 0.25;
  double polyline_error_ = 0.0;
  std::vector<Segment> segments_;
  int buckets_ = 64;
  std::vector<std::vector<int>> bucket_segments_;
};

/// Trace the boundary: d = 1 uses the separating critical points, d = 2
/// follows each boundary saddle's stable direction by predictor-corrector
/// steps of length `resolution` with bisection to 1e-8.
BasinGeometry extract_boundary(const BasinClassifier& classifier, double resolution,
                               int cache_resolution = BasinCache::kDefaultResolution);

/// Gibbs masses (pi_eps(Omega_1), pi_eps(Omega_2)) by the periodic trapezoid
/// rule on `resolution` nodes per axis. Nodes on the boundary split evenly.
std::array<double, 2> basin_masses(const BasinClassifier& classifier, double eps, int resolution = 256);

double mass_of_basin(const BasinClassifier& classifier, double eps, int label, int resolution = 256);

}  // namespace tempergap

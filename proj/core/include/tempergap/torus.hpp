#pragma once

#include <Eigen/Core>

#include <span>

#include "tempergap/rng.hpp"

namespace tempergap {

inline constexpr int kMaxDim = 8;

/// Small dense vector/matrix types sized for torus dimensions; no heap traffic.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// A point of the flat torus [0,1)^d. Every coordinate is kept in [0,1).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(int dim);

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }
  const Vec& coords() const { return coords_; }

  friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
    return a.coords_.size() == b.coords_.size() && a.coords_ == b.coords_;
  }

 private:
  friend TorusPoint wrap(const Vec& raw);
  Vec coords_;
};

/// Reduce each coordinate modulo 1 into [0,1). Throws on non-finite input.
TorusPoint wrap(const Vec& raw);
TorusPoint wrap(std::span<const double> raw);
TorusPoint wrap(std::initializer_list<double> raw);

/// Minimal representative of y - x: every component lies in (-1/2, 1/2].
Vec torus_displacement(const TorusPoint& x, const TorusPoint& y);

double torus_distance(const TorusPoint& x, const TorusPoint& y);

/// wrap(x + v)
TorusPoint translate(const TorusPoint& x, const Vec& v);

/// Uniform draw from the d-dimensional unit ball (rejection from the cube).
Vec sample_unit_ball(int d, RngStream& rng);

/// wrap(center + h * zeta) with zeta uniform on the unit ball; 0 < h <= 1.
TorusPoint sample_ball(const TorusPoint& center, double h, RngStream& rng);

/// Per-coordinate second moment of the uniform law on the unit ball: 1/(d+2).
double uniform_ball_second_moment(int d);

}  // namespace tempergap

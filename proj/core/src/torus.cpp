#include "tempergap/torus.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tempergap {
namespace {

double reduce_unit(double c) {
  double r = c - std::floor(c);
  // c slightly below an integer can round up to exactly 1.
  if (r >= 1.0) r = 0.0;
  return r;
}

void check_dim(int d) {
  if (d < 1 || d > kMaxDim) {
    throw std::invalid_argument("torus dimension must lie in [1, " + std::to_string(kMaxDim) +
                                "], got " + std::to_string(d));
  }
}

}  // namespace

TorusPoint::TorusPoint(int dim) {
  check_dim(dim);
  coords_ = Vec::Zero(dim);
}

TorusPoint wrap(const Vec& raw) {
  check_dim(static_cast<int>(raw.size()));
  TorusPoint p;
  p.coords_.resize(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) throw std::invalid_argument("wrap: non-finite coordinate");
    p.coords_[i] = reduce_unit(raw[i]);
  }
  return p;
}

TorusPoint wrap(std::span<const double> raw) {
  Vec v(static_cast<Eigen::Index>(raw.size()));
  if (raw.size() > static_cast<std::size_t>(kMaxDim) || raw.empty()) {
    check_dim(static_cast<int>(raw.size()));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) v[static_cast<Eigen::Index>(i)] = raw[i];
  return wrap(v);
}

TorusPoint wrap(std::initializer_list<double> raw) {
  return wrap(std::span<const double>(raw.begin(), raw.size()));
}

Vec torus_displacement(const TorusPoint& x, const TorusPoint& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("torus_displacement: dimension mismatch");
  Vec d = y.coords() - x.coords();
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] -= std::ceil(d[i] - 0.5);
  return d;
}

double torus_distance(const TorusPoint& x, const TorusPoint& y) {
  return torus_displacement(x, y).norm();
}

TorusPoint translate(const TorusPoint& x, const Vec& v) {
  if (x.dim() != v.size()) throw std::invalid_argument("translate: dimension mismatch");
  return wrap(Vec(x.coords() + v));
}

Vec sample_unit_ball(int d, RngStream& rng) {
  check_dim(d);
  Vec z(d);
  for (;;) {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) {
      z[i] = 2.0 * rng.uniform() - 1.0;
      r2 += z[i] * z[i];
    }
    if (r2 <= 1.0) return z;
  }
}

TorusPoint sample_ball(const TorusPoint& center, double h, RngStream& rng) {
  if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("sample_ball: step size must lie in (0, 1]");
  return translate(center, h * sample_unit_ball(center.dim(), rng));
}

double uniform_ball_second_moment(int d) {
  if (d < 1) throw std::invalid_argument("uniform_ball_second_moment: d must be >= 1");
  return 1.0 / (d + 2.0);
}

}  // namespace tempergap

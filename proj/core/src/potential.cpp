#include "tempergap/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tempergap/errors.hpp"

namespace tempergap {
namespace {

constexpr double kPi = std::numbers::pi;

double param_or(const ParamMap& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown_keys(const ParamMap& params, std::initializer_list<std::string_view> known,
                         std::string_view name) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (auto k : known) ok = ok || (k == key);
    if (!ok) {
      throw std::invalid_argument("potential " + std::string(name) + ": unknown parameter '" + key + "'");
    }
    if (!std::isfinite(value)) {
      throw std::invalid_argument("potential " + std::string(name) + ": parameter '" + key + "' is not finite");
    }
  }
}

PotentialSpec make_dw1(double delta, double mu) {
  auto value = [=](const TorusPoint& p) {
    const double x = p[0];
    return 0.5 * (1.0 - std::cos(4.0 * kPi * x)) + 0.5 * delta * (1.0 - std::cos(2.0 * kPi * x)) +
           0.5 * mu * (1.0 + std::sin(2.0 * kPi * x));
  };
  auto gradient = [=](const TorusPoint& p) {
    const double x = p[0];
    Vec g(1);
    g[0] = 2.0 * kPi * std::sin(4.0 * kPi * x) + delta * kPi * std::sin(2.0 * kPi * x) +
           mu * kPi * std::cos(2.0 * kPi * x);
    return g;
  };
  auto hessian = [=](const TorusPoint& p) {
    const double x = p[0];
    Mat h(1, 1);
    h(0, 0) = 8.0 * kPi * kPi * std::cos(4.0 * kPi * x) + 2.0 * kPi * kPi * delta * std::cos(2.0 * kPi * x) -
              2.0 * kPi * kPi * mu * std::sin(2.0 * kPi * x);
    return h;
  };
  return PotentialSpec("DW1", 1, value, gradient, hessian, {{"delta", delta}, {"mu", mu}});
}

PotentialSpec make_dw2(double cy, double mu) {
  auto value = [=](const TorusPoint& p) {
    const double x = p[0];
    const double y = p[1];
    return 0.5 * (1.0 - std::cos(4.0 * kPi * x)) + 0.5 * cy * (1.0 - std::cos(2.0 * kPi * y)) +
           0.5 * mu * (1.0 + std::sin(2.0 * kPi * x));
  };
  auto gradient = [=](const TorusPoint& p) {
    const double x = p[0];
    const double y = p[1];
    Vec g(2);
    g[0] = 2.0 * kPi * std::sin(4.0 * kPi * x) + mu * kPi * std::cos(2.0 * kPi * x);
    g[1] = cy * kPi * std::sin(2.0 * kPi * y);
    return g;
  };
  auto hessian = [=](const TorusPoint& p) {
    const double x = p[0];
    const double y = p[1];
    Mat h = Mat::Zero(2, 2);
    h(0, 0) = 8.0 * kPi * kPi * std::cos(4.0 * kPi * x) - 2.0 * kPi * kPi * mu * std::sin(2.0 * kPi * x);
    h(1, 1) = 2.0 * kPi * kPi * cy * std::cos(2.0 * kPi * y);
    return h;
  };
  return PotentialSpec("DW2", 2, value, gradient, hessian, {{"c_y", cy}, {"mu", mu}});
}

}  // namespace

PotentialSpec::PotentialSpec(std::string name, int dim, ValueFn value, GradientFn gradient,
                             HessianFn hessian, ParamMap params)
    : name_(std::move(name)),
      dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      params_(std::move(params)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("PotentialSpec: dimension out of range");
  if (!value_) throw std::invalid_argument("PotentialSpec: value evaluator is required");
}

Vec PotentialSpec::gradient(const TorusPoint& x) const {
  if (gradient_) return gradient_(x);
  const double s = kFiniteDifferenceStep;
  Vec g(dim_);
  for (int i = 0; i < dim_; ++i) {
    Vec e = Vec::Zero(dim_);
    e[i] = s;
    g[i] = (value_(translate(x, e)) - value_(translate(x, -e))) / (2.0 * s);
  }
  return g;
}

Mat PotentialSpec::hessian(const TorusPoint& x) const {
  if (hessian_) return hessian_(x);
  const double s = kFiniteDifferenceStep;
  Mat h(dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    Vec e = Vec::Zero(dim_);
    e[j] = s;
    h.col(j) = (gradient(translate(x, e)) - gradient(translate(x, -e))) / (2.0 * s);
  }
  return Mat(0.5 * (h + h.transpose()));
}

PotentialSpec builtin_potential(std::string_view name, const ParamMap& params) {
  if (name == "DW1") {
    reject_unknown_keys(params, {"delta", "mu"}, name);
    const double delta = param_or(params, "delta", 0.0);
    const double mu = param_or(params, "mu", 0.0);
    if (delta < 0.0 || mu < 0.0) throw std::invalid_argument("DW1 requires delta >= 0 and mu >= 0");
    return make_dw1(delta, mu);
  }
  if (name == "DW2") {
    reject_unknown_keys(params, {"c_y", "mu"}, name);
    const double cy = param_or(params, "c_y", 6.0);
    const double mu = param_or(params, "mu", 0.0);
    if (!(cy > 0.0) || mu < 0.0) throw std::invalid_argument("DW2 requires c_y > 0 and mu >= 0");
    return make_dw2(cy, mu);
  }
  throw std::invalid_argument("unknown builtin potential '" + std::string(name) + "'");
}

PotentialSpec flat_potential(int d) {
  return PotentialSpec(
      "FLAT", d, [](const TorusPoint&) { return 0.0; },
      [d](const TorusPoint&) { return Vec(Vec::Zero(d)); },
      [d](const TorusPoint&) { return Mat(Mat::Zero(d, d)); });
}

double sup_norm(const PotentialSpec& pot, int resolution) {
  if (resolution < 2) throw std::invalid_argument("sup_norm: resolution must be >= 2");
  const int d = pot.dim();
  long long total = 1;
  for (int i = 0; i < d; ++i) total *= resolution;
  double best = 0.0;
  Vec raw(d);
  for (long long n = 0; n < total; ++n) {
    long long rem = n;
    for (int i = 0; i < d; ++i) {
      raw[i] = static_cast<double>(rem % resolution) / resolution;
      rem /= resolution;
    }
    best = std::max(best, std::abs(pot.value(wrap(raw))));
  }
  // Extrema sit at critical points; refine with them when the search succeeds.
  if (d <= 2) {
    try {
      auto search = find_critical_points(pot, std::min(resolution, d == 1 ? 512 : 64));
      for (const auto& cp : search.points) best = std::max(best, std::abs(cp.value));
    } catch (const std::exception&) {
    }
  }
  return best;
}

double gradient_consistency_error(const PotentialSpec& pot, int samples, std::uint64_t seed) {
  RngStream rng(seed, 0);
  const int d = pot.dim();
  const double s = PotentialSpec::kFiniteDifferenceStep;
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Vec raw(d);
    for (int i = 0; i < d; ++i) raw[i] = rng.uniform();
    const TorusPoint x = wrap(raw);
    const Vec g = pot.gradient(x);
    Vec fd(d);
    for (int i = 0; i < d; ++i) {
      Vec e = Vec::Zero(d);
      e[i] = s;
      fd[i] = (pot.value(translate(x, e)) - pot.value(translate(x, -e))) / (2.0 * s);
    }
    worst = std::max(worst, (g - fd).norm() / (1.0 + g.norm()));
  }
  return worst;
}

double hessian_consistency_error(const PotentialSpec& pot, int samples, std::uint64_t seed) {
  RngStream rng(seed, 1);
  const int d = pot.dim();
  const double s = PotentialSpec::kFiniteDifferenceStep;
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Vec raw(d);
    for (int i = 0; i < d; ++i) raw[i] = rng.uniform();
    const TorusPoint x = wrap(raw);
    const Mat h = pot.hessian(x);
    Mat fd(d, d);
    for (int j = 0; j < d; ++j) {
      Vec e = Vec::Zero(d);
      e[j] = s;
      fd.col(j) = (pot.gradient(translate(x, e)) - pot.gradient(translate(x, -e))) / (2.0 * s);
    }
    worst = std::max(worst, (h - fd).norm() / (1.0 + h.norm()));
  }
  return worst;
}

}  // namespace tempergap

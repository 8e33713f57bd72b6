#include "tempergap/perturbation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "grid_util.hpp"
#include "tempergap/errors.hpp"

namespace tempergap {
namespace {

double g_exp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

Vec rot90(const Vec& t) {
  Vec n(2);
  n << -t[1], t[0];
  return n;
}

// Points of a tensor grid with `per_axis` nodes over [-half, half]^d around c.
template <class Fn>
void for_each_local(const TorusPoint& c, double half, int per_axis, Fn&& fn) {
  const int d = c.dim();
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= per_axis;
  Vec off(d);
  for (std::int64_t n = 0; n < total; ++n) {
    std::int64_t rem = n;
    for (int i = 0; i < d; ++i) {
      const int k = static_cast<int>(rem % per_axis);
      rem /= per_axis;
      off[i] = -half + 2.0 * half * k / (per_axis - 1);
    }
    fn(translate(c, off));
  }
}

std::vector<Vec> shell_directions(int d) {
  std::vector<Vec> dirs;
  if (d == 1) {
    for (double s : {-1.0, 1.0}) {
      Vec v(1);
      v[0] = s;
      dirs.push_back(v);
    }
    return dirs;
  }
  for (int k = 0; k < 64; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.5) / 64.0;
    Vec v(2);
    v << std::cos(th), std::sin(th);
    dirs.push_back(v);
  }
  return dirs;
}

}  // namespace

CutoffFn default_cutoff() {
  CutoffFn c;
  c.chi = [](double t) {
    if (t <= 0.5) return 1.0;
    if (t >= 1.0) return 0.0;
    const double a = g_exp(1.0 - t);
    const double b = g_exp(t - 0.5);
    return a / (a + b);
  };
  c.derivative = [](double t) {
    if (t <= 0.5 || t >= 1.0) return 0.0;
    const double a = g_exp(1.0 - t);
    const double b = g_exp(t - 0.5);
    const double da = -a / ((1.0 - t) * (1.0 - t));
    const double db = b / ((t - 0.5) * (t - 0.5));
    return (da * b - a * db) / ((a + b) * (a + b));
  };
  double sup = 0.0;
  constexpr int kSamples = 100000;
  for (int i = 0; i <= kSamples; ++i) {
    sup = std::max(sup, std::abs(c.derivative(0.5 + 0.5 * i / kSamples)));
  }
  c.sup_abs_derivative = 1.01 * sup;
  return c;
}

double SaddleFrameData::kappa_limit() const { return std::min(c_bar, 1.0) * lambda_u; }

SaddleFrameData build_saddle_frame(const BasinGeometry& geom, const CriticalPoint& saddle,
                                   std::optional<double> kappa, std::optional<double> w) {
  if (saddle.morse_index != 1) throw std::invalid_argument("build_saddle_frame: saddle must have Morse index 1");
  const int d = geom.dim();
  if (saddle.location.dim() != d) throw std::invalid_argument("build_saddle_frame: dimension mismatch");
  SaddleFrameData f;
  f.saddle = saddle;
  f.lambda_u = -saddle.hessian_eigenvalues.front();
  for (double lam : saddle.hessian_eigenvalues) {
    if (lam > 0.0) f.stable_eigenvalues.push_back(lam);
  }
  f.w = w.value_or(uniform_ball_second_moment(d) / 2.0);
  if (!(f.w > 0.0)) throw std::invalid_argument("build_saddle_frame: w must be positive");
  f.c_bar = d >= 2 ? f.w / (2.0 * (d - 1)) : std::numeric_limits<double>::infinity();
  f.kappa = kappa.value_or(0.5 * f.kappa_limit());
  if (!(f.kappa > 0.0) || !(f.kappa < f.kappa_limit())) {
    std::ostringstream os;
    os << "build_saddle_frame: kappa must satisfy 0 < kappa < min(c_bar, 1) * lambda_u = " << f.kappa_limit();
    throw std::invalid_argument(os.str());
  }
  f.normal = geom.frame(saddle.location).normal;
  const Mat eye = Mat::Identity(d, d);
  if (d == 1) {
    f.identity = true;
    f.P_s = Mat::Zero(1, 1);
    f.H_s = Mat::Zero(1, 1);
    f.K = Mat::Zero(1, 1);
    return f;
  }
  f.P_s = eye - f.normal * f.normal.transpose();
  const Mat h = geom.classifier().potential().hessian(saddle.location);
  f.H_s = f.P_s * h * f.P_s;
  f.H_s = 0.5 * (f.H_s + f.H_s.transpose()).eval();
  f.K = f.H_s - f.kappa * f.P_s;
  return f;
}

PerturbedPotential::PerturbedPotential(std::shared_ptr<const BasinGeometry> geom, SaddleFrameData frame, double a,
                                       double eps, CutoffFn cutoff)
    : geom_(std::move(geom)), frame_(std::move(frame)), cutoff_(std::move(cutoff)), a_(a), eps_(eps) {
  const double lam_top = frame_.stable_eigenvalues.empty() ? 0.0 : frame_.stable_eigenvalues.back();
  a_tilde_ = std::sqrt(2.0 * lam_top / frame_.lambda_u * cutoff_.sup_abs_derivative);
  rho_ = 2.0 * (1.0 + a_tilde_);
  scale_ = a_ * std::sqrt(eps_);
  fd_step_ = std::min(1e-5, scale_ * 1e-3);
}

double PerturbedPotential::perturbation(const TorusPoint& x) const {
  if (frame_.identity) return 0.0;
  const TorusPoint& s = frame_.saddle.location;
  if (torus_distance(x, s) >= support_radius()) return 0.0;
  const auto proj = geom_->nearest(x);
  const Vec y = torus_displacement(s, proj.xi);
  const double y2 = y.squaredNorm();
  const double z2 = proj.distance * proj.distance;
  const double s2 = scale_ * scale_;
  const double cy = cutoff_(y2 / s2);
  if (cy == 0.0) return 0.0;
  const double cz = a_tilde_ > 0.0 ? cutoff_(z2 / (a_tilde_ * a_tilde_ * s2)) : (z2 == 0.0 ? 1.0 : 0.0);
  if (cz == 0.0) return 0.0;
  return 0.5 * y.dot(frame_.K * y) * cy * cz;
}

Vec PerturbedPotential::perturbation_gradient(const TorusPoint& x) const {
  const int d = x.dim();
  Vec g = Vec::Zero(d);
  if (frame_.identity) return g;
  if (torus_distance(x, frame_.saddle.location) >= support_radius() + 2.0 * fd_step_) return g;
  const double h = fd_step_;
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = h;
    g[i] = (perturbation(translate(x, e)) - perturbation(translate(x, -e))) / (2.0 * h);
  }
  return g;
}

Mat PerturbedPotential::perturbation_hessian(const TorusPoint& x) const {
  const int d = x.dim();
  Mat m = Mat::Zero(d, d);
  if (frame_.identity) return m;
  if (torus_distance(x, frame_.saddle.location) >= support_radius() + 3.0 * fd_step_) return m;
  const double h = fd_step_;
  const double p0 = perturbation(x);
  for (int i = 0; i < d; ++i) {
    Vec ei = Vec::Zero(d);
    ei[i] = h;
    m(i, i) = (perturbation(translate(x, ei)) - 2.0 * p0 + perturbation(translate(x, -ei))) / (h * h);
    for (int j = i + 1; j < d; ++j) {
      Vec ej = Vec::Zero(d);
      ej[j] = h;
      const double v = (perturbation(translate(x, ei + ej)) - perturbation(translate(x, ei - ej)) -
                        perturbation(translate(x, -ei + ej)) + perturbation(translate(x, -ei - ej))) /
                       (4.0 * h * h);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

PotentialSpec PerturbedPotential::as_potential() const {
  auto self = std::make_shared<const PerturbedPotential>(*this);
  ParamMap params = base().params();
  params["a"] = a_;
  params["eps"] = eps_;
  params["kappa"] = frame_.kappa;
  return PotentialSpec(
      base().name() + "-perturbed", base().dim(), [self](const TorusPoint& x) { return self->value(x); },
      [self](const TorusPoint& x) { return self->gradient(x); },
      [self](const TorusPoint& x) { return self->hessian(x); }, params);
}

PerturbedPotential build_perturbation(std::shared_ptr<const BasinGeometry> geom, const SaddleFrameData& frame,
                                      double a, double eps, const CutoffFn& cutoff) {
  if (!geom) throw std::invalid_argument("build_perturbation: geometry is required");
  if (!(a > 0.0) || !(eps > 0.0)) throw std::invalid_argument("build_perturbation: a and eps must be positive");
  if (geom->dim() > 2) throw std::invalid_argument("build_perturbation: d must be at most 2");
  PerturbedPotential pp(std::move(geom), frame, a, eps, cutoff);
  const double r0 = pp.geometry().tube_radius();
  if (!frame.identity && !(pp.support_radius() < 0.5 * r0)) {
    std::ostringstream os;
    os.precision(6);
    os << "perturbation is not well defined: rho * a * sqrt(eps) = " << pp.support_radius()
       << " must be < r0 / 2 = " << 0.5 * r0;
    throw WellDefinednessError(os.str());
  }
  return pp;
}

bool PerturbationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PerturbationCheck& c) { return c.passed; });
}

PerturbationCheck check_saddle_hessian(const Mat& hessian, const SaddleFrameData& frame,
                                       std::vector<double>* eigenvalues) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (hessian + hessian.transpose()));
  const Vec ev = eig.eigenvalues();
  if (eigenvalues) eigenvalues->assign(ev.data(), ev.data() + ev.size());
  PerturbationCheck c;
  c.name = "saddle_hessian";
  c.tolerance = 0.02;
  c.witness = frame.saddle.location;
  double err = std::abs(ev[0] + frame.lambda_u) / frame.lambda_u;
  for (int i = 1; i < ev.size(); ++i) err = std::max(err, std::abs(ev[i] - frame.kappa) / frame.kappa);
  c.measured = err;
  c.passed = err <= c.tolerance;
  std::ostringstream os;
  os.precision(8);
  os << "eigenvalues {";
  for (int i = 0; i < ev.size(); ++i) os << (i ? ", " : "") << ev[i];
  os << "} expected {" << -frame.lambda_u;
  for (int i = 1; i < ev.size(); ++i) os << ", " << frame.kappa;
  os << "}";
  c.detail = os.str();
  return c;
}

double perturbation_sup(const PerturbedPotential& pp) {
  if (pp.identity()) return 0.0;
  double sup = 0.0;
  const int d = pp.base().dim();
  for_each_local(pp.frame().saddle.location, (1.0 + pp.a_tilde()) * pp.scale() * 1.05, 201,
                 [&](const TorusPoint& x) { sup = std::max(sup, std::abs(pp.perturbation(x))); });
  const detail::PeriodicGrid grid(d, 200);
  for (std::int64_t n = 0; n < grid.size(); ++n) sup = std::max(sup, std::abs(pp.perturbation(grid.point(n))));
  return sup;
}

PerturbationReport verify_perturbation(const PerturbedPotential& pp) {
  PerturbationReport r;
  const auto& fr = pp.frame();
  const TorusPoint& s = fr.saddle.location;
  const int d = pp.base().dim();
  r.eps = pp.eps();
  r.a = pp.a();
  r.kappa = fr.kappa;
  r.lambda_u = fr.lambda_u;
  r.support_radius = pp.support_radius();
  r.sup_perturbation = perturbation_sup(pp);

  // (i) normal derivatives vanish on the boundary.
  {
    PerturbationCheck c;
    c.name = "boundary_normal_vanishing";
    c.tolerance = 1e-4;
    if (pp.identity()) {
      c.passed = true;
      c.detail = "identity perturbation (d = 1)";
    } else {
      const Vec t = rot90(fr.normal);
      const double h = pp.fd_step();
      for (int j = 0; j < 50; ++j) {
        const double off = pp.scale() * 0.999 * (-1.0 + 2.0 * (j + 0.5) / 50.0);
        const TorusPoint b = pp.geometry().nearest(translate(s, off * t)).xi;
        const Vec n = pp.geometry().normal_at(b);
        const double first = std::abs(pp.perturbation_gradient(b).dot(n));
        const double second = std::abs((pp.perturbation(translate(b, h * n)) - 2.0 * pp.perturbation(b) +
                                         pp.perturbation(translate(b, -h * n))) /
                                        (h * h));
        const double worst = std::max(first, second);
        if (worst >= c.measured) {
          c.measured = worst;
          c.witness = b;
        }
      }
      c.passed = c.measured <= c.tolerance;
    }
    r.checks.push_back(c);
  }

  // (ii) saddle Hessian of U_hat.
  r.checks.push_back(check_saddle_hessian(pp.hessian(s), fr, &r.saddle_eigenvalues));

  // (iii) |D U_hat(x)| >= c0 |x - saddle| on shells.
  {
    PerturbationCheck c;
    c.name = "gradient_lower_bound";
    c.measured = std::numeric_limits<double>::infinity();
    const double r1 = pp.identity() ? 0.05 : pp.support_radius();
    for (int j = 1; j <= 20; ++j) {
      const double rad = r1 * j / 20.0;
      for (const auto& v : shell_directions(d)) {
        const TorusPoint x = translate(s, rad * v);
        const double ratio = pp.gradient(x).norm() / rad;
        if (ratio < c.measured) {
          c.measured = ratio;
          c.witness = x;
        }
      }
    }
    r.c0 = c.measured;
    c.passed = c.measured > 0.0;
    r.checks.push_back(c);
  }

  // (iv) derivative scaling constants.
  {
    PerturbationCheck c;
    c.name = "derivative_scaling";
    if (!pp.identity()) {
      for_each_local(s, (1.0 + pp.a_tilde()) * pp.scale() * 1.05, 41, [&](const TorusPoint& x) {
        r.C1 = std::max(r.C1, pp.perturbation_gradient(x).norm() / pp.scale());
        Eigen::SelfAdjointEigenSolver<Mat> eig(pp.perturbation_hessian(x), Eigen::EigenvaluesOnly);
        r.C2 = std::max(r.C2, eig.eigenvalues().cwiseAbs().maxCoeff());
      });
    }
    c.measured = std::max(r.C1, r.C2);
    c.passed = std::isfinite(r.C1) && std::isfinite(r.C2);
    std::ostringstream os;
    os << "C1 = " << r.C1 << ", C2 = " << r.C2;
    c.detail = os.str();
    r.checks.push_back(c);
  }

  // Exact agreement with U outside the support ball.
  {
    PerturbationCheck c;
    c.name = "outside_support_exact";
    const double base = pp.identity() ? 0.05 : pp.support_radius();
    for (int j = 0; j < 8; ++j) {
      const double rad = base * (1.0 + 0.0625 * j);
      for (const auto& v : shell_directions(d)) {
        const TorusPoint x = translate(s, rad * v);
        const double diff = std::abs(pp.value(x) - pp.base().value(x));
        if (diff >= c.measured) {
          c.measured = diff;
          c.witness = x;
        }
      }
    }
    c.passed = c.measured == 0.0;
    r.checks.push_back(c);
  }
  return r;
}

}  // namespace tempergap

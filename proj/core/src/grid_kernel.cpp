#include "tempergap/grid_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tempergap/basin.hpp"
#include "tempergap/errors.hpp"

namespace tempergap {
namespace {

constexpr int kMaxDenseStates = 20000;

using Triplet = Eigen::Triplet<double>;

Eigen::VectorXd grid_log_weights(const PotentialSpec& pot, double eps, int M) {
  Eigen::VectorXd lw(M);
  for (int i = 0; i < M; ++i) lw[i] = -pot.value(wrap({static_cast<double>(i) / M})) / eps;
  return lw;
}

// Fill the diagonal with whatever mass the off-diagonal entries leave.
SparseMatrix with_holding(const std::vector<Triplet>& off, int n) {
  std::vector<double> row_mass(n, 0.0);
  std::vector<Triplet> all;
  all.reserve(off.size() + n);
  for (const auto& t : off) {
    if (t.row() == t.col()) continue;
    row_mass[t.row()] += t.value();
    all.push_back(t);
  }
  for (int i = 0; i < n; ++i) all.emplace_back(i, i, std::max(0.0, 1.0 - row_mass[i]));
  SparseMatrix P(n, n);
  P.setFromTriplets(all.begin(), all.end());
  P.makeCompressed();
  return P;
}

}  // namespace

Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& lw) {
  if (lw.size() == 0) throw std::invalid_argument("normalize_log_weights: empty vector");
  const double top = lw.maxCoeff();
  Eigen::VectorXd w = (lw.array() - top).exp();
  return w / w.sum();
}

KernelDiagnostics kernel_diagnostics(const GridKernel& k) {
  KernelDiagnostics d;
  const int n = k.size();
  if (k.P.rows() != n || k.P.cols() != n) throw std::invalid_argument("kernel_diagnostics: size mismatch");
  d.min_entry = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(k.P, i); it; ++it) {
      s += it.value();
      d.min_entry = std::min(d.min_entry, it.value());
    }
    d.row_sum_error = std::max(d.row_sum_error, std::abs(s - 1.0));
  }
  const SparseMatrix Pt = SparseMatrix(k.P.transpose());
  for (int i = 0; i < n; ++i) {
    for (SparseMatrix::InnerIterator it(k.P, i); it; ++it) {
      const int j = static_cast<int>(it.col());
      const double back = Pt.coeff(i, j);  // P(j, i)
      d.detailed_balance_error = std::max(d.detailed_balance_error, std::abs(k.pi[i] * it.value() - k.pi[j] * back));
    }
  }
  d.stationary_sum_error = std::abs(k.pi.sum() - 1.0);
  if (!std::isfinite(d.min_entry)) d.min_entry = 0.0;
  return d;
}

void validate_kernel(const GridKernel& k, double tol) {
  const auto d = kernel_diagnostics(k);
  if (d.row_sum_error > tol) throw std::runtime_error(k.label + ": row sums deviate from 1 by " + std::to_string(d.row_sum_error));
  if (d.min_entry < 0.0) throw std::runtime_error(k.label + ": negative transition probability");
  if (d.detailed_balance_error > tol) {
    throw std::runtime_error(k.label + ": detailed balance violated by " + std::to_string(d.detailed_balance_error));
  }
  if (d.stationary_sum_error > 1e-10 || (k.pi.array() <= 0.0).any()) {
    throw std::runtime_error(k.label + ": stationary vector is not a positive probability vector");
  }
}

SparseMatrix cyclic_proposal(int M, int w) {
  if (M < 3) throw std::invalid_argument("cyclic_proposal: need M >= 3");
  if (w < 1) throw std::invalid_argument("cyclic_proposal: need w >= 1");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(M) * 2 * w);
  const double q = 1.0 / (2.0 * w);
  for (int i = 0; i < M; ++i) {
    for (int j = 1; j <= w; ++j) {
      t.emplace_back(i, (i + j) % M, q);
      t.emplace_back(i, ((i - j) % M + M) % M, q);
    }
  }
  SparseMatrix Q(M, M);
  Q.setFromTriplets(t.begin(), t.end());
  Q.makeCompressed();
  return Q;
}

GridKernel metropolis_kernel(const Eigen::VectorXd& lw, const SparseMatrix& Q, std::string label) {
  const int n = static_cast<int>(lw.size());
  if (Q.rows() != n || Q.cols() != n) throw std::invalid_argument("metropolis_kernel: proposal size mismatch");
  std::vector<Triplet> off;
  for (int i = 0; i < n; ++i) {
    for (SparseMatrix::InnerIterator it(Q, i); it; ++it) {
      const int j = static_cast<int>(it.col());
      if (j == i || it.value() == 0.0) continue;
      const double acc = std::min(1.0, std::exp(lw[j] - lw[i]));
      off.emplace_back(i, j, it.value() * acc);
    }
  }
  GridKernel k;
  k.P = with_holding(off, n);
  k.pi = normalize_log_weights(lw);
  k.label = std::move(label);
  k.positions = n;
  return k;
}

GridKernel make_lazy(const GridKernel& k) {
  GridKernel out = k;
  SparseMatrix I(k.size(), k.size());
  I.setIdentity();
  out.P = 0.5 * (k.P + I);
  out.P.makeCompressed();
  out.label = "lazy " + k.label;
  return out;
}

GridKernel restrict_kernel(const GridKernel& k, const std::vector<char>& in_set) {
  const int n = k.size();
  if (static_cast<int>(in_set.size()) != n) throw std::invalid_argument("restrict_kernel: mask size mismatch");
  std::vector<int> index(n, -1);
  std::vector<int> kept;
  for (int i = 0; i < n; ++i) {
    if (in_set[i]) {
      index[i] = static_cast<int>(kept.size());
      kept.push_back(i);
    }
  }
  if (kept.empty()) throw std::invalid_argument("restrict_kernel: empty set");
  const int m = static_cast<int>(kept.size());
  std::vector<Triplet> off;
  for (int a = 0; a < m; ++a) {
    for (SparseMatrix::InnerIterator it(k.P, kept[a]); it; ++it) {
      const int b = index[it.col()];
      if (b >= 0 && b != a) off.emplace_back(a, b, it.value());
    }
  }
  GridKernel out;
  out.P = with_holding(off, m);
  Eigen::VectorXd pi(m);
  for (int a = 0; a < m; ++a) pi[a] = k.pi[kept[a]];
  out.pi = pi / pi.sum();
  out.label = k.label + " restricted";
  out.positions = k.positions;
  out.levels = k.levels;
  if (k.states.empty()) {
    out.states = kept;
  } else {
    for (int s : kept) out.states.push_back(k.states[s]);
  }
  return out;
}

int neighbors_for(double h, int M) { return std::max(1, static_cast<int>(std::floor(h * M + 1e-9))); }

GridKernel discretize_mrw_1d_w(const PotentialSpec& pot, double eps, int w, int M, const MrwGridOptions& opts) {
  if (pot.dim() != 1) throw std::invalid_argument("discretize_mrw_1d: potential must be one-dimensional");
  if (!(eps > 0.0)) throw std::invalid_argument("discretize_mrw_1d: temperature must be positive");
  GridKernel k = metropolis_kernel(grid_log_weights(pot, eps, M), cyclic_proposal(M, w),
                                   "MRW(eps=" + std::to_string(eps) + ", w=" + std::to_string(w) + ")");
  if (opts.restriction) {
    if (!opts.node_labels || static_cast<int>(opts.node_labels->size()) != M) {
      throw std::invalid_argument("discretize_mrw_1d: restriction needs one label per grid node");
    }
    std::vector<char> mask(M);
    for (int i = 0; i < M; ++i) mask[i] = (*opts.node_labels)[i] == *opts.restriction;
    k = restrict_kernel(k, mask);
  }
  if (opts.lazy) k = make_lazy(k);
  return k;
}

GridKernel discretize_mrw_1d(const PotentialSpec& pot, double eps, double h, int M, const MrwGridOptions& opts) {
  if (M < 32) throw ResolutionError("discretize_mrw_1d: grid size must be >= 32");
  if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("discretize_mrw_1d: step size must lie in (0, 1]");
  if (h * M < 2.0 - 1e-9) throw ResolutionError("discretize_mrw_1d: h < 2/M leaves fewer than two neighbors per side");
  return discretize_mrw_1d_w(pot, eps, neighbors_for(h, M), M, opts);
}

std::vector<std::int8_t> grid_node_labels(const BasinClassifier& cls, int M) {
  if (cls.dim() != 1) throw std::invalid_argument("grid_node_labels: one-dimensional classifiers only");
  return *cls.grid_labels(M);
}

GridKernel discretize_st(const PotentialSpec& pot, const TemperatureLadder& ladder, int M, bool allow_large) {
  if (pot.dim() != 1) throw std::invalid_argument("discretize_st: potential must be one-dimensional");
  if (M < 3) throw ResolutionError("discretize_st: grid size must be >= 3");
  const int L = ladder.levels();
  const long n = static_cast<long>(M) * L;
  if (n > kMaxDenseStates && !allow_large) {
    throw SizeError("discretize_st: " + std::to_string(n) + " states exceed 20000 without the iterative flag");
  }
  std::vector<double> u(M);
  for (int i = 0; i < M; ++i) u[i] = pot.value(wrap({static_cast<double>(i) / M}));

  // Temperature resampling T: lazy, level J with probability prop. to exp(-U/eps_J).
  std::vector<Triplet> tt;
  for (int i = 0; i < M; ++i) {
    Eigen::VectorXd lw(L);
    for (int k = 0; k < L; ++k) lw[k] = -u[i] / ladder.eps[k];
    const Eigen::VectorXd p = normalize_log_weights(lw);
    for (int k = 0; k < L; ++k) {
      for (int j = 0; j < L; ++j) {
        const double v = 0.5 * p[j] + (j == k ? 0.5 : 0.0);
        if (v != 0.0) tt.emplace_back(k * M + i, j * M + i, v);
      }
    }
  }
  SparseMatrix T(n, n);
  T.setFromTriplets(tt.begin(), tt.end());

  // Block-diagonal lazy Metropolis moves, one block per level.
  std::vector<Triplet> mt;
  for (int k = 0; k < L; ++k) {
    const GridKernel lvl = make_lazy(discretize_mrw_1d_w(pot, ladder.eps[k], neighbors_for(ladder.h[k], M), M));
    for (int i = 0; i < M; ++i) {
      for (SparseMatrix::InnerIterator it(lvl.P, i); it; ++it) mt.emplace_back(k * M + i, k * M + it.col(), it.value());
    }
  }
  SparseMatrix Mm(n, n);
  Mm.setFromTriplets(mt.begin(), mt.end());

  GridKernel out;
  out.P = SparseMatrix(T * Mm) * T;
  out.P.prune(0.0);
  out.P.makeCompressed();
  Eigen::VectorXd lw(n);
  for (int k = 0; k < L; ++k) {
    for (int i = 0; i < M; ++i) lw[k * M + i] = -u[i] / ladder.eps[k];
  }
  out.pi = normalize_log_weights(lw);
  out.label = "ST(N=" + std::to_string(ladder.N) + ", M=" + std::to_string(M) + ")";
  out.positions = M;
  out.levels = L;
  return out;
}

}  // namespace tempergap

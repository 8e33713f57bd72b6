#include "tempergap/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace tempergap {
namespace {

constexpr int kDenseLimit = 2000;

Eigen::MatrixXd dense_symmetrized(const GridKernel& k) { return Eigen::MatrixXd(symmetrized(k)); }

}  // namespace

SparseMatrix symmetrized(const GridKernel& k) {
  const Eigen::VectorXd s = k.pi.array().sqrt();
  SparseMatrix A = k.P;
  for (int i = 0; i < A.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(A, i); it; ++it) it.valueRef() *= s[i] / s[it.col()];
  }
  SparseMatrix At = SparseMatrix(A.transpose());
  SparseMatrix sym = 0.5 * (A + At);
  sym.makeCompressed();
  return sym;
}

Eigen::VectorXd spectrum(const GridKernel& k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_symmetrized(k), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

SpectralReport spectral_gap(const GridKernel& k, EigenMethod method) {
  const int n = k.size();
  SpectralReport r;
  r.size = n;
  if (n < 2) {
    r.method = "dense";
    r.gap = 1.0;
    r.lambda2 = 0.0;
    return r;
  }
  const bool dense = method == EigenMethod::Dense || (method == EigenMethod::Auto && n <= kDenseLimit);
  if (dense) {
    const Eigen::MatrixXd A = dense_symmetrized(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    r.lambda2 = es.eigenvalues()[n - 2];
    const Eigen::VectorXd v = es.eigenvectors().col(n - 2);
    r.residual = (A * v - r.lambda2 * v).norm();
    r.method = "dense";
  } else {
    const SparseMatrix A = symmetrized(k);
    const Eigen::VectorXd root = k.pi.array().sqrt();
    const auto lr = lanczos_top(A, root / root.norm());
    r.lambda2 = lr.value;
    r.residual = lr.residual;
    r.iterations = lr.iterations;
    r.method = "iterative";
  }
  r.gap = std::clamp(1.0 - r.lambda2, 0.0, 2.0);
  return r;
}

}  // namespace tempergap

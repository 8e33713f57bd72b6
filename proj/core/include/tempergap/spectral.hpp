#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <string>

#include "tempergap/grid_kernel.hpp"

namespace tempergap {

enum class EigenMethod { Auto, Dense, Iterative };

struct SpectralReport {
  double gap = 0.0;
  double lambda2 = 0.0;
  std::string method;  // "dense" or "iterative"
  double residual = 0.0;
  int iterations = 0;
  int size = 0;
};

/// D^{1/2} P D^{-1/2} with D = diag(pi), symmetrized against round-off.
SparseMatrix symmetrized(const GridKernel& k);

struct LanczosResult {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  int iterations = 0;
};

/// Largest eigenvalue of the symmetric matrix A on the orthogonal complement
/// of `deflate` (unit vector, may be empty) by Lanczos with full
/// reorthogonalization and explicit restarts. Throws ConvergenceError when
/// the residual stays above `tol`.
LanczosResult lanczos_top(const SparseMatrix& A, const Eigen::VectorXd& deflate, double tol = 1e-10,
                          int max_basis = 1500, int max_restarts = 40, std::uint64_t seed = 1);

/// Gap = 1 - lambda_2 of a reversible kernel. Auto uses the dense symmetric
/// solver up to 2000 states and Lanczos above.
SpectralReport spectral_gap(const GridKernel& k, EigenMethod method = EigenMethod::Auto);

/// Same as spectral_gap, but returns the full ascending spectrum (dense only).
Eigen::VectorXd spectrum(const GridKernel& k);

}  // namespace tempergap

#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tempergap/ladder.hpp"
#include "tempergap/potential.hpp"

namespace tempergap {

class BasinClassifier;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Finite reversible transition matrix with its stationary vector.
struct GridKernel {
  SparseMatrix P;
  Eigen::VectorXd pi;
  std::string label;
  int positions = 0;         // grid size M of the discretized torus
  int levels = 1;            // temperature levels (ST)
  std::vector<int> states;   // grid index of each state (restricted kernels), else empty

  int size() const { return static_cast<int>(pi.size()); }
};

struct KernelDiagnostics {
  double row_sum_error = 0.0;
  double detailed_balance_error = 0.0;
  double min_entry = 0.0;
  double stationary_sum_error = 0.0;
};

KernelDiagnostics kernel_diagnostics(const GridKernel& k);

/// Throws std::runtime_error unless rows sum to 1, entries are nonnegative and
/// detailed balance holds to `tol`.
void validate_kernel(const GridKernel& k, double tol = 1e-12);

/// Normalized Gibbs weights exp(lw_i) / sum exp(lw_j), log-sum-exp stabilized.
Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& log_weights);

/// Metropolis kernel for a symmetric proposal Q (rows sum to at most 1, the
/// rest stays on the diagonal) and target exp(log_weights).
GridKernel metropolis_kernel(const Eigen::VectorXd& log_weights, const SparseMatrix& proposal, std::string label);

/// Cyclic proposal: uniform over the w neighbors on each side of i (2w proposals).
SparseMatrix cyclic_proposal(int M, int w);

/// 1/2 (I + P).
GridKernel make_lazy(const GridKernel& k);

/// Restriction to the states with in_set[i] set: moves leaving the set are
/// rejected and the kernel is compacted to the set's states.
GridKernel restrict_kernel(const GridKernel& k, const std::vector<char>& in_set);

struct MrwGridOptions {
  bool lazy = false;
  std::optional<int> restriction;                            // basin label
  const std::vector<std::int8_t>* node_labels = nullptr;     // labels of the M grid nodes
};

/// Discrete MRW on x_i = i / M with w = floor(h M) neighbors per side.
/// Requires M >= 32 and h >= 2 / M (ResolutionError otherwise).
GridKernel discretize_mrw_1d(const PotentialSpec& pot, double eps, double h, int M, const MrwGridOptions& opts = {});

/// Same with explicit neighbor count, no resolution checks (M >= 3, w >= 1).
GridKernel discretize_mrw_1d_w(const PotentialSpec& pot, double eps, int w, int M, const MrwGridOptions& opts = {});

/// Node labels for restricted discretizations (0 on the boundary).
std::vector<std::int8_t> grid_node_labels(const BasinClassifier& cls, int M);

/// Exact composed ST kernel T (1/2 (I + M_k)) T on M (N+1) states with state
/// index level * M + position. Level k uses w_k = max(1, floor(h_k M)).
/// Throws SizeError above 20000 states unless allow_large is set.
GridKernel discretize_st(const PotentialSpec& pot, const TemperatureLadder& ladder, int M, bool allow_large = false);

int neighbors_for(double h, int M);

}  // namespace tempergap

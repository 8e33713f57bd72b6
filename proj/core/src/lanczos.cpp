#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

#include "tempergap/errors.hpp"
#include "tempergap/rng.hpp"
#include "tempergap/spectral.hpp"

namespace tempergap {
namespace {

void orthogonalize(Eigen::VectorXd& v, const Eigen::VectorXd& deflate, const std::vector<Eigen::VectorXd>& basis) {
  // Two passes of classical Gram-Schmidt keep the basis orthogonal to machine precision.
  for (int pass = 0; pass < 2; ++pass) {
    if (deflate.size() > 0) v -= deflate.dot(v) * deflate;
    for (const auto& q : basis) v -= q.dot(v) * q;
  }
}

}  // namespace

LanczosResult lanczos_top(const SparseMatrix& A, const Eigen::VectorXd& deflate, double tol, int max_basis,
                          int max_restarts, std::uint64_t seed) {
  const int n = static_cast<int>(A.rows());
  const int room = n - (deflate.size() > 0 ? 1 : 0);
  if (room < 1) throw std::invalid_argument("lanczos_top: nothing left after deflation");
  const int m_max = std::min(max_basis, room);

  RngStream rng(seed, 0);
  Eigen::VectorXd start(n);
  for (int i = 0; i < n; ++i) start[i] = rng.uniform(-1.0, 1.0);

  LanczosResult best;
  int total = 0;
  for (int restart = 0; restart <= max_restarts; ++restart) {
    std::vector<Eigen::VectorXd> Q;
    std::vector<double> alpha;
    std::vector<double> beta;
    Eigen::VectorXd q = start;
    orthogonalize(q, deflate, Q);
    double nq = q.norm();
    if (nq == 0.0) throw ConvergenceError("lanczos_top: start vector lies in the deflated space");
    q /= nq;
    for (int j = 0; j < m_max; ++j) {
      Q.push_back(q);
      Eigen::VectorXd r = A * q;
      alpha.push_back(q.dot(r));
      orthogonalize(r, deflate, Q);
      const double b = r.norm();
      ++total;

      const bool last = (j + 1 == m_max) || b < 1e-14;
      if (last || (j + 1) % 10 == 0) {
        const int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
          T(i, i) = alpha[i];
          if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const Eigen::VectorXd s = es.eigenvectors().col(m - 1);
        const double theta = es.eigenvalues()[m - 1];
        const double res = b * std::abs(s[m - 1]);
        if (res <= tol || last) {
          Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
          for (int i = 0; i < m; ++i) y += s[i] * Q[i];
          y.normalize();
          const double true_res = (A * y - theta * y).norm();
          best = {theta, y, true_res, total};
          if (true_res <= tol) return best;
          start = y;
          break;
        }
      }
      beta.push_back(b);
      q = r / b;
    }
  }
  throw ConvergenceError("lanczos_top: residual " + std::to_string(best.residual) + " above tolerance after " +
                         std::to_string(total) + " iterations");
}

}  // namespace tempergap

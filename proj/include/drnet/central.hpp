#pragma once

#include <Eigen/Core>
#include <vector>

#include "drnet/datasplit.hpp"
#include "drnet/prox.hpp"
#include "drnet/regression.hpp"

namespace drnet {

struct CentralSolution {
  Eigen::VectorXd beta;
  double objective = 0.0;
  double residual_norm = 0.0;  // ||X beta - y||
  int iterations = 0;
  bool converged = false;
};

/// Reference solver for min f(beta) s.t. ||X beta - y||_2 <= eps, by
/// two-operator Douglas-Rachford splitting between prox of f and the
/// projection onto the residual ball. The projection uses the same
/// SVD-plus-multiplier root-finding as the node subproblem, without the
/// offset block. Returns the feasible (projection-side) iterate. Throws
/// DataError when no beta satisfies the constraint.
CentralSolution solve_central(const GlobalData& data, const Regularizer& f, double eps,
                              double lambda, int max_iter = 1000000, double tol = 1e-12);

/// Euclidean projection of v onto { beta : ||X beta - y|| <= eps }, given
/// a thin SVD X = U diag(sv) V^T.
Eigen::VectorXd project_residual_ball(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                                      const Eigen::VectorXd& sv, const Eigen::VectorXd& y,
                                      double eps, const Eigen::VectorXd& v);

/// Independent check oracle for the node subproblem: solves the same
/// constrained minimization over all shares and beta jointly by quadratic
/// penalty continuation with damped Newton steps, never touching the SVD
/// reduction. Small instances only (n*p <= 64); agreement target 1e-6.
NodeSolveResult qp_oracle_node_subproblem(const NodeLocal& local,
                                          const std::vector<NeighborExchange>& exchanges,
                                          const Regularizer& f, double lambda);

}  // namespace drnet

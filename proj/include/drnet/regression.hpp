#pragma once

#include <Eigen/Core>
#include <memory>
#include <utility>
#include <vector>

#include "drnet/datasplit.hpp"
#include "drnet/dr_framework.hpp"
#include "drnet/prox.hpp"
#include "drnet/topology.hpp"

namespace drnet {

/// Everything one agent needs to run its regression updates: its data
/// summand, the shared constants, and a singular value decomposition of
/// X_i computed once and reused by every subproblem solve.
struct NodeLocal {
  Eigen::MatrixXd X;  // n x p
  Eigen::VectorXd y;  // n
  int m = 0;          // number of agents in the network
  double eps = 0.0;
  double delta = 0.0;  // eps / m, the per-node residual budget

  Eigen::MatrixXd U;   // n x k, thin
  Eigen::MatrixXd V;   // p x k, thin
  Eigen::VectorXd sv;  // k = min(n, p) singular values

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

NodeLocal make_node_local(const DataSummand& summand, int m, double eps);
std::vector<NodeLocal> make_node_locals(const std::vector<DataSummand>& summands,
                                        int m, double eps);

/// What a node knows about one incident edge at iteration k: its own
/// outgoing pair and the pair received from the neighbor.
struct NeighborExchange {
  Eigen::VectorXd a_own;  // a_ij
  Eigen::VectorXd b_own;  // b_ij
  Eigen::VectorXd a_in;   // a_ji
  Eigen::VectorXd b_in;   // b_ji
};

struct EdgeProxPair {
  Eigen::VectorXd a_ij, b_ij;
  Eigen::VectorXd a_ji, b_ji;
};

/// Closed-form prox of the edge cost coupling (a, b) across an edge:
/// the a-parts antisymmetrize, a_ij -> (a_ij - a_ji)/2 and its negation,
/// and both b-parts move to (1/2) * dilated_prox(f, lambda, b_ij + b_ji).
EdgeProxPair edge_prox_regression(const Regularizer& f, double lambda,
                                  const Eigen::VectorXd& a_ij, const Eigen::VectorXd& b_ij,
                                  const Eigen::VectorXd& a_ji, const Eigen::VectorXd& b_ji);

struct NodeSolveResult {
  std::vector<Eigen::VectorXd> a_shares;  // per neighbor, ascending order
  Eigen::VectorXd beta;
  Eigen::VectorXd alpha;     // sum of a_shares
  double multiplier = 0.0;   // KKT multiplier of the ball constraint
  bool constraint_active = false;
};

/// Minimizes sum_j ||a_j - a_target_j||^2 + sum_j ||beta - b_target_j||^2
/// subject to ||X_i beta - y_i + sum_j a_j||_2 <= delta. The a-shares
/// collapse onto their mean offset and the b-terms onto their centroid,
/// leaving a weighted projection of (centroid, offset-sum) onto the ball;
/// the active case reduces through the stored SVD to a scalar root-find in
/// the constraint multiplier, solved to |residual - delta| <=
/// 1e-12*max(1, delta).
NodeSolveResult project_node_constraint(const NodeLocal& local,
                                        const std::vector<Eigen::VectorXd>& a_targets,
                                        const std::vector<Eigen::VectorXd>& b_targets);

/// The per-node subproblem of one regression round: builds the projection
/// targets (-a_ji and dilated_prox(f, lambda, b_ij + b_ji) - b_ij for each
/// neighbor) and solves the constrained minimization above.
NodeSolveResult node_subproblem(const NodeLocal& local,
                                const std::vector<NeighborExchange>& exchanges,
                                const Regularizer& f, double lambda);

/// The per-edge state update of one regression round:
///   a_next = a_own - (rho/2)(a_own - a_in) + rho * a_hat
///   b_next = b_own - (rho/2) * f_value + rho * beta_hat
/// where f_value = dilated_prox(f, lambda, b_own + b_in). Requires
/// 0 < rho < 2.
std::pair<Eigen::VectorXd, Eigen::VectorXd> dr_update_regression(
    double rho, const Eigen::VectorXd& a_own, const Eigen::VectorXd& a_in,
    const Eigen::VectorXd& b_own, const Eigen::VectorXd& f_value,
    const Eigen::VectorXd& a_hat, const Eigen::VectorXd& beta_hat);

/// Packages the regression edge and node proxes as a CostOracle over the
/// stacked (a, b) edge space of dimension n + p, so that the generic
/// framework run reproduces the regression recursion step for step.
std::unique_ptr<CostOracle> build_regression_oracle(std::vector<NodeLocal> locals,
                                                    std::shared_ptr<const Regularizer> f,
                                                    const Network& net);

}  // namespace drnet

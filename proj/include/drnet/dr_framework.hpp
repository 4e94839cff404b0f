#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "drnet/topology.hpp"

namespace drnet {

/// Costs of an in-network optimization problem, exposed only through their
/// proximal operators. Edge costs must be symmetric in their two
/// directions: edge_prox(lambda, i, j, u, v) equals the swapped result of
/// edge_prox(lambda, j, i, v, u). node_prox receives only the calling
/// node's own stacked variable, so no implementation can read another
/// node's data through this interface.
class CostOracle {
 public:
  virtual ~CostOracle() = default;

  /// Dimension of z_ij (equal for both directions of an edge).
  virtual Eigen::Index edge_dim(int i, int j) const = 0;

  /// prox of lambda*g_ij applied to the pair (z_ij, z_ji); returns the
  /// updated pair in the same order.
  virtual std::pair<Eigen::VectorXd, Eigen::VectorXd> edge_prox(
      double lambda, int i, int j, const Eigen::VectorXd& z_ij,
      const Eigen::VectorXd& z_ji) const = 0;

  /// prox of lambda*g_i applied to node i's stacked variable; blocks are
  /// ordered by ascending neighbor label.
  virtual Eigen::VectorXd node_prox(double lambda, int node,
                                    const Eigen::VectorXd& stacked) const = 0;
};

/// All edge variables of the network. Entry e holds (z_ij, z_ji) for
/// edges()[e] = (i, j) with i < j.
struct EdgeState {
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> z;

  static EdgeState zeros(const Network& net, const CostOracle& oracle);
  static EdgeState random(const Network& net, const CostOracle& oracle, std::uint64_t seed);

  /// The component flowing from node i toward neighbor j.
  const Eigen::VectorXd& directed(const Network& net, int i, int j) const;
  Eigen::VectorXd& directed(const Network& net, int i, int j);

  double norm() const;
  double distance(const EdgeState& other) const;
};

/// Gathers node i's variable (z_ij)_{j in N_i}, ascending by j.
Eigen::VectorXd stack_node(const Network& net, const EdgeState& state, int node);

struct RoundResult {
  EdgeState state;                        // z at k+1
  std::vector<Eigen::VectorXd> node_opt;  // per node, stacked \hat z at k+1
};

/// One synchronous Douglas-Rachford round: every edge prox is evaluated
/// once and shared by both endpoints, then every node applies its prox to
/// 2*ztilde - z, then z moves by rho*(zhat - ztilde). Requires lambda > 0
/// and 0 < rho < 2.
RoundResult dr_round(const Network& net, const CostOracle& oracle, double lambda,
                     double rho, const EdgeState& state);

struct RunResult {
  EdgeState final_state;
  std::vector<std::vector<Eigen::VectorXd>> node_estimates;  // [iter][node]
  std::vector<double> step_norms;                            // ||z_{k+1} - z_k||
  int iterations = 0;
  bool converged = false;  // stop_tol reached before max_iter
};

/// Iterates dr_round from init until max_iter rounds or until
/// ||z_{k+1} - z_k|| <= stop_tol * (1 + ||z_k||).
RunResult run(const Network& net, const CostOracle& oracle, double lambda, double rho,
              EdgeState init, int max_iter, double stop_tol);

}  // namespace drnet

#include "drnet/dr_framework.hpp"

#include <cmath>
#include <stdexcept>

#include "drnet/rng.hpp"

namespace drnet {

namespace {

void check_params(double lambda, double rho) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive, got " + std::to_string(lambda));
  if (!(rho > 0.0 && rho < 2.0)) throw std::invalid_argument("rho must lie in (0, 2), got " + std::to_string(rho));
}

void check_state(const Network& net, const CostOracle& oracle, const EdgeState& state) {
  if (state.z.size() != net.edges().size())
    throw std::invalid_argument("edge state has " + std::to_string(state.z.size()) + " entries for " +
                                std::to_string(net.edges().size()) + " edges");
  for (std::size_t e = 0; e < state.z.size(); ++e) {
    const auto& [i, j] = net.edges()[e];
    const Eigen::Index dim = oracle.edge_dim(i, j);
    if (state.z[e].first.size() != dim || state.z[e].second.size() != dim)
      throw std::invalid_argument("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") state dimension mismatch");
  }
}

}  // namespace

EdgeState EdgeState::zeros(const Network& net, const CostOracle& oracle) {
  EdgeState state;
  state.z.reserve(net.edges().size());
  for (const auto& [i, j] : net.edges()) {
    const Eigen::Index dim = oracle.edge_dim(i, j);
    state.z.emplace_back(Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim));
  }
  return state;
}

EdgeState EdgeState::random(const Network& net, const CostOracle& oracle, std::uint64_t seed) {
  Rng rng(seed);
  EdgeState state = zeros(net, oracle);
  for (auto& [fw, bw] : state.z) {
    for (Eigen::Index i = 0; i < fw.size(); ++i) fw[i] = rng.standard_normal();
    for (Eigen::Index i = 0; i < bw.size(); ++i) bw[i] = rng.standard_normal();
  }
  return state;
}

const Eigen::VectorXd& EdgeState::directed(const Network& net, int i, int j) const {
  const auto e = static_cast<std::size_t>(net.edge_index(i, j));
  return i < j ? z[e].first : z[e].second;
}

Eigen::VectorXd& EdgeState::directed(const Network& net, int i, int j) {
  const auto e = static_cast<std::size_t>(net.edge_index(i, j));
  return i < j ? z[e].first : z[e].second;
}

double EdgeState::norm() const {
  double sq = 0.0;
  for (const auto& [fw, bw] : z) sq += fw.squaredNorm() + bw.squaredNorm();
  return std::sqrt(sq);
}

double EdgeState::distance(const EdgeState& other) const {
  double sq = 0.0;
  for (std::size_t e = 0; e < z.size(); ++e)
    sq += (z[e].first - other.z[e].first).squaredNorm() +
          (z[e].second - other.z[e].second).squaredNorm();
  return std::sqrt(sq);
}

Eigen::VectorXd stack_node(const Network& net, const EdgeState& state, int node) {
  Eigen::Index total = 0;
  for (int j : net.neighbors(node)) total += state.directed(net, node, j).size();
  Eigen::VectorXd stacked(total);
  Eigen::Index at = 0;
  for (int j : net.neighbors(node)) {
    const Eigen::VectorXd& block = state.directed(net, node, j);
    stacked.segment(at, block.size()) = block;
    at += block.size();
  }
  return stacked;
}

RoundResult dr_round(const Network& net, const CostOracle& oracle, double lambda, double rho,
                     const EdgeState& state) {
  check_params(lambda, rho);
  check_state(net, oracle, state);
  const int m = net.size();

  // Each edge prox once, its two outputs shared by both endpoints.
  EdgeState tilde = state;
  for (std::size_t e = 0; e < state.z.size(); ++e) {
    const auto& [i, j] = net.edges()[e];
    auto pair = oracle.edge_prox(lambda, i, j, state.z[e].first, state.z[e].second);
    tilde.z[e].first = std::move(pair.first);
    tilde.z[e].second = std::move(pair.second);
  }

  RoundResult result;
  result.state = state;
  result.node_opt.resize(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    const Eigen::VectorXd reflected =
        2.0 * stack_node(net, tilde, i) - stack_node(net, state, i);
    Eigen::VectorXd zhat = oracle.node_prox(lambda, i, reflected);
    if (zhat.size() != reflected.size())
      throw std::invalid_argument("node_prox changed the dimension at node " + std::to_string(i));

    Eigen::Index at = 0;
    for (int j : net.neighbors(i)) {
      Eigen::VectorXd& z_ij = result.state.directed(net, i, j);
      const Eigen::VectorXd& t_ij = tilde.directed(net, i, j);
      z_ij += rho * (zhat.segment(at, z_ij.size()) - t_ij);
      at += z_ij.size();
    }
    result.node_opt[static_cast<std::size_t>(i - 1)] = std::move(zhat);
  }
  return result;
}

RunResult run(const Network& net, const CostOracle& oracle, double lambda, double rho,
              EdgeState init, int max_iter, double stop_tol) {
  check_params(lambda, rho);
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (stop_tol < 0.0) throw std::invalid_argument("stop_tol must be nonnegative");

  RunResult result;
  EdgeState state = std::move(init);
  for (int k = 0; k < max_iter; ++k) {
    const double prev_norm = state.norm();
    RoundResult round = dr_round(net, oracle, lambda, rho, state);
    const double step = state.distance(round.state);
    state = std::move(round.state);
    result.node_estimates.push_back(std::move(round.node_opt));
    result.step_norms.push_back(step);
    result.iterations = k + 1;
    if (step <= stop_tol * (1.0 + prev_norm)) {
      result.converged = true;
      break;
    }
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace drnet

#include "drnet/regression.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "multiplier_root.hpp"

namespace drnet {

NodeLocal make_node_local(const DataSummand& summand, int m, double eps) {
  if (m < 2) throw std::invalid_argument("need at least 2 agents, got m=" + std::to_string(m));
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (summand.y.size() != summand.X.rows())
    throw std::invalid_argument("summand label length does not match its matrix rows");
  NodeLocal local;
  local.X = summand.X;
  local.y = summand.y;
  local.m = m;
  local.eps = eps;
  local.delta = eps / m;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(local.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  local.U = svd.matrixU();
  local.V = svd.matrixV();
  local.sv = svd.singularValues();
  return local;
}

std::vector<NodeLocal> make_node_locals(const std::vector<DataSummand>& summands, int m,
                                        double eps) {
  if (static_cast<int>(summands.size()) != m)
    throw std::invalid_argument("expected " + std::to_string(m) + " summands, got " +
                                std::to_string(summands.size()));
  std::vector<NodeLocal> locals;
  locals.reserve(summands.size());
  for (const auto& s : summands) {
    locals.push_back(make_node_local(s, m, eps));
    if (locals.back().X.rows() != locals.front().X.rows() ||
        locals.back().X.cols() != locals.front().X.cols())
      throw std::invalid_argument("summands disagree on the data shape");
  }
  return locals;
}

EdgeProxPair edge_prox_regression(const Regularizer& f, double lambda,
                                  const Eigen::VectorXd& a_ij, const Eigen::VectorXd& b_ij,
                                  const Eigen::VectorXd& a_ji, const Eigen::VectorXd& b_ji) {
  if (a_ij.size() != a_ji.size() || b_ij.size() != b_ji.size())
    throw std::invalid_argument("edge prox inputs have mismatched shapes");
  EdgeProxPair out;
  out.a_ij = 0.5 * (a_ij - a_ji);
  out.a_ji = -out.a_ij;
  out.b_ij = 0.5 * dilated_prox(f, lambda, b_ij + b_ji);
  out.b_ji = out.b_ij;
  return out;
}

NodeSolveResult project_node_constraint(const NodeLocal& local,
                                        const std::vector<Eigen::VectorXd>& a_targets,
                                        const std::vector<Eigen::VectorXd>& b_targets) {
  const auto deg = static_cast<Eigen::Index>(a_targets.size());
  if (deg < 1) throw std::invalid_argument("node must have at least one neighbor");
  if (b_targets.size() != a_targets.size())
    throw std::invalid_argument("target lists have different lengths");
  if (!(local.delta > 0.0)) throw std::invalid_argument("per-node radius must be positive");
  const Eigen::Index n = local.n();
  const Eigen::Index p = local.p();
  for (const auto& t : a_targets)
    if (t.size() != n) throw std::invalid_argument("a-target dimension mismatch");
  for (const auto& t : b_targets)
    if (t.size() != p) throw std::invalid_argument("b-target dimension mismatch");

  // The shares collapse onto their sum and the b-targets onto their mean:
  // minimizing over the individual a_j for a fixed sum spreads the
  // adjustment evenly, leaving
  //   w_a * ||alpha - offset_sum||^2 + w_b * ||beta - centroid||^2,
  //   w_a = 1/deg, w_b = deg,
  // to be projected onto ||X beta - y + alpha|| <= delta.
  const double w_a = 1.0 / static_cast<double>(deg);
  const double w_b = static_cast<double>(deg);
  Eigen::VectorXd offset_sum = Eigen::VectorXd::Zero(n);
  for (const auto& t : a_targets) offset_sum += t;
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(p);
  for (const auto& t : b_targets) centroid += t;
  centroid /= static_cast<double>(deg);

  NodeSolveResult result;
  const Eigen::VectorXd unconstrained_resid = local.X * centroid - local.y + offset_sum;
  if (unconstrained_resid.norm() <= local.delta) {
    result.beta = centroid;
    result.alpha = offset_sum;
    result.a_shares = a_targets;
    result.multiplier = 0.0;
    result.constraint_active = false;
    return result;
  }

  // Active constraint: diagonalize through the stored SVD and solve the
  // scalar multiplier equation ||X beta(mu) - y + alpha(mu)|| = delta.
  const Eigen::Index k = local.sv.size();
  const Eigen::VectorXd shifted = local.y - offset_sum;
  const Eigen::VectorXd dtil = local.V.transpose() * centroid;
  const Eigen::VectorXd wtil = local.U.transpose() * shifted;
  const double wperp_sq = (shifted - local.U * wtil).squaredNorm();

  Eigen::VectorXd cg(k + 1), dg(k + 1);
  for (Eigen::Index g = 0; g < k; ++g) {
    const double t = local.sv[g] * dtil[g] - wtil[g];
    cg[g] = t * t;
    dg[g] = 1.0 / w_a + local.sv[g] * local.sv[g] / w_b;
  }
  cg[k] = wperp_sq;
  dg[k] = 1.0 / w_a;
  const double mu = detail::solve_multiplier(cg, dg, 0.0, local.delta);

  const double nu = mu * w_a / (w_b * (w_a + mu));
  Eigen::VectorXd btil(k);
  for (Eigen::Index g = 0; g < k; ++g)
    btil[g] = (dtil[g] + nu * local.sv[g] * wtil[g]) / (1.0 + nu * local.sv[g] * local.sv[g]);
  result.beta = centroid + local.V * (btil - dtil);
  result.alpha = (w_a * offset_sum - mu * (local.X * result.beta - local.y)) / (w_a + mu);

  const Eigen::VectorXd share_shift = (result.alpha - offset_sum) / static_cast<double>(deg);
  result.a_shares.reserve(a_targets.size());
  for (const auto& t : a_targets) result.a_shares.push_back(t + share_shift);
  result.multiplier = mu;
  result.constraint_active = true;
  return result;
}

NodeSolveResult node_subproblem(const NodeLocal& local,
                                const std::vector<NeighborExchange>& exchanges,
                                const Regularizer& f, double lambda) {
  std::vector<Eigen::VectorXd> a_targets, b_targets;
  a_targets.reserve(exchanges.size());
  b_targets.reserve(exchanges.size());
  for (const auto& ex : exchanges) {
    a_targets.push_back(-ex.a_in);
    b_targets.push_back(dilated_prox(f, lambda, ex.b_own + ex.b_in) - ex.b_own);
  }
  return project_node_constraint(local, a_targets, b_targets);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> dr_update_regression(
    double rho, const Eigen::VectorXd& a_own, const Eigen::VectorXd& a_in,
    const Eigen::VectorXd& b_own, const Eigen::VectorXd& f_value,
    const Eigen::VectorXd& a_hat, const Eigen::VectorXd& beta_hat) {
  if (!(rho > 0.0 && rho < 2.0))
    throw std::invalid_argument("rho must lie in (0, 2), got " + std::to_string(rho));
  return {a_own - (rho / 2.0) * (a_own - a_in) + rho * a_hat,
          b_own - (rho / 2.0) * f_value + rho * beta_hat};
}

namespace {

class RegressionOracle final : public CostOracle {
 public:
  RegressionOracle(std::vector<NodeLocal> locals, std::shared_ptr<const Regularizer> f,
                   const Network& net)
      : locals_(std::move(locals)), f_(std::move(f)), net_(net) {
    if (locals_.empty()) throw std::invalid_argument("no node data");
    if (static_cast<int>(locals_.size()) != net_.size())
      throw std::invalid_argument("node data count does not match the network size");
    n_ = locals_.front().n();
    p_ = locals_.front().p();
  }

  Eigen::Index edge_dim(int, int) const override { return n_ + p_; }

  std::pair<Eigen::VectorXd, Eigen::VectorXd> edge_prox(
      double lambda, int, int, const Eigen::VectorXd& z_ij,
      const Eigen::VectorXd& z_ji) const override {
    const EdgeProxPair prox = edge_prox_regression(*f_, lambda, z_ij.head(n_), z_ij.tail(p_),
                                                   z_ji.head(n_), z_ji.tail(p_));
    Eigen::VectorXd fw(n_ + p_), bw(n_ + p_);
    fw << prox.a_ij, prox.b_ij;
    bw << prox.a_ji, prox.b_ji;
    return {std::move(fw), std::move(bw)};
  }

  Eigen::VectorXd node_prox(double, int node, const Eigen::VectorXd& stacked) const override {
    const auto deg = static_cast<Eigen::Index>(net_.neighbors(node).size());
    if (stacked.size() != deg * (n_ + p_))
      throw std::invalid_argument("stacked node variable has wrong dimension");
    std::vector<Eigen::VectorXd> a_targets, b_targets;
    a_targets.reserve(static_cast<std::size_t>(deg));
    b_targets.reserve(static_cast<std::size_t>(deg));
    for (Eigen::Index block = 0; block < deg; ++block) {
      a_targets.push_back(stacked.segment(block * (n_ + p_), n_));
      b_targets.push_back(stacked.segment(block * (n_ + p_) + n_, p_));
    }
    const NodeSolveResult sol =
        project_node_constraint(locals_[static_cast<std::size_t>(node - 1)], a_targets, b_targets);
    Eigen::VectorXd out(stacked.size());
    for (Eigen::Index block = 0; block < deg; ++block) {
      out.segment(block * (n_ + p_), n_) = sol.a_shares[static_cast<std::size_t>(block)];
      out.segment(block * (n_ + p_) + n_, p_) = sol.beta;
    }
    return out;
  }

 private:
  std::vector<NodeLocal> locals_;
  std::shared_ptr<const Regularizer> f_;
  Network net_;
  Eigen::Index n_ = 0, p_ = 0;
};

}  // namespace

std::unique_ptr<CostOracle> build_regression_oracle(std::vector<NodeLocal> locals,
                                                    std::shared_ptr<const Regularizer> f,
                                                    const Network& net) {
  return std::make_unique<RegressionOracle>(std::move(locals), std::move(f), net);
}

}  // namespace drnet

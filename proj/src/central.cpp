#include "drnet/central.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "drnet/errors.hpp"
#include "multiplier_root.hpp"

namespace drnet {

Eigen::VectorXd project_residual_ball(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                                      const Eigen::VectorXd& sv, const Eigen::VectorXd& y,
                                      double eps, const Eigen::VectorXd& v) {
  const Eigen::VectorXd vtil = V.transpose() * v;
  const Eigen::VectorXd resid = U * sv.cwiseProduct(vtil) - y;
  if (resid.norm() <= eps) return v;

  const Eigen::VectorXd wtil = U.transpose() * y;
  const double outside_sq = (y - U * wtil).squaredNorm();
  const Eigen::Index k = sv.size();
  Eigen::VectorXd cg(k), dg(k);
  for (Eigen::Index g = 0; g < k; ++g) {
    const double t = sv[g] * vtil[g] - wtil[g];
    cg[g] = t * t;
    dg[g] = sv[g] * sv[g];
  }
  double mu = 0.0;
  try {
    mu = detail::solve_multiplier(cg, dg, outside_sq, eps);
  } catch (const std::invalid_argument&) {
    throw DataError("residual bound " + std::to_string(eps) +
                    " is below the closest achievable residual; the constraint set is empty");
  }
  Eigen::VectorXd btil(k);
  for (Eigen::Index g = 0; g < k; ++g)
    btil[g] = (vtil[g] + mu * sv[g] * wtil[g]) / (1.0 + mu * sv[g] * sv[g]);
  return v + V * (btil - vtil);
}

CentralSolution solve_central(const GlobalData& data, const Regularizer& f, double eps,
                              double lambda, int max_iter, double tol) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (tol < 0.0) throw std::invalid_argument("tol must be nonnegative");
  validate_global_data(data);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(data.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd& U = svd.matrixU();
  const Eigen::MatrixXd& V = svd.matrixV();
  const Eigen::VectorXd& sv = svd.singularValues();

  CentralSolution sol;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(data.p());
  Eigen::VectorXd feasible = Eigen::VectorXd::Zero(data.p());
  for (int k = 0; k < max_iter; ++k) {
    const Eigen::VectorXd x = f.prox(lambda, z);
    feasible = project_residual_ball(U, V, sv, data.y, eps, 2.0 * x - z);
    const double step = (feasible - x).norm();
    const double z_norm = z.norm();
    z += feasible - x;
    sol.iterations = k + 1;
    if (step <= tol * (1.0 + z_norm)) {
      sol.converged = true;
      break;
    }
  }
  sol.beta = feasible;
  sol.objective = f.value(sol.beta);
  sol.residual_norm = (data.X * sol.beta - data.y).norm();
  return sol;
}

namespace {

// Stacked variable layout for the penalty oracle: the shares first, then
// beta.
struct PenaltyProblem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  double delta = 0.0;
  std::vector<Eigen::VectorXd> a_targets;
  std::vector<Eigen::VectorXd> b_targets;
  Eigen::Index n = 0, p = 0, deg = 0, dim = 0;

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
    Eigen::VectorXd r = X * x.tail(p) - y;
    for (Eigen::Index j = 0; j < deg; ++j) r += x.segment(j * n, n);
    return r;
  }

  double base_value(const Eigen::VectorXd& x) const {
    double val = 0.0;
    for (Eigen::Index j = 0; j < deg; ++j)
      val += (x.segment(j * n, n) - a_targets[static_cast<std::size_t>(j)]).squaredNorm();
    for (Eigen::Index j = 0; j < deg; ++j)
      val += (x.tail(p) - b_targets[static_cast<std::size_t>(j)]).squaredNorm();
    return val;
  }

  double value(const Eigen::VectorXd& x, double nu) const {
    const double excess = std::max(0.0, residual(x).norm() - delta);
    return base_value(x) + nu * excess * excess;
  }

  Eigen::VectorXd base_gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g(dim);
    for (Eigen::Index j = 0; j < deg; ++j)
      g.segment(j * n, n) = 2.0 * (x.segment(j * n, n) - a_targets[static_cast<std::size_t>(j)]);
    Eigen::VectorXd gb = 2.0 * static_cast<double>(deg) * x.tail(p);
    for (Eigen::Index j = 0; j < deg; ++j) gb -= 2.0 * b_targets[static_cast<std::size_t>(j)];
    g.tail(p) = gb;
    return g;
  }

  // J^T w for the residual Jacobian J = [I ... I, X].
  Eigen::VectorXd jt(const Eigen::VectorXd& w) const {
    Eigen::VectorXd out(dim);
    for (Eigen::Index j = 0; j < deg; ++j) out.segment(j * n, n) = w;
    out.tail(p) = X.transpose() * w;
    return out;
  }

  Eigen::MatrixXd jtj() const {
    Eigen::MatrixXd out(dim, dim);
    for (Eigen::Index j = 0; j < deg; ++j) {
      for (Eigen::Index l = 0; l < deg; ++l)
        out.block(j * n, l * n, n, n) = Eigen::MatrixXd::Identity(n, n);
      out.block(j * n, deg * n, n, p) = X;
      out.block(deg * n, j * n, p, n) = X.transpose();
    }
    out.block(deg * n, deg * n, p, p) = X.transpose() * X;
    return out;
  }
};

}  // namespace

NodeSolveResult qp_oracle_node_subproblem(const NodeLocal& local,
                                          const std::vector<NeighborExchange>& exchanges,
                                          const Regularizer& f, double lambda) {
  if (local.n() * local.p() > 64)
    throw std::invalid_argument("qp oracle is restricted to small instances (n*p <= 64)");
  if (exchanges.empty()) throw std::invalid_argument("node must have at least one neighbor");

  PenaltyProblem prob;
  prob.X = local.X;
  prob.y = local.y;
  prob.delta = local.delta;
  prob.n = local.n();
  prob.p = local.p();
  prob.deg = static_cast<Eigen::Index>(exchanges.size());
  prob.dim = prob.deg * prob.n + prob.p;
  for (const auto& ex : exchanges) {
    prob.a_targets.push_back(-ex.a_in);
    prob.b_targets.push_back(dilated_prox(f, lambda, ex.b_own + ex.b_in) - ex.b_own);
  }

  // Unconstrained minimizer: shares at their targets, beta at the centroid.
  Eigen::VectorXd x(prob.dim);
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(prob.p);
  for (Eigen::Index j = 0; j < prob.deg; ++j) {
    x.segment(j * prob.n, prob.n) = prob.a_targets[static_cast<std::size_t>(j)];
    centroid += prob.b_targets[static_cast<std::size_t>(j)];
  }
  x.tail(prob.p) = centroid / static_cast<double>(prob.deg);

  NodeSolveResult result;
  const auto finish = [&](double nu_final) {
    result.a_shares.clear();
    for (Eigen::Index j = 0; j < prob.deg; ++j)
      result.a_shares.push_back(x.segment(j * prob.n, prob.n));
    result.beta = x.tail(prob.p);
    result.alpha = Eigen::VectorXd::Zero(prob.n);
    for (const auto& share : result.a_shares) result.alpha += share;
    const double excess = std::max(0.0, prob.residual(x).norm() - prob.delta);
    result.multiplier = 2.0 * nu_final * excess;
    result.constraint_active = excess > 0.0;
    return result;
  };

  if (prob.residual(x).norm() <= prob.delta) return finish(0.0);

  const Eigen::MatrixXd jtj = prob.jtj();
  Eigen::MatrixXd base_hess = Eigen::MatrixXd::Zero(prob.dim, prob.dim);
  base_hess.topLeftCorner(prob.deg * prob.n, prob.deg * prob.n) =
      2.0 * Eigen::MatrixXd::Identity(prob.deg * prob.n, prob.deg * prob.n);
  base_hess.bottomRightCorner(prob.p, prob.p) =
      2.0 * static_cast<double>(prob.deg) * Eigen::MatrixXd::Identity(prob.p, prob.p);

  double nu = 1e2;
  for (int stage = 0; stage < 10; ++stage, nu *= 10.0) {
    for (int it = 0; it < 100; ++it) {
      const Eigen::VectorXd r = prob.residual(x);
      const double rnorm = r.norm();
      const double excess = rnorm - prob.delta;
      Eigen::VectorXd grad = prob.base_gradient(x);
      Eigen::MatrixXd hess = base_hess;
      if (excess > 0.0) {
        const Eigen::VectorXd u = prob.jt(r / rnorm);
        grad += 2.0 * nu * excess * u;
        const double frac = excess / rnorm;  // in (0, 1)
        hess += 2.0 * nu * ((1.0 - frac) * (u * u.transpose()) + frac * jtj);
      }
      if (grad.norm() <= 1e-11 * (1.0 + x.norm())) break;

      hess.diagonal().array() += 1e-12 * hess.diagonal().maxCoeff();
      const Eigen::VectorXd dx = hess.ldlt().solve(-grad);
      const double g_dot_dx = grad.dot(dx);
      double t = 1.0;
      const double val = prob.value(x, nu);
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        if (prob.value(x + t * dx, nu) <= val + 1e-4 * t * g_dot_dx) {
          x += t * dx;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved) break;
      if (t * dx.norm() <= 1e-15 * (1.0 + x.norm())) break;
    }
  }
  return finish(nu / 10.0);
}

}  // namespace drnet

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "drnet/central.hpp"
#include "drnet/errors.hpp"
#include "drnet/rng.hpp"

using namespace drnet;

namespace {

Eigen::VectorXd random_vec(Rng& rng, Eigen::Index dim, double scale = 1.0) {
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = scale * rng.standard_normal();
  return v;
}

Eigen::MatrixXd random_mat(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  Eigen::MatrixXd mat(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) mat(r, c) = scale * rng.standard_normal();
  return mat;
}

GlobalData identity_instance() {
  GlobalData data;
  data.X = Eigen::MatrixXd::Identity(2, 2);
  data.y.resize(2);
  data.y << 2.0, 0.0;
  return data;
}

}  // namespace

TEST_CASE("identity data with an active ball gives the soft-thresholded label") {
  const GlobalData data = identity_instance();
  L1Norm l1;
  const CentralSolution sol = solve_central(data, l1, 0.5, 0.5, 200000, 1e-13);
  CHECK(sol.converged);
  CHECK(sol.beta[0] == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(std::abs(sol.beta[1]) <= 1e-8);
  CHECK(sol.residual_norm <= 0.5 + 1e-8);

  // Independent oracle: scan the feasible disk ||beta - y|| <= 0.5 on a
  // fine polar grid and keep the smallest l1 norm.
  double grid_best = 1e300;
  Eigen::Vector2d grid_arg = Eigen::Vector2d::Zero();
  for (int ir = 0; ir <= 400; ++ir) {
    const double r = 0.5 * ir / 400.0;
    for (int it = 0; it < 1600; ++it) {
      const double th = 2.0 * M_PI * it / 1600.0;
      const Eigen::Vector2d cand(2.0 + r * std::cos(th), r * std::sin(th));
      const double val = cand.lpNorm<1>();
      if (val < grid_best) {
        grid_best = val;
        grid_arg = cand;
      }
    }
  }
  CHECK(grid_arg[0] == doctest::Approx(1.5).epsilon(5e-3));
  CHECK(sol.objective <= grid_best + 1e-6);
}

TEST_CASE("a ball containing the origin yields beta = 0 for the l1 cost") {
  const GlobalData data = identity_instance();
  L1Norm l1;
  const CentralSolution sol = solve_central(data, l1, 2.5, 0.3);  // eps >= ||y|| = 2
  CHECK(sol.converged);
  CHECK(sol.beta.norm() == 0.0);
}

TEST_CASE("the zero cost returns the projection of the initial point") {
  const GlobalData data = identity_instance();
  ZeroFunction zero;
  const CentralSolution sol = solve_central(data, zero, 0.5, 1.0);
  CHECK(sol.converged);
  CHECK(sol.residual_norm <= 0.5 + 1e-10);
  // Initial point 0 projects onto the ball boundary toward y.
  CHECK(sol.beta[0] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(sol.beta[1] == doctest::Approx(0.0));
}

TEST_CASE("solutions are feasible and locally optimal on random instances") {
  Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    // Underdetermined so the residual ball is reachable for any eps > 0.
    const Eigen::Index n = 2 + rng.uniform_int(0, 4), p = n + 1 + rng.uniform_int(0, 4);
    GlobalData data{random_mat(rng, n, p), random_vec(rng, n)};
    const double eps = 0.05 + rng.uniform01();
    L1Norm l1;
    const CentralSolution sol = solve_central(data, l1, eps, 0.1, 400000, 1e-12);
    CHECK(sol.converged);
    CHECK(sol.residual_norm <= eps + 1e-8);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(data.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    for (int k = 0; k < 100; ++k) {
      const Eigen::VectorXd cand = project_residual_ball(
          svd.matrixU(), svd.matrixV(), svd.singularValues(), data.y, eps,
          sol.beta + random_vec(rng, p, 0.2));
      CHECK(l1.value(cand) >= sol.objective - 1e-8);
    }
  }
}

TEST_CASE("an unreachable residual bound is rejected") {
  GlobalData data;
  data.X = Eigen::MatrixXd::Zero(2, 2);
  data.y.resize(2);
  data.y << 3.0, 4.0;  // ||y|| = 5 is the best any beta can do
  L1Norm l1;
  CHECK_THROWS_AS(solve_central(data, l1, 1.0, 0.5), DataError);
}

TEST_CASE("non-convergence is reported through the flag") {
  Rng rng(77);
  GlobalData data{random_mat(rng, 6, 9), random_vec(rng, 6)};
  L1Norm l1;
  const CentralSolution sol = solve_central(data, l1, 0.1, 0.1, 3, 0.0);
  CHECK_FALSE(sol.converged);
  CHECK(sol.iterations == 3);
}

TEST_CASE("penalty oracle agrees with the subproblem solver") {
  Rng rng(101);
  L1Norm l1;
  int active_seen = 0, inactive_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + rng.uniform_int(0, 4), p = 1 + rng.uniform_int(0, 4);
    const Eigen::Index deg = 1 + rng.uniform_int(0, 2);
    DataSummand s{random_mat(rng, n, p), random_vec(rng, n)};
    if (trial % 6 == 0) s.X.setZero();                          // zero matrix
    if (trial % 9 == 0 && n > 1) s.X.row(0) = 2.0 * s.X.row(n - 1);  // rank deficiency
    const int m = 2 + rng.uniform_int(0, 2);
    const double eps = (trial % 3 == 0 ? 20.0 : 0.05 + 0.4 * rng.uniform01()) * m;
    const NodeLocal local = make_node_local(s, m, eps);

    std::vector<NeighborExchange> exchanges(static_cast<std::size_t>(deg));
    for (auto& ex : exchanges) {
      ex.a_own = random_vec(rng, n);
      ex.a_in = random_vec(rng, n);
      ex.b_own = random_vec(rng, p);
      ex.b_in = random_vec(rng, p);
    }
    const double lambda = 0.05 + rng.uniform01();

    const NodeSolveResult fast = node_subproblem(local, exchanges, l1, lambda);
    const NodeSolveResult slow = qp_oracle_node_subproblem(local, exchanges, l1, lambda);
    (fast.constraint_active ? active_seen : inactive_seen) += 1;

    CHECK((fast.beta - slow.beta).lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK((fast.alpha - slow.alpha).lpNorm<Eigen::Infinity>() <= 1e-6);
    for (Eigen::Index j = 0; j < deg; ++j)
      CHECK((fast.a_shares[static_cast<std::size_t>(j)] - slow.a_shares[static_cast<std::size_t>(j)])
                .lpNorm<Eigen::Infinity>() <= 1e-6);
  }
  CHECK(active_seen > 10);
  CHECK(inactive_seen > 10);
}

TEST_CASE("penalty oracle reproduces the scalar example") {
  DataSummand s;
  s.X = Eigen::MatrixXd::Constant(1, 1, 1.0);
  s.y = Eigen::VectorXd::Zero(1);
  const NodeLocal local = make_node_local(s, 2, 1.0);  // delta = 0.5
  ZeroFunction zero;
  std::vector<NeighborExchange> exchanges(1);
  exchanges[0].a_own = Eigen::VectorXd::Zero(1);
  exchanges[0].a_in = Eigen::VectorXd::Zero(1);
  exchanges[0].b_own = Eigen::VectorXd::Zero(1);
  exchanges[0].b_in = Eigen::VectorXd::Constant(1, 2.0);
  const NodeSolveResult sol = qp_oracle_node_subproblem(local, exchanges, zero, 1.0);
  CHECK(sol.beta[0] == doctest::Approx(1.25).epsilon(1e-6));
  CHECK(sol.alpha[0] == doctest::Approx(-0.75).epsilon(1e-6));

  CHECK_THROWS_AS(qp_oracle_node_subproblem(
                      make_node_local(DataSummand{Eigen::MatrixXd::Zero(10, 10),
                                                  Eigen::VectorXd::Zero(10)}, 2, 1.0),
                      exchanges, zero, 1.0),
                  std::invalid_argument);
}

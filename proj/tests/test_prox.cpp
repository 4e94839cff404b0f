#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <vector>

#include "drnet/prox.hpp"
#include "drnet/rng.hpp"

using namespace drnet;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

Eigen::VectorXd random_vec(Rng& rng, Eigen::Index dim, double scale = 3.0) {
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = scale * rng.standard_normal();
  return v;
}

std::vector<std::shared_ptr<const Regularizer>> all_instances() {
  return {make_regularizer("l1"), make_regularizer("zero"), make_regularizer("sq_l2")};
}

}  // namespace

TEST_CASE("closed-form prox values") {
  L1Norm l1;
  CHECK((l1.prox(1.0, vec({3.0, -0.5, 0.0})) - vec({2.0, 0.0, 0.0})).norm() == 0.0);
  ZeroFunction zero;
  const Eigen::VectorXd v = vec({1.0, -2.0, 0.25});
  CHECK((zero.prox(0.7, v) - v).norm() == 0.0);
  SquaredL2 sq;
  CHECK(sq.prox(1.0, vec({4.0}))[0] == doctest::Approx(2.0));
  CHECK_THROWS_AS(l1.prox(0.0, v), std::invalid_argument);
}

TEST_CASE("regularizer values") {
  CHECK(L1Norm{}.value(vec({3.0, -0.5, 0.0})) == doctest::Approx(3.5));
  CHECK(SquaredL2{}.value(vec({3.0, 4.0})) == doctest::Approx(12.5));
  CHECK(ZeroFunction{}.value(vec({3.0, 4.0})) == 0.0);
  CHECK_THROWS_AS(make_regularizer("huber"), std::invalid_argument);
}

TEST_CASE("dilated prox examples") {
  L1Norm l1;
  CHECK(dilated_prox(l1, 0.02, vec({0.01}))[0] == 0.0);
  CHECK(dilated_prox(l1, 0.02, vec({1.0}))[0] == doctest::Approx(0.98).epsilon(1e-14));
  ZeroFunction zero;
  const Eigen::VectorXd v = vec({0.4, -7.0});
  CHECK((dilated_prox(zero, 0.3, v) - v).norm() == 0.0);
}

TEST_CASE("dilated prox of l1 is soft-thresholding at lambda") {
  L1Norm l1;
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const double lambda = 0.01 + 2.0 * rng.uniform01();
    const Eigen::VectorXd v = random_vec(rng, 1 + rng.uniform_int(0, 7));
    const Eigen::VectorXd got = dilated_prox(l1, lambda, v);
    const Eigen::VectorXd want = soft_threshold(v, lambda);
    CHECK((got - want).lpNorm<Eigen::Infinity>() <= 1e-14);
  }
}

TEST_CASE("firm nonexpansiveness of every instance") {
  Rng rng(17);
  for (const auto& f : all_instances()) {
    for (int trial = 0; trial < 1000; ++trial) {
      const double t = 0.01 + 3.0 * rng.uniform01();
      const Eigen::Index dim = 1 + rng.uniform_int(0, 5);
      const Eigen::VectorXd u = random_vec(rng, dim);
      const Eigen::VectorXd v = random_vec(rng, dim);
      CHECK((f->prox(t, u) - f->prox(t, v)).norm() <= (u - v).norm() + 1e-14);
    }
  }
}

TEST_CASE("prox output minimizes the prox objective") {
  Rng rng(23);
  for (const auto& f : all_instances()) {
    for (int trial = 0; trial < 200; ++trial) {
      const double t = 0.05 + 2.0 * rng.uniform01();
      const Eigen::Index dim = 1 + rng.uniform_int(0, 4);
      const Eigen::VectorXd v = random_vec(rng, dim);
      const Eigen::VectorXd star = f->prox(t, v);
      const double best = t * f->value(star) + 0.5 * (star - v).squaredNorm();
      for (int d = 0; d < 5; ++d) {
        const Eigen::VectorXd other = star + 0.1 * random_vec(rng, dim, 1.0);
        const double val = t * f->value(other) + 0.5 * (other - v).squaredNorm();
        CHECK(val >= best - 1e-10);
      }
    }
  }
}

TEST_CASE("l2 ball projection") {
  const Eigen::VectorXd center = Eigen::VectorXd::Zero(2);
  CHECK((project_l2_ball(center, 2.5, vec({3.0, 4.0})) - vec({1.5, 2.0})).norm() <= 1e-15);
  const Eigen::VectorXd inside = vec({0.3, -0.1});
  CHECK((project_l2_ball(center, 2.5, inside) - inside).norm() == 0.0);
  CHECK((project_l2_ball(vec({1.0, 1.0}), 0.0, vec({9.0, -9.0})) - vec({1.0, 1.0})).norm() == 0.0);
  CHECK_THROWS_AS(project_l2_ball(center, -1.0, inside), std::invalid_argument);

  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index dim = 1 + rng.uniform_int(0, 5);
    const Eigen::VectorXd c = random_vec(rng, dim);
    const Eigen::VectorXd v = random_vec(rng, dim);
    const double radius = 2.0 * rng.uniform01();
    CHECK((project_l2_ball(c, radius, v) - c).norm() <= radius + 1e-12);
  }
}

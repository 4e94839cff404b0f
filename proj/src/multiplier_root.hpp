#pragma once

#include <Eigen/Core>

namespace drnet::detail {

// Root of phi(mu) = target for
//   phi(mu)^2 = constant + sum_g c[g] / (1 + mu * d[g])^2,
// with c >= 0, d >= 0. phi is strictly decreasing wherever some c[g] with
// d[g] > 0 is nonzero; phi^2 is convex in mu, so the safeguarded Newton
// iteration from the left bracket edge converges monotonically. Requires
// phi(0) > target > phi(inf); throws std::invalid_argument when the target
// lies at or below the asymptote (no root). The result satisfies
// |phi(mu) - target| <= 1e-12 * max(1, target).
double solve_multiplier(const Eigen::VectorXd& c, const Eigen::VectorXd& d, double constant,
                        double target);

}  // namespace drnet::detail

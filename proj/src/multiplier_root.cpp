#include "multiplier_root.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace drnet::detail {

namespace {

double phi_squared(const Eigen::VectorXd& c, const Eigen::VectorXd& d, double constant, double mu) {
  double s = constant;
  for (Eigen::Index g = 0; g < c.size(); ++g) {
    const double w = 1.0 + mu * d[g];
    s += c[g] / (w * w);
  }
  return s;
}

double phi_squared_deriv(const Eigen::VectorXd& c, const Eigen::VectorXd& d, double mu) {
  double s = 0.0;
  for (Eigen::Index g = 0; g < c.size(); ++g) {
    const double w = 1.0 + mu * d[g];
    s -= 2.0 * c[g] * d[g] / (w * w * w);
  }
  return s;
}

}  // namespace

double solve_multiplier(const Eigen::VectorXd& c, const Eigen::VectorXd& d, double constant,
                        double target) {
  if (c.size() != d.size()) throw std::invalid_argument("solve_multiplier: c and d sizes differ");
  const double target_sq = target * target;

  double asymptote_sq = constant;
  for (Eigen::Index g = 0; g < c.size(); ++g)
    if (d[g] == 0.0) asymptote_sq += c[g];
  if (asymptote_sq >= target_sq)
    throw std::invalid_argument("solve_multiplier: target at or below the asymptote; no root");
  if (phi_squared(c, d, constant, 0.0) <= target_sq)
    throw std::invalid_argument("solve_multiplier: already at or below target at mu = 0");

  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (phi_squared(c, d, constant, hi) > target_sq) {
    lo = hi;
    hi *= 4.0;
    if (++doublings > 2000) throw std::runtime_error("solve_multiplier: bracket expansion failed");
  }

  const double tol = 1e-12 * std::max(1.0, target);
  double mu = lo;
  for (int it = 0; it < 200; ++it) {
    const double h = phi_squared(c, d, constant, mu) - target_sq;
    if (std::abs(std::sqrt(h + target_sq) - target) <= tol) return mu;
    if (h > 0.0)
      lo = mu;
    else
      hi = mu;
    const double dh = phi_squared_deriv(c, d, mu);
    double next = (dh < 0.0) ? mu - h / dh : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == mu || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi))
      return mu;
    mu = next;
  }
  return mu;
}

}  // namespace drnet::detail

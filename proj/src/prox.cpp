#include "drnet/prox.hpp"

#include <stdexcept>

namespace drnet {

namespace {

void check_scale(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("prox scale must be positive, got " + std::to_string(t));
}

}  // namespace

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t) {
  return v.array().sign() * (v.array().abs() - t).max(0.0);
}

double L1Norm::value(const Eigen::VectorXd& v) const { return v.lpNorm<1>(); }

Eigen::VectorXd L1Norm::prox(double t, const Eigen::VectorXd& v) const {
  check_scale(t);
  return soft_threshold(v, t);
}

double SquaredL2::value(const Eigen::VectorXd& v) const { return 0.5 * v.squaredNorm(); }

Eigen::VectorXd SquaredL2::prox(double t, const Eigen::VectorXd& v) const {
  check_scale(t);
  return v / (1.0 + t);
}

double ZeroFunction::value(const Eigen::VectorXd&) const { return 0.0; }

Eigen::VectorXd ZeroFunction::prox(double t, const Eigen::VectorXd& v) const {
  check_scale(t);
  return v;
}

std::shared_ptr<const Regularizer> make_regularizer(const std::string& name) {
  if (name == "l1") return std::make_shared<L1Norm>();
  if (name == "sq_l2") return std::make_shared<SquaredL2>();
  if (name == "zero") return std::make_shared<ZeroFunction>();
  throw std::invalid_argument("unknown regularizer '" + name + "' (expected l1, zero, or sq_l2)");
}

Eigen::VectorXd dilated_prox(const Regularizer& f, double lambda, const Eigen::VectorXd& v) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("lambda must be positive, got " + std::to_string(lambda));
  return 2.0 * f.prox(lambda / 2.0, v / 2.0);
}

Eigen::VectorXd project_l2_ball(const Eigen::VectorXd& center, double radius,
                                const Eigen::VectorXd& v) {
  if (radius < 0.0) throw std::invalid_argument("ball radius must be nonnegative");
  const Eigen::VectorXd diff = v - center;
  const double dist = diff.norm();
  if (dist <= radius) return v;
  return center + (radius / dist) * diff;
}

}  // namespace drnet

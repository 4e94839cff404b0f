#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>

namespace drnet {

/// A closed proper convex cost f exposed through evaluation and its
/// proximal operator. Instances are stateless and safe to share.
class Regularizer {
 public:
  virtual ~Regularizer() = default;

  virtual double value(const Eigen::VectorXd& v) const = 0;

  /// Proximal operator of the scaled function t*f: the unique minimizer of
  /// t*f(z) + (1/2)||z - v||^2. Requires t > 0.
  virtual Eigen::VectorXd prox(double t, const Eigen::VectorXd& v) const = 0;

  virtual std::string name() const = 0;
};

/// f(v) = ||v||_1; prox is elementwise soft-thresholding.
class L1Norm final : public Regularizer {
 public:
  double value(const Eigen::VectorXd& v) const override;
  Eigen::VectorXd prox(double t, const Eigen::VectorXd& v) const override;
  std::string name() const override { return "l1"; }
};

/// f(v) = (1/2)||v||_2^2; prox shrinks by 1/(1+t). Mainly for testing.
class SquaredL2 final : public Regularizer {
 public:
  double value(const Eigen::VectorXd& v) const override;
  Eigen::VectorXd prox(double t, const Eigen::VectorXd& v) const override;
  std::string name() const override { return "sq_l2"; }
};

/// f = 0; prox is the identity.
class ZeroFunction final : public Regularizer {
 public:
  double value(const Eigen::VectorXd& v) const override;
  Eigen::VectorXd prox(double t, const Eigen::VectorXd& v) const override;
  std::string name() const override { return "zero"; }
};

/// Lookup by name: "l1" | "zero" | "sq_l2". Throws std::invalid_argument.
std::shared_ptr<const Regularizer> make_regularizer(const std::string& name);

/// Elementwise sign(v) * max(|v| - t, 0).
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t);

/// Prox of the dilation g(w) = 2 f(w/2) at scale lambda, i.e.
/// 2 * prox((lambda/2) f, v/2). For f = l1 this reduces to
/// soft-thresholding at lambda. Requires lambda > 0.
Eigen::VectorXd dilated_prox(const Regularizer& f, double lambda, const Eigen::VectorXd& v);

/// Euclidean projection onto the ball ||z - center|| <= radius.
Eigen::VectorXd project_l2_ball(const Eigen::VectorXd& center, double radius,
                                const Eigen::VectorXd& v);

}  // namespace drnet

#pragma once

#include <Eigen/Core>

#include <optional>

namespace gmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Euclidean setup with a diagonal SPD operator B:
///   ||x||   = <Bx, x>^{1/2}
///   ||g||_* = <g, B^{-1} g>^{1/2}
///   d(x)    = 1/2 ||x||^2, so the Bregman distance is 1/2 ||x - y||^2.
///
/// With psi == 0 the dual function Phi_L(s) = max_y { <s,y> - L d(y) }
/// has the closed form ||s||_*^2 / (2L) and maximizer B^{-1} s / L.
class EuclideanGeometry {
public:
  /// Identity operator in dimension `dim`.
  explicit EuclideanGeometry(Eigen::Index dim);
  /// Diagonal operator; every entry must be strictly positive.
  explicit EuclideanGeometry(Vector b_diag);

  Eigen::Index dim() const { return b_diag_.size(); }
  const Vector& b_diag() const { return b_diag_; }
  bool is_identity() const { return identity_; }

  double primal_norm(const Vector& x) const;
  double dual_norm(const Vector& g) const;
  double dual_norm_sq(const Vector& g) const;
  /// <g, B^{-1} h>
  double dual_inner(const Vector& g, const Vector& h) const;

  /// beta_d(x, y) = 1/2 <B(x - y), x - y>
  double bregman_distance(const Vector& x, const Vector& y) const;

  /// B^{-1} s
  Vector apply_inverse(const Vector& s) const;

  /// y*_L(s) = B^{-1} s / L, the gradient of Phi_L at s.
  Vector y_star(const Vector& s, double L) const;
  /// Phi_L(s) = ||s||_*^2 / (2L)
  double phi_value(const Vector& s, double L) const;

private:
  void check_dim(const Vector& v, const char* what) const;

  Vector b_diag_;
  Vector b_inv_;
  bool identity_ = true;
};

/// Relative smoothness constants of f with respect to d:
///   mu_d beta_d(x,y) <= f(y) - f(x) - <grad f(x), y - x> <= L_d beta_d(x,y).
/// Only used by certificates; the adaptive solver never needs them.
struct SmoothnessDescriptor {
  std::optional<double> L_d;
  double mu_d = 0.0;

  SmoothnessDescriptor() = default;
  SmoothnessDescriptor(std::optional<double> L, double mu);
};

}  // namespace gmm

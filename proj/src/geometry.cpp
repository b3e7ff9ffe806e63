#include "gmm/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gmm {

EuclideanGeometry::EuclideanGeometry(Eigen::Index dim) {
  if (dim < 1) {
    throw std::invalid_argument("EuclideanGeometry: dimension must be positive");
  }
  b_diag_ = Vector::Ones(dim);
  b_inv_ = Vector::Ones(dim);
  identity_ = true;
}

EuclideanGeometry::EuclideanGeometry(Vector b_diag) : b_diag_(std::move(b_diag)) {
  if (b_diag_.size() < 1) {
    throw std::invalid_argument("EuclideanGeometry: dimension must be positive");
  }
  for (Eigen::Index i = 0; i < b_diag_.size(); ++i) {
    if (!(b_diag_[i] > 0.0) || !std::isfinite(b_diag_[i])) {
      throw std::invalid_argument("EuclideanGeometry: B entry " + std::to_string(i) +
                                  " is not strictly positive");
    }
  }
  b_inv_ = b_diag_.cwiseInverse();
  identity_ = (b_diag_.array() == 1.0).all();
}

void EuclideanGeometry::check_dim(const Vector& v, const char* what) const {
  if (v.size() != dim()) {
    throw std::invalid_argument(std::string("EuclideanGeometry: ") + what + " has dimension " +
                                std::to_string(v.size()) + ", expected " +
                                std::to_string(dim()));
  }
}

double EuclideanGeometry::primal_norm(const Vector& x) const {
  check_dim(x, "point");
  if (identity_) return x.norm();
  return std::sqrt((x.array().square() * b_diag_.array()).sum());
}

double EuclideanGeometry::dual_norm_sq(const Vector& g) const {
  check_dim(g, "dual vector");
  if (identity_) return g.squaredNorm();
  return (g.array().square() * b_inv_.array()).sum();
}

double EuclideanGeometry::dual_norm(const Vector& g) const { return std::sqrt(dual_norm_sq(g)); }

double EuclideanGeometry::dual_inner(const Vector& g, const Vector& h) const {
  check_dim(g, "dual vector");
  check_dim(h, "dual vector");
  if (identity_) return g.dot(h);
  return (g.array() * b_inv_.array() * h.array()).sum();
}

double EuclideanGeometry::bregman_distance(const Vector& x, const Vector& y) const {
  check_dim(x, "x");
  check_dim(y, "y");
  const Vector diff = x - y;
  if (identity_) return 0.5 * diff.squaredNorm();
  return 0.5 * (diff.array().square() * b_diag_.array()).sum();
}

Vector EuclideanGeometry::apply_inverse(const Vector& s) const {
  check_dim(s, "dual vector");
  if (identity_) return s;
  return s.cwiseProduct(b_inv_);
}

Vector EuclideanGeometry::y_star(const Vector& s, double L) const {
  if (!(L > 0.0)) throw std::invalid_argument("y_star: L must be positive");
  return apply_inverse(s) / L;
}

double EuclideanGeometry::phi_value(const Vector& s, double L) const {
  if (!(L > 0.0)) throw std::invalid_argument("phi_value: L must be positive");
  return dual_norm_sq(s) / (2.0 * L);
}

SmoothnessDescriptor::SmoothnessDescriptor(std::optional<double> L, double mu) : L_d(L), mu_d(mu) {
  if (mu_d < 0.0) throw std::invalid_argument("SmoothnessDescriptor: mu_d must be nonnegative");
  if (L_d && *L_d < mu_d) {
    throw std::invalid_argument("SmoothnessDescriptor: L_d must be at least mu_d");
  }
}

}  // namespace gmm

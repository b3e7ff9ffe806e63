#pragma once

#include "gmm/geometry.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gmm {

/// A point of the standard simplex in R^m. Construction rescales the input
/// so that the entries sum to one; negative or non-finite entries are rejected.
class SimplexPoint {
public:
  explicit SimplexPoint(Vector lambda);

  static SimplexPoint uniform(Eigen::Index m);
  static SimplexPoint vertex(Eigen::Index m, Eigen::Index i);

  Eigen::Index size() const { return lambda_.size(); }
  const Vector& lambda() const { return lambda_; }
  double operator[](Eigen::Index i) const { return lambda_[i]; }

private:
  struct Unchecked {};
  SimplexPoint(Vector lambda, Unchecked) : lambda_(std::move(lambda)) {}
  friend class FrankWolfeSolver;

  Vector lambda_;
};

using MatrixRef = Eigen::Ref<const Matrix>;
using VectorRef = Eigen::Ref<const Vector>;

/// grad xi_L(lambda) = Q lambda / L - f_bar
Vector xi_gradient(const MatrixRef& Q, const VectorRef& f_bar, double L, const SimplexPoint& lambda);

/// xi_L(lambda) = <lambda, Q lambda> / (2L) - <lambda, f_bar>, without the
/// additive constant of the anti-dual objective.
double xi_value(const MatrixRef& Q, const VectorRef& f_bar, double L, const SimplexPoint& lambda);

/// max_{mu in simplex} <grad, lambda - mu> = <lambda, grad> - min_i grad_i
double fw_gap(const SimplexPoint& lambda, const VectorRef& grad);

/// Iteration budget max(ceil(18 max_i Q_ii / (L delta)), 1). Returns
/// nullopt when delta == 0 or the bound does not fit in an int64.
std::optional<std::int64_t> fw_budget(const MatrixRef& Q, double L, double delta);

struct FWOptions {
  /// Hard cap on top of the theoretical budget; mandatory when delta == 0.
  std::optional<std::int64_t> max_iterations;
  /// Steps taken before the gap test may stop the method; iterates before
  /// that are not candidates for the output. Ignored when m == 1.
  std::int64_t min_iterations = 0;
  /// Step counter used for the first step when a warm start is supplied.
  /// 0 gives the classical schedule, whose first step moves all the mass to
  /// a vertex.
  std::int64_t warm_step_offset = 0;
  /// Keep delta_L(lambda_k) for every visited iterate in FWResult::gap_trace.
  bool record_gaps = false;
};

struct FWResult {
  SimplexPoint lambda_bar;
  double gap = 0.0;
  std::int64_t iterations = 0;
  bool budget_hit = false;
  /// Steps along which the quadratic form was measurably negative
  /// (Q not PSD); the method continues regardless.
  std::int64_t negative_curvature_steps = 0;
  std::vector<double> gap_trace;
};

/// Conditional gradient method for
///   min_{lambda in simplex} <lambda, Q lambda> / (2L) - <lambda, f_bar>
/// with steps lambda_{k+1} = k/(k+2) lambda_k + 2/(k+2) e_{i_k}. Stops at the
/// first iterate (from FWOptions::min_iterations on) with gap <= delta and
/// otherwise returns the best-gap iterate after the budget. Each step costs
/// O(m): the gradient is advanced with the i_k-th column of Q and
/// resynchronized exactly every m steps.
class FrankWolfeSolver {
public:
  FWResult solve(const MatrixRef& Q, const VectorRef& f_bar, double L, double delta,
                 const std::optional<SimplexPoint>& warm_start = std::nullopt,
                 const FWOptions& options = {});

private:
  Vector lambda_;
  Vector u_;
  Vector best_;
};

inline FWResult fw_solve(const MatrixRef& Q, const VectorRef& f_bar, double L, double delta,
                         const std::optional<SimplexPoint>& warm_start = std::nullopt,
                         const FWOptions& options = {}) {
  return FrankWolfeSolver{}.solve(Q, f_bar, L, delta, warm_start, options);
}

}  // namespace gmm

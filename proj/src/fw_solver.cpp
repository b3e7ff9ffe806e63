#include "gmm/fw_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gmm {

SimplexPoint::SimplexPoint(Vector lambda) : lambda_(std::move(lambda)) {
  if (lambda_.size() < 1) throw std::invalid_argument("SimplexPoint: empty vector");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
    if (!std::isfinite(lambda_[i]) || lambda_[i] < 0.0) {
      throw std::invalid_argument("SimplexPoint: entry " + std::to_string(i) +
                                  " is negative or not finite");
    }
    sum += lambda_[i];
  }
  if (!(sum > 0.0)) throw std::invalid_argument("SimplexPoint: entries sum to zero");
  if (sum != 1.0) lambda_ /= sum;
}

SimplexPoint SimplexPoint::uniform(Eigen::Index m) {
  if (m < 1) throw std::invalid_argument("SimplexPoint::uniform: m must be positive");
  return SimplexPoint(Vector::Constant(m, 1.0 / static_cast<double>(m)), Unchecked{});
}

SimplexPoint SimplexPoint::vertex(Eigen::Index m, Eigen::Index i) {
  if (m < 1 || i < 0 || i >= m) throw std::invalid_argument("SimplexPoint::vertex: bad index");
  return SimplexPoint(Vector::Unit(m, i), Unchecked{});
}

namespace {

void check_problem(const MatrixRef& Q, const VectorRef& f_bar, double L, Eigen::Index m) {
  if (Q.rows() != Q.cols()) throw std::invalid_argument("Frank-Wolfe: Q must be square");
  if (Q.rows() != f_bar.size() || Q.rows() != m) {
    throw std::invalid_argument("Frank-Wolfe: dimension mismatch between Q, f_bar and lambda");
  }
  if (!(L > 0.0)) throw std::invalid_argument("Frank-Wolfe: L must be positive");
}

Eigen::Index argmin_lowest(const Vector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] < v[best]) best = i;
  }
  return best;
}

double gap_of(const Vector& lambda, const Vector& u) { return lambda.dot(u) - u.minCoeff(); }

}  // namespace

Vector xi_gradient(const MatrixRef& Q, const VectorRef& f_bar, double L, const SimplexPoint& lambda) {
  check_problem(Q, f_bar, L, lambda.size());
  return Q * lambda.lambda() / L - f_bar;
}

double xi_value(const MatrixRef& Q, const VectorRef& f_bar, double L, const SimplexPoint& lambda) {
  check_problem(Q, f_bar, L, lambda.size());
  const Vector& l = lambda.lambda();
  return l.dot(Q * l) / (2.0 * L) - l.dot(f_bar);
}

double fw_gap(const SimplexPoint& lambda, const VectorRef& grad) {
  if (grad.size() != lambda.size()) throw std::invalid_argument("fw_gap: dimension mismatch");
  return std::max(0.0, lambda.lambda().dot(grad) - grad.minCoeff());
}

std::optional<std::int64_t> fw_budget(const MatrixRef& Q, double L, double delta) {
  if (!(L > 0.0)) throw std::invalid_argument("fw_budget: L must be positive");
  if (delta < 0.0) throw std::invalid_argument("fw_budget: delta must be nonnegative");
  if (delta == 0.0) return std::nullopt;
  const double max_q = Q.rows() > 0 ? Q.diagonal().maxCoeff() : 0.0;
  const double n = std::ceil(18.0 * max_q / (L * delta));
  if (!std::isfinite(n) || n >= 9.0e18) return std::nullopt;
  return std::max<std::int64_t>(static_cast<std::int64_t>(n), 1);
}

FWResult FrankWolfeSolver::solve(const MatrixRef& Q, const VectorRef& f_bar, double L, double delta,
                                 const std::optional<SimplexPoint>& warm_start,
                                 const FWOptions& options) {
  const Eigen::Index m = Q.rows();
  check_problem(Q, f_bar, L, warm_start ? warm_start->size() : m);
  if (!(delta >= 0.0)) throw std::invalid_argument("Frank-Wolfe: delta must be nonnegative");

  std::optional<std::int64_t> cap = fw_budget(Q, L, delta);
  if (options.max_iterations) {
    if (*options.max_iterations < 0) throw std::invalid_argument("Frank-Wolfe: negative iteration cap");
    cap = cap ? std::min(*cap, *options.max_iterations) : *options.max_iterations;
  }
  if (!cap) {
    throw std::invalid_argument("Frank-Wolfe: delta == 0 requires an explicit iteration cap");
  }

  if (warm_start) {
    lambda_ = warm_start->lambda();
  } else {
    lambda_ = Vector::Constant(m, 1.0 / static_cast<double>(m));
  }
  u_ = Q * lambda_ / L - f_bar;

  FWResult result{SimplexPoint::uniform(m), 0.0, 0, false, 0, {}};
  double gap = gap_of(lambda_, u_);
  if (std::isnan(gap)) {
    throw std::runtime_error("Frank-Wolfe: NaN in the initial gradient");
  }
  if (options.record_gaps) result.gap_trace.push_back(gap);
  best_ = lambda_;
  double best_gap = gap;

  const double max_q = m > 0 ? Q.diagonal().maxCoeff() : 0.0;
  const double curvature_tol = 1e-12 * std::max(max_q, 1.0);
  const std::int64_t offset = warm_start ? std::max<std::int64_t>(options.warm_step_offset, 0) : 0;

  std::int64_t k = 0;
  // On a one-point simplex there is nothing to iterate.
  const std::int64_t min_it = m > 1 ? std::max<std::int64_t>(options.min_iterations, 0) : 0;
  if (min_it > 0) best_gap = std::numeric_limits<double>::infinity();
  while ((best_gap > delta || k < min_it) && k < *cap) {
    const Eigen::Index i = argmin_lowest(u_);

    // d = e_i - lambda; <d, Q d> = Q_ii - 2 (Q lambda)_i + <lambda, Q lambda>
    const double q_lambda_i = L * (u_[i] + f_bar[i]);
    const double lql = L * (lambda_.dot(u_) + lambda_.dot(f_bar));
    if (Q(i, i) - 2.0 * q_lambda_i + lql < -curvature_tol) ++result.negative_curvature_steps;

    const double t = static_cast<double>(k + offset);
    const double keep = t / (t + 2.0);
    const double step = 2.0 / (t + 2.0);
    lambda_ *= keep;
    lambda_[i] += step;
    ++k;

    if (k % m == 0) {
      u_.noalias() = Q * lambda_ / L;
      u_ -= f_bar;
    } else {
      u_ = keep * (u_ + f_bar) + (step / L) * Q.col(i) - f_bar;
    }

    gap = gap_of(lambda_, u_);
    if (std::isnan(gap)) {
      std::ostringstream os;
      os << "Frank-Wolfe: NaN in gradient at iteration " << k << " (L=" << L << ", m=" << m << ")";
      throw std::runtime_error(os.str());
    }
    if (options.record_gaps) result.gap_trace.push_back(gap);
    if (k >= min_it && gap < best_gap) {
      best_gap = gap;
      best_ = lambda_;
    }
  }

  if (!std::isfinite(best_gap)) {  // capped before min_iterations
    best_ = lambda_;
    best_gap = gap;
  }
  result.lambda_bar = SimplexPoint(best_, SimplexPoint::Unchecked{});
  result.gap = std::max(best_gap, 0.0);
  result.iterations = k;
  result.budget_hit = best_gap > delta;
  return result;
}

}  // namespace gmm

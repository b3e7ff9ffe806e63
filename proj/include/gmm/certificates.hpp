#pragma once

#include "gmm/geometry.hpp"
#include "gmm/igmm.hpp"

#include <cstdint>
#include <vector>

namespace gmm {

/// Outcome of checking an inequality family. `worst_slack` is the minimum of
/// rhs - lhs over all checked instances (negative means violated).
struct Certificate {
  bool holds = true;
  double worst_slack = 0.0;
  std::int64_t checked = 0;
  std::int64_t first_violation = -1;

  void add(double slack, double tolerance);
};

/// Progress of one step toward y:
///   beta(x+, y) <= beta(x_bar, y) + (F(y) - F(x+) + delta) / L.
/// Returns rhs - lhs.
double step_slack(const EuclideanGeometry& geom, const Vector& x_bar, const Vector& x_plus,
                  const Vector& y, double F_y, double F_plus, double L, double delta);

/// Ergodic bound for every prefix T of the run:
///   (1/T) sum_{k=1}^T F(x_k) <= F(y) + (L/T) beta(x0, y) + delta.
Certificate rate_certificate(const std::vector<IterationRecord>& history,
                             const EuclideanGeometry& geom, const Vector& x0, const Vector& y,
                             double F_y, double L, double delta, double tolerance = 1e-9);

/// Linear-rate bound under strong convexity, checked for every T up to the
/// first iterate with F(x_k) - F* < delta:
///   min_{k<=T} F(x_k) - F* <= delta + (1-g)^T mu / (1 - (1-g)^T) beta(x0, x*)
///                          <= delta + mu / (e^{gT} - 1) beta(x0, x*)
/// with g = mu / L.
Certificate strong_convexity_certificate(const std::vector<IterationRecord>& history,
                                         double F_opt, double beta0, double mu, double L,
                                         double delta, double tolerance = 1e-9);

/// Largest trial constant over the accepted steps (0 for an empty history).
double max_accepted_constant(const std::vector<IterationRecord>& history);

}  // namespace gmm

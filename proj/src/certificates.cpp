#include "gmm/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gmm {

void Certificate::add(double slack, double tolerance) {
  if (checked == 0 || slack < worst_slack) worst_slack = slack;
  if (slack < -tolerance && holds) {
    holds = false;
    first_violation = checked;
  }
  ++checked;
}

double step_slack(const EuclideanGeometry& geom, const Vector& x_bar, const Vector& x_plus,
                  const Vector& y, double F_y, double F_plus, double L, double delta) {
  if (!(L > 0.0)) throw std::invalid_argument("step_slack: L must be positive");
  const double lhs = geom.bregman_distance(x_plus, y);
  const double rhs = geom.bregman_distance(x_bar, y) + (F_y - F_plus + delta) / L;
  return rhs - lhs;
}

Certificate rate_certificate(const std::vector<IterationRecord>& history,
                             const EuclideanGeometry& geom, const Vector& x0, const Vector& y,
                             double F_y, double L, double delta, double tolerance) {
  const double beta0 = geom.bregman_distance(x0, y);
  Certificate cert;
  double sum = 0.0;
  for (std::size_t t = 0; t < history.size(); ++t) {
    sum += history[t].f_next;
    const double T = static_cast<double>(t + 1);
    cert.add(F_y + L * beta0 / T + delta - sum / T, tolerance);
  }
  return cert;
}

Certificate strong_convexity_certificate(const std::vector<IterationRecord>& history,
                                         double F_opt, double beta0, double mu, double L,
                                         double delta, double tolerance) {
  if (!(mu > 0.0) || !(L >= mu)) {
    throw std::invalid_argument("strong_convexity_certificate: need 0 < mu <= L");
  }
  const double gamma = mu / L;
  Certificate cert;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < history.size(); ++t) {
    const double residual = history[t].f_next - F_opt;
    if (residual < delta) break;  // hypothesis F(x_k) - F* >= delta no longer holds
    best = std::min(best, residual);
    const double T = static_cast<double>(t + 1);
    const double q = std::pow(1.0 - gamma, T);
    const double exact = q >= 1.0 ? std::numeric_limits<double>::infinity()
                                  : delta + q * mu / (1.0 - q) * beta0;
    const double expo = delta + mu / std::expm1(gamma * T) * beta0;
    const double simple = delta + L / T * beta0;
    cert.add(exact - best, tolerance);
    cert.add(expo - exact, tolerance);
    cert.add(simple - expo, tolerance);
  }
  return cert;
}

double max_accepted_constant(const std::vector<IterationRecord>& history) {
  double m = 0.0;
  for (const auto& r : history) m = std::max(m, r.L_trial);
  return m;
}

}  // namespace gmm

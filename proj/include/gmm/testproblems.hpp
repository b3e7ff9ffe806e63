#pragma once

#include "gmm/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

namespace gmm {

/// First-order oracle: one call returns f(x) and grad f(x) together.
struct Evaluation {
  double value = 0.0;
  Vector gradient;
};

class Objective {
public:
  virtual ~Objective() = default;
  virtual Eigen::Index dim() const = 0;
  virtual Evaluation evaluate(const Vector& x) const = 0;
};

/// Seeded source of the random draws used by the generators. The engine is
/// std::mt19937_64; uniform and Gaussian variates are derived from its raw
/// 64-bit output with fixed formulas, so problem data is identical across
/// standard library implementations.
class ProblemRng {
public:
  explicit ProblemRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Standard normal (Box-Muller, both variates used).
  double gaussian();
  /// Uniform on the Euclidean unit sphere in R^n.
  Vector unit_sphere(Eigen::Index n);

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// f(x) = mu ln( sum_j exp((<a_j, x> - b_j) / mu) ), shifted so that
/// grad f(0) = 0. The minimizer is x* = 0 and f_opt = f(0).
class LogSumExpProblem final : public Objective {
public:
  /// Rows of A are a_j (M x n).
  LogSumExpProblem(Matrix A, Vector b, double mu, std::uint64_t seed, Vector x0);

  /// Draws a_hat_j, b_j ~ U[-1, 1] (A row by row, then b), shifts each row by
  /// grad f_hat(0), and draws x0 uniformly on the unit sphere.
  static LogSumExpProblem generate(Eigen::Index n, Eigen::Index M, double mu, std::uint64_t seed);

  Eigen::Index dim() const override { return A_.cols(); }
  Eigen::Index num_terms() const { return A_.rows(); }
  Evaluation evaluate(const Vector& x) const override;

  /// Softmax weights pi_j at x.
  Vector weights(const Vector& x) const;

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  double mu() const { return mu_; }
  std::uint64_t seed() const { return seed_; }
  double f_opt() const { return f_opt_; }
  const Vector& x0() const { return x0_; }

  /// Upper bound lambda_max(A^T A) / mu on the gradient Lipschitz constant.
  double lipschitz_upper_bound() const;

  /// Text format: header `n M mu seed f_opt`, then M lines `b_j a_j1 .. a_jn`,
  /// then one line with x0. Floats use the shortest round-trip representation.
  void save(std::ostream& os) const;
  void save(const std::string& path) const;
  static LogSumExpProblem load(std::istream& is);
  static LogSumExpProblem load(const std::string& path);

private:
  Matrix A_;
  Vector b_;
  double mu_;
  std::uint64_t seed_;
  double f_opt_;
  Vector x0_;
};

/// f(x) = 1/2 sum_i sigma_i x_i^2 with L_d = max sigma, mu_d = min sigma
/// in the identity geometry.
class QuadraticFixture final : public Objective {
public:
  QuadraticFixture(Vector spectrum, std::uint64_t seed);

  Eigen::Index dim() const override { return spectrum_.size(); }
  Evaluation evaluate(const Vector& x) const override;

  const Vector& spectrum() const { return spectrum_; }
  double L_d() const { return spectrum_.maxCoeff(); }
  double mu_d() const { return spectrum_.minCoeff(); }
  SmoothnessDescriptor smoothness() const { return {L_d(), mu_d()}; }
  double f_opt() const { return 0.0; }
  Vector x_opt() const { return Vector::Zero(dim()); }
  /// Unit-sphere starting point drawn from `seed`.
  const Vector& x0() const { return x0_; }

private:
  Vector spectrum_;
  Vector x0_;
};

QuadraticFixture quadratic_fixture(Vector spectrum, std::uint64_t seed);

}  // namespace gmm

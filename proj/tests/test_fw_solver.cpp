#include <doctest.h>

#include "gmm/fw_solver.hpp"
#include "gmm/testproblems.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

using gmm::FWOptions;
using gmm::Matrix;
using gmm::SimplexPoint;
using gmm::Vector;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("SimplexPoint renormalizes and validates") {
  SimplexPoint p(vec({1, 3}));
  CHECK(p[0] == 0.25);
  CHECK(p[1] == 0.75);
  CHECK_THROWS_AS(SimplexPoint(vec({1, -1})), std::invalid_argument);
  CHECK_THROWS_AS(SimplexPoint(vec({0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(SimplexPoint(vec({1, std::nan("")})), std::invalid_argument);
  CHECK_THROWS_AS(SimplexPoint{Vector{}}, std::invalid_argument);
  CHECK(SimplexPoint::uniform(4).lambda() == Vector::Constant(4, 0.25));
  CHECK(SimplexPoint::vertex(3, 2).lambda() == vec({0, 0, 1}));
  CHECK_THROWS_AS(SimplexPoint::vertex(3, 3), std::invalid_argument);
}

TEST_CASE("xi_gradient examples") {
  Matrix Q = 2.0 * Matrix::Identity(2, 2);
  CHECK(gmm::xi_gradient(Q, vec({1, 1}), 2.0, SimplexPoint::vertex(2, 0)) == vec({0, -1}));
  const Vector fbar = vec({0.5, -2, 3});
  CHECK(gmm::xi_gradient(Matrix::Zero(3, 3), fbar, 1.5, SimplexPoint(vec({1, 2, 3}))) == -fbar);
  Matrix D = vec({4, 6, 8}).asDiagonal();
  const Vector g = gmm::xi_gradient(D, fbar, 2.0, SimplexPoint::vertex(3, 1));
  CHECK(g == vec({-0.5, 3 + 2, -3}));
  CHECK_THROWS_AS(gmm::xi_gradient(Q, vec({1, 1, 1}), 1.0, SimplexPoint::uniform(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(gmm::xi_gradient(Q, vec({1, 1}), 1.0, SimplexPoint::uniform(3)),
                  std::invalid_argument);
}

TEST_CASE("fw_gap examples") {
  CHECK(gmm::fw_gap(SimplexPoint::vertex(2, 0), vec({0, -1})) == 1.0);
  CHECK(gmm::fw_gap(SimplexPoint(vec({0.2, 0.3, 0.5})), Vector::Constant(3, 0.7)) ==
        doctest::Approx(0.0));
  CHECK(gmm::fw_gap(SimplexPoint::vertex(3, 1), vec({2, -5, 1})) == 0.0);
  CHECK(gmm::fw_gap(SimplexPoint::uniform(3), vec({2, -5, 1})) >= 0.0);
}

TEST_CASE("xi_value examples") {
  Matrix Q(2, 2);
  Q << 2, 0, 0, 2;
  CHECK(gmm::xi_value(Q, vec({1, 0}), 1.0, SimplexPoint::vertex(2, 0)) == 0.0);
  Matrix R(2, 2);
  R << 3, 1, 1, 5;
  CHECK(gmm::xi_value(R, vec({1, 2}), 2.0, SimplexPoint::vertex(2, 1)) == 5.0 / 4.0 - 2.0);
  const SimplexPoint l(vec({1, 3}));
  CHECK(gmm::xi_value(Matrix::Zero(2, 2), vec({1, 2}), 1.0, l) == -(0.25 + 1.5));
}

TEST_CASE("fw_budget") {
  Matrix Q = vec({1, 4}).asDiagonal();
  CHECK(*gmm::fw_budget(Q, 2.0, 0.5) == 72);
  CHECK(*gmm::fw_budget(Matrix::Zero(2, 2), 1.0, 0.1) == 1);
  CHECK_FALSE(gmm::fw_budget(Q, 1.0, 0.0).has_value());
  CHECK_FALSE(gmm::fw_budget(Q, 1.0, 1e-300).has_value());
  CHECK_THROWS_AS(gmm::fw_budget(Q, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(gmm::fw_budget(Q, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("solve: linear objective reaches a vertex in one step") {
  FWOptions opt;
  opt.max_iterations = 10;
  auto r = gmm::fw_solve(Matrix::Zero(2, 2), vec({0, 1}), 1.0, 0.0, std::nullopt, opt);
  CHECK(r.iterations == 1);
  CHECK(r.lambda_bar.lambda() == vec({0, 1}));
  CHECK(r.gap == 0.0);
  CHECK_FALSE(r.budget_hit);
}

TEST_CASE("solve: uniform point optimal by symmetry") {
  auto r = gmm::fw_solve(Matrix::Identity(2, 2), Vector::Zero(2), 1.0, 1e-9);
  CHECK(r.iterations == 0);
  CHECK(r.lambda_bar.lambda() == vec({0.5, 0.5}));
  CHECK(r.gap == 0.0);
}

TEST_CASE("solve: argument errors") {
  Matrix Q = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(gmm::fw_solve(Q, Vector::Zero(2), 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gmm::fw_solve(Q, Vector::Zero(2), 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(gmm::fw_solve(Q, Vector::Zero(2), 1.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(gmm::fw_solve(Q, Vector::Zero(3), 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(gmm::fw_solve(Q, Vector::Zero(2), 1.0, 0.1, SimplexPoint::uniform(3)),
                  std::invalid_argument);
  Matrix bad = Q;
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(gmm::fw_solve(bad, Vector::Zero(2), 1.0, 0.1), std::runtime_error);
}

TEST_CASE("solve: result within delta of the exact simplex-QP optimum") {
  gmm::ProblemRng rng(31);
  for (int t = 0; t < 30; ++t) {
    const Eigen::Index m = 2 + t % 7;
    const Eigen::Index rank = 1 + t % static_cast<int>(m + 2);
    const Matrix Q = gmm::testing::random_psd(m, rank, rng);
    const Vector fbar = gmm::testing::random_vector(m, rng);
    const double L = rng.uniform(0.5, 5.0);
    const double delta = 1e-6;
    auto r = gmm::fw_solve(Q, fbar, L, delta);
    auto exact = gmm::testing::simplex_qp_min(Q, fbar, L);
    const double xi = gmm::xi_value(Q, fbar, L, r.lambda_bar);
    CHECK_FALSE(r.budget_hit);
    CHECK(r.gap <= delta);
    CHECK(xi - exact.value >= -1e-9);
    CHECK(xi - exact.value <= r.gap + 1e-9);
    // The reported gap matches a fresh evaluation at the returned point.
    const double fresh = gmm::fw_gap(r.lambda_bar, gmm::xi_gradient(Q, fbar, L, r.lambda_bar));
    CHECK(std::abs(fresh - r.gap) <= 1e-12);
    CHECK(r.lambda_bar.lambda().minCoeff() >= 0.0);
    CHECK(r.lambda_bar.lambda().sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("solve: rate bound on the best gap") {
  gmm::ProblemRng rng(32);
  for (int t = 0; t < 10; ++t) {
    const Eigen::Index m = 5 + 6 * t;
    const Matrix Q = gmm::testing::random_psd(m, m / 2 + 1, rng);
    const Vector fbar = gmm::testing::random_vector(m, rng);
    const double L = 1.0;
    FWOptions opt;
    opt.max_iterations = 300;
    opt.record_gaps = true;
    auto r = gmm::fw_solve(Q, fbar, L, 0.0, std::nullopt, opt);
    const double maxq = Q.diagonal().maxCoeff();
    double best = r.gap_trace.front();
    for (std::size_t T = 1; T < r.gap_trace.size(); ++T) {
      best = std::min(best, r.gap_trace[T]);
      CHECK(best <= 18.0 * maxq / (L * static_cast<double>(T)) + 1e-12);
    }
  }
}

TEST_CASE("solve: budget and iteration cap") {
  gmm::ProblemRng rng(33);
  const Matrix Q = gmm::testing::random_psd(20, 20, rng);
  const Vector fbar = gmm::testing::random_vector(20, rng);
  FWOptions opt;
  opt.max_iterations = 3;
  auto r = gmm::fw_solve(Q, fbar, 1.0, 1e-12, std::nullopt, opt);
  CHECK(r.iterations == 3);
  CHECK(r.budget_hit);
  CHECK(r.gap > 1e-12);

  // With a loose tolerance the budget max(ceil(18 maxQ / (L delta)), 1) is tiny.
  const double maxq = Q.diagonal().maxCoeff();
  const double delta = 18.0 * maxq / 2.0;
  auto s = gmm::fw_solve(Q, fbar, 1.0, delta);
  CHECK(s.iterations <= 2);
}

TEST_CASE("solve: min_iterations forces steps and is ignored for m = 1") {
  FWOptions opt;
  opt.min_iterations = 3;
  auto r = gmm::fw_solve(Matrix::Identity(2, 2), Vector::Zero(2), 1.0, 1e-3, std::nullopt, opt);
  CHECK(r.iterations >= 3);
  CHECK(r.gap <= 1e-3);

  Matrix one(1, 1);
  one << 4.0;
  auto s = gmm::fw_solve(one, vec({1.0}), 1.0, 1e-6, std::nullopt, opt);
  CHECK(s.iterations == 0);
  CHECK(s.lambda_bar.lambda() == vec({1.0}));
}

TEST_CASE("solve: warm start is used") {
  gmm::ProblemRng rng(34);
  const Matrix Q = gmm::testing::random_psd(6, 6, rng);
  const Vector fbar = gmm::testing::random_vector(6, rng);
  auto cold = gmm::fw_solve(Q, fbar, 1.0, 1e-8);
  // Restarting from the solution stops immediately.
  auto warm = gmm::fw_solve(Q, fbar, 1.0, 1e-8, cold.lambda_bar);
  CHECK(warm.iterations == 0);
  CHECK(warm.lambda_bar.lambda() == cold.lambda_bar.lambda());

  FWOptions opt;
  opt.max_iterations = 1;
  opt.min_iterations = 1;
  opt.warm_step_offset = 10;
  auto one = gmm::fw_solve(Q, fbar, 1.0, 0.0, SimplexPoint::uniform(6), opt);
  // First step keeps 10/12 of the starting multipliers.
  CHECK(one.lambda_bar.lambda().minCoeff() == doctest::Approx(10.0 / 12.0 / 6.0));
}

TEST_CASE("solve: running gradient tracks the exact one") {
  gmm::ProblemRng rng(35);
  const Eigen::Index m = 7;
  const Matrix Q = gmm::testing::random_psd(m, m, rng);
  const Vector fbar = gmm::testing::random_vector(m, rng);
  for (std::int64_t cap : {1, 5, 6, 7, 8, 50, 333}) {
    FWOptions opt;
    opt.max_iterations = cap;
    opt.min_iterations = cap;
    auto r = gmm::fw_solve(Q, fbar, 0.7, 0.0, std::nullopt, opt);
    const Vector u = gmm::xi_gradient(Q, fbar, 0.7, r.lambda_bar);
    CHECK(std::abs(gmm::fw_gap(r.lambda_bar, u) - r.gap) <= 1e-12);
  }
}

TEST_CASE("solve: non-PSD input is counted, not rejected") {
  Matrix Q(2, 2);
  Q << 1, 3, 3, 1;
  FWOptions opt;
  opt.max_iterations = 20;
  auto r = gmm::fw_solve(Q, vec({0.0, 0.1}), 1.0, 0.0, std::nullopt, opt);
  CHECK(r.negative_curvature_steps > 0);
  CHECK(r.lambda_bar.lambda().sum() == doctest::Approx(1.0));
}

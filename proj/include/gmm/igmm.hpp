#pragma once

#include "gmm/bundle.hpp"
#include "gmm/fw_solver.hpp"
#include "gmm/geometry.hpp"
#include "gmm/testproblems.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gmm {

enum class Variant { FixedL, Adaptive };

/// Which constant multiplies beta_d(x_k, x+) in the line-search test.
/// TrialConstant uses 2^i L_k, Literal uses L_k itself.
enum class LineSearchRule { TrialConstant, Literal };

std::string_view to_string(Variant v);

struct SolverConfig {
  Eigen::Index bundle_capacity = 1;
  ReplacementStrategy strategy = ReplacementStrategy::MaxNorm;
  double delta = 5e-7;
  /// Target residual F(x_k) - F* when F* is known.
  double epsilon = 1e-6;
  /// Initial estimate (Adaptive) or the fixed constant (FixedL).
  double L0 = 1.0;
  Variant variant = Variant::Adaptive;
  std::int64_t max_outer_iterations = 100000;
  /// Reuse the previous multipliers as the Frank-Wolfe starting point.
  bool warm_start = true;
  /// Frank-Wolfe step counter used for the first step from a warm start, so
  /// that the first step keeps offset/(offset+2) of the previous multipliers.
  std::int64_t fw_warm_step_offset = 10;
  /// Frank-Wolfe steps taken before the gap test can accept the multipliers.
  /// With 0 the starting point itself may be returned, which near the
  /// optimum degenerates into an averaged-gradient step.
  std::int64_t fw_min_iterations = 1;
  LineSearchRule line_search = LineSearchRule::TrialConstant;
  /// Optional cap on each inner solve in addition to the theoretical budget.
  std::optional<std::int64_t> fw_max_iterations;
  /// Store every iterate x_k in SolverState::iterates.
  bool record_iterates = false;
  int max_doublings = 60;

  void validate() const;
};

struct IterationRecord {
  std::int64_t k = 0;
  double f_value = 0.0;  // F(x_k)
  double f_next = 0.0;   // F(x_{k+1})
  double L = 0.0;        // L_k
  double L_trial = 0.0;  // constant used for the accepted step
  int doublings = 0;     // i_k
  std::int64_t fw_iterations = 0;  // summed over all trials of this step
  double fw_gap = 0.0;             // achieved gap of the accepted step
  bool fw_budget_hit = false;
  /// Whether f(x+) <= l(x+) + L_trial beta(x_k, x+) held for the accepted step.
  bool relaxed_condition = true;
  double elapsed_s = 0.0;
};

/// Return false to stop the run after this iteration.
using Observer = std::function<bool(const IterationRecord&, const Vector& x_next)>;

enum class RunStatus { Running, Converged, MaxIterations, StoppedByObserver, Aborted };

std::string_view to_string(RunStatus s);

struct SolverState {
  SolverState(Vector x0, double L0, Bundle b) : x(std::move(x0)), L(L0), bundle(std::move(b)) {}

  Vector x;
  double f = 0.0;
  Vector grad;
  double L = 0.0;
  Bundle bundle;
  std::int64_t oracle_calls = 0;
  std::int64_t fw_steps_total = 0;
  std::int64_t outer_iters = 0;
  std::vector<IterationRecord> history;
  std::vector<Vector> iterates;  // x_0, x_1, ... when record_iterates is set
  RunStatus status = RunStatus::Running;
  std::string message;

  bool converged() const { return status == RunStatus::Converged; }
};

/// Problem handed to the outer loops.
struct ProblemView {
  const Objective& objective;
  Vector x0;
  std::optional<double> f_opt;
};

ProblemView view_of(const LogSumExpProblem& p);
ProblemView view_of(const QuadraticFixture& p);

/// x - B^{-1} g / L: the gradient step with psi == 0 and gradient g at x.
Vector gm_step(const EuclideanGeometry& geom, const Vector& x, const Vector& grad, double L);
/// Same, querying the oracle at x.
Vector gm_step(const EuclideanGeometry& geom, const Objective& oracle, const Vector& x, double L);

struct StepResult {
  Vector x_plus;
  SimplexPoint lambda_bar;
  std::int64_t fw_iterations = 0;
  double gap = 0.0;
  bool budget_hit = false;
};

/// One inexact step: approximately solves the anti-dual problem built from
/// the bundle around x_bar and returns x+ = x_bar - B^{-1} G lambda / L.
StepResult igmm_step(const Bundle& bundle, const Vector& x_bar, double L, double delta,
                     const std::optional<SimplexPoint>& warm_start = std::nullopt,
                     const FWOptions& fw_options = {});
/// Overload reusing a precomputed f_bar (it does not depend on L).
StepResult igmm_step(const Bundle& bundle, const Vector& x_bar, const Vector& f_bar, double L,
                     double delta, const std::optional<SimplexPoint>& warm_start,
                     const FWOptions& fw_options, FrankWolfeSolver& solver);

/// f(x+) <= l(x+) + L_trial beta_d(x_bar, x+)
bool accept_test(const Bundle& bundle, const Vector& x_bar, const Vector& x_plus, double f_plus,
                 double L_trial);

/// Values of the model planes at y: v_i = f_i + <g_i, y - z_i>.
Vector plane_values(const Bundle& bundle, const Vector& y);

/// Line-search IGMM: doubling search from L_k, halving after acceptance.
SolverState adaptive_run(const SolverConfig& config, const EuclideanGeometry& geom,
                         const ProblemView& problem, const Observer& observer = {});

/// IGMM with the constant L = config.L0 on every step.
SolverState fixed_run(const SolverConfig& config, const EuclideanGeometry& geom,
                      const ProblemView& problem, const Observer& observer = {});

/// Dispatches on config.variant.
SolverState run(const SolverConfig& config, const EuclideanGeometry& geom, const ProblemView& problem,
                const Observer& observer = {});

/// Plain gradient method with the same stopping rules and, for the adaptive
/// variant, the same doubling/halving line search on the linear model. It
/// does not touch the bundle machinery and serves as a reference run.
SolverState gradient_method_run(const SolverConfig& config, const EuclideanGeometry& geom,
                                const ProblemView& problem, const Observer& observer = {});

}  // namespace gmm

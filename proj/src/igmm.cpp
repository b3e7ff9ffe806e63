#include "gmm/igmm.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gmm {

std::string_view to_string(Variant v) {
  return v == Variant::FixedL ? "fixed" : "adaptive";
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Running:
      return "running";
    case RunStatus::Converged:
      return "converged";
    case RunStatus::MaxIterations:
      return "max-iterations";
    case RunStatus::StoppedByObserver:
      return "stopped";
    case RunStatus::Aborted:
      return "aborted";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (bundle_capacity < 1) throw std::invalid_argument("SolverConfig: bundle capacity must be >= 1");
  if (!(delta >= 0.0)) throw std::invalid_argument("SolverConfig: delta must be >= 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be > 0");
  if (!(L0 > 0.0) || !std::isfinite(L0)) throw std::invalid_argument("SolverConfig: L0 must be > 0");
  if (max_outer_iterations < 0) throw std::invalid_argument("SolverConfig: negative iteration limit");
  if (fw_warm_step_offset < 0 || fw_min_iterations < 0) {
    throw std::invalid_argument("SolverConfig: negative Frank-Wolfe setting");
  }
  if (max_doublings < 0) throw std::invalid_argument("SolverConfig: negative doubling limit");
  if (delta == 0.0 && !fw_max_iterations && bundle_capacity > 1) {
    throw std::invalid_argument("SolverConfig: delta == 0 requires fw_max_iterations");
  }
}

ProblemView view_of(const LogSumExpProblem& p) { return ProblemView{p, p.x0(), p.f_opt()}; }
ProblemView view_of(const QuadraticFixture& p) { return ProblemView{p, p.x0(), p.f_opt()}; }

Vector gm_step(const EuclideanGeometry& geom, const Vector& x, const Vector& grad, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("gm_step: L must be positive");
  return x - geom.y_star(grad, L);
}

Vector gm_step(const EuclideanGeometry& geom, const Objective& oracle, const Vector& x, double L) {
  return gm_step(geom, x, oracle.evaluate(x).gradient, L);
}

StepResult igmm_step(const Bundle& bundle, const Vector& x_bar, const Vector& f_bar, double L,
                     double delta, const std::optional<SimplexPoint>& warm_start,
                     const FWOptions& fw_options, FrankWolfeSolver& solver) {
  if (!(L > 0.0)) throw std::invalid_argument("igmm_step: L must be positive");
  FWResult fw = solver.solve(bundle.gram(), f_bar, L, delta, warm_start, fw_options);
  StepResult out{x_bar - bundle.geometry().y_star(bundle.combine(fw.lambda_bar.lambda()), L),
                 std::move(fw.lambda_bar), fw.iterations, fw.gap, fw.budget_hit};
  return out;
}

StepResult igmm_step(const Bundle& bundle, const Vector& x_bar, double L, double delta,
                     const std::optional<SimplexPoint>& warm_start, const FWOptions& fw_options) {
  FrankWolfeSolver solver;
  return igmm_step(bundle, x_bar, bundle.recompute_fbar(x_bar), L, delta, warm_start, fw_options,
                   solver);
}

Vector plane_values(const Bundle& bundle, const Vector& y) { return bundle.recompute_fbar(y); }

bool accept_test(const Bundle& bundle, const Vector& x_bar, const Vector& x_plus, double f_plus,
                 double L_trial) {
  return f_plus <= bundle.model_value(x_plus) +
                       L_trial * bundle.geometry().bregman_distance(x_bar, x_plus);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool finite_eval(const Evaluation& e) { return std::isfinite(e.value) && e.gradient.allFinite(); }

SolverState initial_state(const SolverConfig& config, const EuclideanGeometry& geom,
                          const ProblemView& problem, Eigen::Index capacity) {
  config.validate();
  if (problem.objective.dim() != geom.dim() || problem.x0.size() != geom.dim()) {
    throw std::invalid_argument("solver: problem and geometry dimensions differ");
  }
  SolverState state(problem.x0, config.L0, Bundle(geom, capacity, config.strategy));
  Evaluation e = problem.objective.evaluate(state.x);
  state.oracle_calls = 1;
  if (!finite_eval(e)) {
    state.status = RunStatus::Aborted;
    state.message = "non-finite objective at the starting point";
    return state;
  }
  state.f = e.value;
  state.grad = e.gradient;
  state.bundle.insert(BundleEntry::make(geom, state.x, e.value, std::move(e.gradient)));
  if (config.record_iterates) state.iterates.push_back(state.x);
  return state;
}

// Common stopping test at the top of each outer iteration.
bool should_stop(const SolverConfig& config, const ProblemView& problem, SolverState& state) {
  if (state.status != RunStatus::Running) return true;
  if (problem.f_opt && state.f - *problem.f_opt <= config.epsilon) {
    state.status = RunStatus::Converged;
    return true;
  }
  if (state.outer_iters >= config.max_outer_iterations) {
    state.status = RunStatus::MaxIterations;
    return true;
  }
  return false;
}

// Multipliers indexed by slot, carried to the next outer iteration. An
// appended slot starts with zero mass; a replaced slot keeps its mass.
std::optional<SimplexPoint> carry_multipliers(const SimplexPoint& lambda, Eigen::Index new_size) {
  if (new_size == lambda.size()) return lambda;
  Vector padded = Vector::Zero(new_size);
  padded.head(lambda.size()) = lambda.lambda();
  return SimplexPoint(std::move(padded));
}

void accept(const SolverConfig& config, const EuclideanGeometry& geom, SolverState& state,
            IterationRecord& rec, Vector x_plus, Evaluation e, const SimplexPoint& lambda,
            std::optional<SimplexPoint>& warm, const Observer& observer, Clock::time_point start) {
  state.bundle.insert(BundleEntry::make(geom, x_plus, e.value, e.gradient));
  if (config.warm_start) warm = carry_multipliers(lambda, state.bundle.size());
  state.x = std::move(x_plus);
  state.f = e.value;
  state.grad = std::move(e.gradient);
  state.fw_steps_total += rec.fw_iterations;
  ++state.outer_iters;
  rec.f_next = state.f;
  rec.elapsed_s = seconds_since(start);
  if (config.record_iterates) state.iterates.push_back(state.x);
  state.history.push_back(rec);
  if (observer && !observer(rec, state.x)) state.status = RunStatus::StoppedByObserver;
}

FWOptions fw_options_for(const SolverConfig& config) {
  FWOptions o;
  o.max_iterations = config.fw_max_iterations;
  o.warm_step_offset = config.fw_warm_step_offset;
  o.min_iterations = config.fw_min_iterations;
  return o;
}

}  // namespace

SolverState adaptive_run(const SolverConfig& config, const EuclideanGeometry& geom,
                         const ProblemView& problem, const Observer& observer) {
  const auto start = Clock::now();
  SolverState state = initial_state(config, geom, problem, config.bundle_capacity);
  const FWOptions fw_options = fw_options_for(config);
  FrankWolfeSolver solver;
  std::optional<SimplexPoint> warm;

  while (!should_stop(config, problem, state)) {
    IterationRecord rec;
    rec.k = state.outer_iters;
    rec.f_value = state.f;
    rec.L = state.L;

    const Vector f_bar = state.bundle.recompute_fbar(state.x);
    std::optional<SimplexPoint> trial_warm = warm;
    bool accepted = false;
    for (int i = 0; i <= config.max_doublings; ++i) {
      const double L_trial = std::ldexp(state.L, i);
      if (!std::isfinite(L_trial)) break;
      StepResult step = igmm_step(state.bundle, state.x, f_bar, L_trial, config.delta, trial_warm,
                                  fw_options, solver);
      rec.fw_iterations += step.fw_iterations;

      Evaluation e = problem.objective.evaluate(step.x_plus);
      ++state.oracle_calls;
      if (!finite_eval(e)) {
        state.status = RunStatus::Aborted;
        state.message = "non-finite objective at iteration " + std::to_string(rec.k);
        return state;
      }
      const double L_rhs = config.line_search == LineSearchRule::Literal ? state.L : L_trial;
      if (accept_test(state.bundle, state.x, step.x_plus, e.value, L_rhs)) {
        rec.doublings = i;
        rec.L_trial = L_trial;
        rec.fw_gap = step.gap;
        rec.fw_budget_hit = step.budget_hit;
        rec.relaxed_condition = accept_test(state.bundle, state.x, step.x_plus, e.value, L_trial);
        state.L = std::ldexp(state.L, i - 1);
        accept(config, geom, state, rec, std::move(step.x_plus), std::move(e), step.lambda_bar,
               warm, observer, start);
        accepted = true;
        break;
      }
      if (config.warm_start) trial_warm = std::move(step.lambda_bar);
    }
    if (!accepted) {
      state.status = RunStatus::Aborted;
      std::ostringstream os;
      os << "line search exceeded " << config.max_doublings << " doublings at iteration " << rec.k
         << " (L_k=" << rec.L << ")";
      state.message = os.str();
      return state;
    }
  }
  return state;
}

SolverState fixed_run(const SolverConfig& config, const EuclideanGeometry& geom,
                      const ProblemView& problem, const Observer& observer) {
  const auto start = Clock::now();
  SolverState state = initial_state(config, geom, problem, config.bundle_capacity);
  const FWOptions fw_options = fw_options_for(config);
  FrankWolfeSolver solver;
  std::optional<SimplexPoint> warm;

  while (!should_stop(config, problem, state)) {
    IterationRecord rec;
    rec.k = state.outer_iters;
    rec.f_value = state.f;
    rec.L = state.L;
    rec.L_trial = state.L;

    const Vector f_bar = state.bundle.recompute_fbar(state.x);
    StepResult step = igmm_step(state.bundle, state.x, f_bar, state.L, config.delta, warm,
                                fw_options, solver);
    rec.fw_iterations = step.fw_iterations;
    rec.fw_gap = step.gap;
    rec.fw_budget_hit = step.budget_hit;

    Evaluation e = problem.objective.evaluate(step.x_plus);
    ++state.oracle_calls;
    if (!finite_eval(e)) {
      state.status = RunStatus::Aborted;
      state.message = "non-finite objective at iteration " + std::to_string(rec.k);
      return state;
    }
    rec.relaxed_condition = accept_test(state.bundle, state.x, step.x_plus, e.value, state.L);
    accept(config, geom, state, rec, std::move(step.x_plus), std::move(e), step.lambda_bar, warm,
           observer, start);
  }
  return state;
}

SolverState run(const SolverConfig& config, const EuclideanGeometry& geom, const ProblemView& problem,
                const Observer& observer) {
  return config.variant == Variant::Adaptive ? adaptive_run(config, geom, problem, observer)
                                             : fixed_run(config, geom, problem, observer);
}

SolverState gradient_method_run(const SolverConfig& config, const EuclideanGeometry& geom,
                                const ProblemView& problem, const Observer& observer) {
  const auto start = Clock::now();
  SolverState state = initial_state(config, geom, problem, 1);
  const bool adaptive = config.variant == Variant::Adaptive;

  while (!should_stop(config, problem, state)) {
    IterationRecord rec;
    rec.k = state.outer_iters;
    rec.f_value = state.f;
    rec.L = state.L;

    bool accepted = false;
    const int max_i = adaptive ? config.max_doublings : 0;
    for (int i = 0; i <= max_i; ++i) {
      const double L_trial = std::ldexp(state.L, i);
      if (!std::isfinite(L_trial)) break;
      Vector x_plus = gm_step(geom, state.x, state.grad, L_trial);
      Evaluation e = problem.objective.evaluate(x_plus);
      ++state.oracle_calls;
      if (!finite_eval(e)) {
        state.status = RunStatus::Aborted;
        state.message = "non-finite objective at iteration " + std::to_string(rec.k);
        return state;
      }
      // Linear model at x_k, evaluated exactly as the one-plane bundle does.
      const double model = state.f + state.grad.dot(x_plus - state.x);
      const double L_rhs = config.line_search == LineSearchRule::Literal ? state.L : L_trial;
      const bool ok = e.value <= model + L_rhs * geom.bregman_distance(state.x, x_plus);
      if (ok || !adaptive) {
        rec.doublings = i;
        rec.L_trial = L_trial;
        rec.relaxed_condition = e.value <= model + L_trial * geom.bregman_distance(state.x, x_plus);
        if (adaptive) state.L = std::ldexp(state.L, i - 1);
        state.bundle.insert(BundleEntry::make(geom, x_plus, e.value, e.gradient));
        state.x = std::move(x_plus);
        state.f = e.value;
        state.grad = std::move(e.gradient);
        ++state.outer_iters;
        rec.f_next = state.f;
        rec.elapsed_s = seconds_since(start);
        if (config.record_iterates) state.iterates.push_back(state.x);
        state.history.push_back(rec);
        if (observer && !observer(rec, state.x)) state.status = RunStatus::StoppedByObserver;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      state.status = RunStatus::Aborted;
      state.message = "line search exceeded the doubling limit at iteration " + std::to_string(rec.k);
      return state;
    }
  }
  return state;
}

}  // namespace gmm

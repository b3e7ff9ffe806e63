#pragma once

#include "gmm/igmm.hpp"
#include "gmm/testproblems.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gmm::bench {

/// `gm` is the one-slot bundle; the other two select the replacement rule.
enum class Strategy { GM, Cyclic, MaxNorm };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);

enum class Format { Csv, Json };

struct ProblemParams {
  Eigen::Index n = 100;
  Eigen::Index M = 0;  // 0 selects 6 n
  double mu = 0.05;
  std::uint64_t seed = 1;
  /// Read the instance from a file instead of generating it.
  std::optional<std::string> load_path;

  Eigen::Index terms() const { return M > 0 ? M : 6 * n; }
};

struct RunConfig {
  std::string name;
  Strategy strategy = Strategy::MaxNorm;
  Eigen::Index bundle_size = 100;
  Variant variant = Variant::Adaptive;
  double epsilon = 1e-6;
  std::optional<double> delta;  // epsilon / 2 when unset
  double L0 = 1.0;
  std::int64_t max_iterations = 100000;
  bool warm_start_fw = true;
  bool literal_linesearch = false;

  double effective_delta() const { return delta ? *delta : epsilon / 2.0; }
  Eigen::Index effective_bundle_size() const { return strategy == Strategy::GM ? 1 : bundle_size; }
  SolverConfig solver_config() const;
};

struct ExperimentSpec {
  ProblemParams problem;
  std::vector<RunConfig> configs;
  int repetitions = 1;
  int workers = 1;

  void validate() const;
};

struct ReportRow {
  std::string config;
  Eigen::Index n = 0;
  Eigen::Index M = 0;
  double mu = 0.0;
  Eigen::Index m = 0;
  std::string strategy;
  std::int64_t iter = 0;
  std::int64_t nfunc = 0;
  double fw_per_iter = 0.0;
  double time_s = 0.0;   // wall clock, not reproducible
  double it_ms = 0.0;    // wall clock, not reproducible
  double residual = 0.0;
  bool converged = false;
  /// Run status and diagnostics; not part of the serialized columns.
  std::string status;
};

struct RunReport {
  std::vector<ReportRow> rows;

  bool all_converged() const;
};

/// Runs every configuration `repetitions` times against the same instance.
/// Rows follow spec order (config-major, then repetition) whatever the
/// scheduling. A solver exception marks the row failed and the run goes on.
RunReport run_experiment(const ExperimentSpec& spec);

/// Runs one configuration on an already built problem.
ReportRow run_config(const RunConfig& config, const LogSumExpProblem& problem);

inline constexpr std::string_view kCsvHeader =
    "config,n,M,mu,m,strategy,iter,nfunc,fw_per_iter,time_s,it_ms,residual,converged";

std::string emit_report(const RunReport& report, Format format);
void write_report(const RunReport& report, Format format, const std::string& path);

RunReport parse_report(std::string_view text, Format format);

/// The deterministic columns only, one line per row; equal across repeated
/// runs with the same seed and flags.
std::string counter_columns(const RunReport& report);

}  // namespace gmm::bench

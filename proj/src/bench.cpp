#include "gmm/bench.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <thread>

namespace gmm::bench {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::GM:
      return "gm";
    case Strategy::Cyclic:
      return "cyclic";
    case Strategy::MaxNorm:
      return "max-norm";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "gm") return Strategy::GM;
  if (s == "cyclic") return Strategy::Cyclic;
  if (s == "max-norm") return Strategy::MaxNorm;
  throw std::invalid_argument("unknown strategy '" + std::string(s) + "'");
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig c;
  c.bundle_capacity = effective_bundle_size();
  c.strategy = strategy == Strategy::Cyclic ? ReplacementStrategy::Cyclic : ReplacementStrategy::MaxNorm;
  c.delta = effective_delta();
  c.epsilon = epsilon;
  c.L0 = L0;
  c.variant = variant;
  c.max_outer_iterations = max_iterations;
  c.warm_start = warm_start_fw;
  c.line_search = literal_linesearch ? LineSearchRule::Literal : LineSearchRule::TrialConstant;
  return c;
}

void ExperimentSpec::validate() const {
  if (problem.n < 1) throw std::invalid_argument("experiment: n must be >= 1");
  if (problem.M < 0) throw std::invalid_argument("experiment: M must be >= 0 (0 selects 6 n)");
  if (!(problem.mu > 0.0)) throw std::invalid_argument("experiment: mu must be > 0");
  if (repetitions < 1) throw std::invalid_argument("experiment: repetitions must be >= 1");
  if (workers < 1) throw std::invalid_argument("experiment: workers must be >= 1");
  for (const auto& c : configs) {
    if (!(c.epsilon > 0.0)) throw std::invalid_argument("experiment: epsilon must be > 0");
    if (!(c.effective_delta() >= 0.0)) throw std::invalid_argument("experiment: delta must be >= 0");
    if (c.bundle_size < 1) throw std::invalid_argument("experiment: bundle size must be >= 1");
    c.solver_config().validate();
  }
}

bool RunReport::all_converged() const {
  for (const auto& r : rows) {
    if (!r.converged) return false;
  }
  return true;
}

ReportRow run_config(const RunConfig& config, const LogSumExpProblem& problem) {
  ReportRow row;
  row.config = config.name;
  row.n = problem.dim();
  row.M = problem.num_terms();
  row.mu = problem.mu();
  row.m = config.effective_bundle_size();
  row.strategy = std::string(to_string(config.strategy));
  try {
    const SolverState state = run(config.solver_config(), EuclideanGeometry(problem.dim()),
                                  view_of(problem));
    row.iter = state.outer_iters;
    row.nfunc = state.oracle_calls;
    row.fw_per_iter = state.outer_iters > 0 ? static_cast<double>(state.fw_steps_total) /
                                                  static_cast<double>(state.outer_iters)
                                            : 0.0;
    row.time_s = state.history.empty() ? 0.0 : state.history.back().elapsed_s;
    row.it_ms = state.outer_iters > 0 ? 1e3 * row.time_s / static_cast<double>(state.outer_iters) : 0.0;
    row.residual = state.f - problem.f_opt();
    row.converged = state.converged();
    row.status = std::string(to_string(state.status));
    if (!state.message.empty()) row.status += ": " + state.message;
  } catch (const std::exception& e) {
    row.converged = false;
    row.status = std::string("failed: ") + e.what();
  }
  return row;
}

RunReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t reps = static_cast<std::size_t>(spec.repetitions);
  const std::size_t jobs = spec.configs.size() * reps;
  RunReport report;
  report.rows.resize(jobs);

  auto make_problem = [&spec]() {
    if (spec.problem.load_path) return LogSumExpProblem::load(*spec.problem.load_path);
    return LogSumExpProblem::generate(spec.problem.n, spec.problem.terms(), spec.problem.mu,
                                      spec.problem.seed);
  };

  // Each job rebuilds the instance from the same seed, so every config sees
  // identical data and workers share nothing mutable.
  auto do_job = [&](std::size_t j) {
    const RunConfig& config = spec.configs[j / reps];
    try {
      const LogSumExpProblem problem = make_problem();
      report.rows[j] = run_config(config, problem);
    } catch (const std::exception& e) {
      ReportRow row;
      row.config = config.name;
      row.n = spec.problem.n;
      row.M = spec.problem.terms();
      row.mu = spec.problem.mu;
      row.m = config.effective_bundle_size();
      row.strategy = std::string(to_string(config.strategy));
      row.status = std::string("failed: ") + e.what();
      report.rows[j] = std::move(row);
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(spec.workers), jobs);
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) do_job(j);
    return report;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t j;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= jobs) return;
          j = next++;
        }
        do_job(j);
      }
    });
  }
  for (auto& t : pool) t.join();
  return report;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("failed to format a double");
  return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("report: bad number '" + std::string(s) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("report: bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void check_name(const std::string& name) {
  if (name.find_first_of(",\n\r\"") != std::string::npos) {
    throw std::invalid_argument("report: config name '" + name + "' cannot be written as CSV");
  }
}

nlohmann::json to_json(const ReportRow& r) {
  return nlohmann::json{{"config", r.config},       {"n", r.n},
                        {"M", r.M},                 {"mu", r.mu},
                        {"m", r.m},                 {"strategy", r.strategy},
                        {"iter", r.iter},           {"nfunc", r.nfunc},
                        {"fw_per_iter", r.fw_per_iter}, {"time_s", r.time_s},
                        {"it_ms", r.it_ms},         {"residual", r.residual},
                        {"converged", r.converged}};
}

}  // namespace

std::string emit_report(const RunReport& report, Format format) {
  if (format == Format::Json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) rows.push_back(to_json(r));
    return nlohmann::json{{"rows", rows}}.dump(2) + "\n";
  }
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : report.rows) {
    check_name(r.config);
    out += r.config + ',' + std::to_string(r.n) + ',' + std::to_string(r.M) + ',' + fmt_double(r.mu) +
           ',' + std::to_string(r.m) + ',' + r.strategy + ',' + std::to_string(r.iter) + ',' +
           std::to_string(r.nfunc) + ',' + fmt_double(r.fw_per_iter) + ',' + fmt_double(r.time_s) +
           ',' + fmt_double(r.it_ms) + ',' + fmt_double(r.residual) + ',' +
           (r.converged ? "true" : "false") + '\n';
  }
  return out;
}

void write_report(const RunReport& report, Format format, const std::string& path) {
  const std::string text = emit_report(report, format);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << text;
  os.flush();
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

RunReport parse_report(std::string_view text, Format format) {
  RunReport report;
  if (format == Format::Json) {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& j : doc.at("rows")) {
      ReportRow r;
      r.config = j.at("config").get<std::string>();
      r.n = j.at("n").get<Eigen::Index>();
      r.M = j.at("M").get<Eigen::Index>();
      r.mu = j.at("mu").get<double>();
      r.m = j.at("m").get<Eigen::Index>();
      r.strategy = j.at("strategy").get<std::string>();
      r.iter = j.at("iter").get<std::int64_t>();
      r.nfunc = j.at("nfunc").get<std::int64_t>();
      r.fw_per_iter = j.at("fw_per_iter").get<double>();
      r.time_s = j.at("time_s").get<double>();
      r.it_ms = j.at("it_ms").get<double>();
      r.residual = j.at("residual").get<double>();
      r.converged = j.at("converged").get<bool>();
      report.rows.push_back(std::move(r));
    }
    return report;
  }

  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw std::runtime_error("report: unexpected CSV header");
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 13) throw std::runtime_error("report: expected 13 columns");
    ReportRow r;
    r.config = std::string(f[0]);
    r.n = parse_int(f[1]);
    r.M = parse_int(f[2]);
    r.mu = parse_double(f[3]);
    r.m = parse_int(f[4]);
    r.strategy = std::string(f[5]);
    r.iter = parse_int(f[6]);
    r.nfunc = parse_int(f[7]);
    r.fw_per_iter = parse_double(f[8]);
    r.time_s = parse_double(f[9]);
    r.it_ms = parse_double(f[10]);
    r.residual = parse_double(f[11]);
    if (f[12] != "true" && f[12] != "false") throw std::runtime_error("report: bad converged flag");
    r.converged = f[12] == "true";
    report.rows.push_back(std::move(r));
  }
  if (header) throw std::runtime_error("report: missing CSV header");
  return report;
}

std::string counter_columns(const RunReport& report) {
  std::ostringstream os;
  for (const auto& r : report.rows) {
    os << r.config << ',' << r.n << ',' << r.M << ',' << fmt_double(r.mu) << ',' << r.m << ','
       << r.strategy << ',' << r.iter << ',' << r.nfunc << ',' << fmt_double(r.fw_per_iter) << ','
       << fmt_double(r.residual) << ',' << (r.converged ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace gmm::bench

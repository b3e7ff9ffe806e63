#include "gmm/testproblems.hpp"

#include <Eigen/Eigenvalues>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace gmm {

double ProblemRng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double ProblemRng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 == 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Vector ProblemRng::unit_sphere(Eigen::Index n) {
  Vector v(n);
  double norm = 0.0;
  while (norm == 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gaussian();
    norm = v.norm();
  }
  return v / norm;
}

namespace {

// Softmax of r with max subtraction; returns ln sum exp(r).
double log_sum_exp(const Vector& r, Vector& weights) {
  const double r_max = r.maxCoeff();
  weights = (r.array() - r_max).exp().matrix();
  const double sum = weights.sum();
  weights /= sum;
  return r_max + std::log(sum);
}

void check_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite input");
}

}  // namespace

LogSumExpProblem::LogSumExpProblem(Matrix A, Vector b, double mu, std::uint64_t seed, Vector x0)
    : A_(std::move(A)), b_(std::move(b)), mu_(mu), seed_(seed), x0_(std::move(x0)) {
  if (!(mu_ > 0.0)) throw std::invalid_argument("LogSumExpProblem: mu must be positive");
  if (A_.rows() < 1 || A_.cols() < 1) throw std::invalid_argument("LogSumExpProblem: empty data");
  if (b_.size() != A_.rows()) throw std::invalid_argument("LogSumExpProblem: b has wrong length");
  if (x0_.size() != A_.cols()) throw std::invalid_argument("LogSumExpProblem: x0 has wrong length");
  f_opt_ = evaluate(Vector::Zero(A_.cols())).value;
}

LogSumExpProblem LogSumExpProblem::generate(Eigen::Index n, Eigen::Index M, double mu,
                                            std::uint64_t seed) {
  if (n < 1 || M < 1) throw std::invalid_argument("LogSumExpProblem::generate: n and M must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("LogSumExpProblem::generate: mu must be positive");

  ProblemRng rng(seed);
  Matrix A(M, n);
  for (Eigen::Index j = 0; j < M; ++j) {
    do {
      for (Eigen::Index i = 0; i < n; ++i) A(j, i) = rng.uniform(-1.0, 1.0);
    } while (A.row(j).isZero(0.0));
  }
  Vector b(M);
  for (Eigen::Index j = 0; j < M; ++j) b[j] = rng.uniform(-1.0, 1.0);

  // grad f_hat(0) = A_hat^T softmax(-b / mu)
  Vector pi;
  log_sum_exp(Vector(-b / mu), pi);
  const Vector g = A.transpose() * pi;
  A.rowwise() -= g.transpose();

  Vector x0 = rng.unit_sphere(n);
  LogSumExpProblem problem(std::move(A), std::move(b), mu, seed, std::move(x0));

  const Vector g0 = problem.evaluate(Vector::Zero(n)).gradient;
  if (g0.lpNorm<Eigen::Infinity>() > 1e-10) {
    throw std::runtime_error("LogSumExpProblem::generate: shifted gradient at 0 is not zero");
  }
  return problem;
}

Vector LogSumExpProblem::weights(const Vector& x) const {
  if (x.size() != dim()) throw std::invalid_argument("LogSumExpProblem: dimension mismatch");
  check_finite(x, "LogSumExpProblem");
  const Vector r = (A_ * x - b_) / mu_;
  Vector pi;
  log_sum_exp(r, pi);
  return pi;
}

Evaluation LogSumExpProblem::evaluate(const Vector& x) const {
  if (x.size() != dim()) throw std::invalid_argument("LogSumExpProblem: dimension mismatch");
  check_finite(x, "LogSumExpProblem");
  const Vector r = (A_ * x - b_) / mu_;
  Vector pi;
  Evaluation out;
  out.value = mu_ * log_sum_exp(r, pi);
  out.gradient.noalias() = A_.transpose() * pi;
  return out;
}

double LogSumExpProblem::lipschitz_upper_bound() const {
  const Matrix AtA = A_.transpose() * A_;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(AtA, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff() / mu_;
}

namespace {

void put(std::ostream& os, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("failed to format a double");
  os.write(buf, ptr - buf);
}

double get(std::istream& is) {
  std::string token;
  if (!(is >> token)) throw std::runtime_error("problem file: unexpected end of input");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw std::runtime_error("problem file: bad number '" + token + "'");
  }
  return v;
}

}  // namespace

void LogSumExpProblem::save(std::ostream& os) const {
  os << dim() << ' ' << num_terms() << ' ';
  put(os, mu_);
  os << ' ' << seed_ << ' ';
  put(os, f_opt_);
  os << '\n';
  for (Eigen::Index j = 0; j < num_terms(); ++j) {
    put(os, b_[j]);
    for (Eigen::Index i = 0; i < dim(); ++i) {
      os << ' ';
      put(os, A_(j, i));
    }
    os << '\n';
  }
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (i) os << ' ';
    put(os, x0_[i]);
  }
  os << '\n';
}

void LogSumExpProblem::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  save(os);
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

LogSumExpProblem LogSumExpProblem::load(std::istream& is) {
  long long n = 0, M = 0;
  std::uint64_t seed = 0;
  if (!(is >> n >> M)) throw std::runtime_error("problem file: bad header");
  const double mu = get(is);
  if (!(is >> seed)) throw std::runtime_error("problem file: bad seed");
  get(is);  // f_opt is recomputed from the data
  if (n < 1 || M < 1) throw std::runtime_error("problem file: bad dimensions");
  Matrix A(M, n);
  Vector b(M);
  for (long long j = 0; j < M; ++j) {
    b[j] = get(is);
    for (long long i = 0; i < n; ++i) A(j, i) = get(is);
  }
  Vector x0(n);
  for (long long i = 0; i < n; ++i) x0[i] = get(is);
  return LogSumExpProblem(std::move(A), std::move(b), mu, seed, std::move(x0));
}

LogSumExpProblem LogSumExpProblem::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
  try {
    return load(is);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

QuadraticFixture::QuadraticFixture(Vector spectrum, std::uint64_t seed)
    : spectrum_(std::move(spectrum)) {
  if (spectrum_.size() < 1) throw std::invalid_argument("QuadraticFixture: empty spectrum");
  if (!(spectrum_.array() > 0.0).all() || !spectrum_.allFinite()) {
    throw std::invalid_argument("QuadraticFixture: spectrum must be positive");
  }
  ProblemRng rng(seed);
  x0_ = rng.unit_sphere(spectrum_.size());
}

Evaluation QuadraticFixture::evaluate(const Vector& x) const {
  if (x.size() != dim()) throw std::invalid_argument("QuadraticFixture: dimension mismatch");
  check_finite(x, "QuadraticFixture");
  Evaluation out;
  out.gradient = spectrum_.cwiseProduct(x);
  out.value = 0.5 * x.dot(out.gradient);
  return out;
}

QuadraticFixture quadratic_fixture(Vector spectrum, std::uint64_t seed) {
  return QuadraticFixture(std::move(spectrum), seed);
}

}  // namespace gmm

#include "tvtrack/harness.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "tvtrack/corrector.hpp"
#include "tvtrack/predictor.hpp"

namespace tvtrack {

MethodSpec MethodSpec::tvsgd() {
  MethodSpec m;
  m.kind = Kind::Tvsgd;
  m.p = 0;
  m.c_max = 0;
  m.beta = BetaPolicy::sgd_default();
  return m;
}

MethodSpec MethodSpec::sharp_poly(int p) {
  if (p < 1) throw std::invalid_argument("method: basis size must be positive");
  MethodSpec m;
  m.kind = Kind::SharpPoly;
  m.p = p;
  m.n_policy = NPolicy::automatic(p);
  m.beta = BetaPolicy::inverse_l();
  return m;
}

MethodSpec MethodSpec::sharp_online() {
  MethodSpec m;
  m.kind = Kind::SharpOnline;
  m.p = 0;
  m.n_policy = NPolicy::reciprocal();
  m.beta = BetaPolicy::inverse_l();
  return m;
}

std::string MethodSpec::id() const {
  switch (kind) {
    case Kind::Tvsgd:
      return "tvsgd";
    case Kind::SharpPoly:
      return "sharp:p=" + std::to_string(p);
    case Kind::SharpOnline:
      return "sharp:online";
  }
  return "unknown";
}

int MethodSpec::resolve_n(double h) const {
  if (kind == Kind::Tvsgd) return 0;
  if (h <= 0.0) throw std::invalid_argument("method: h must be positive");
  const int lower = std::max(kind == Kind::SharpPoly ? p : 2, 2);
  constexpr int kUpper = 100000;

  long n = 0;
  switch (n_policy.kind) {
    case NPolicy::Kind::Auto: {
      if (n_policy.q < 1) throw std::invalid_argument("method: auto policy needs q >= 1");
      const double e = 2.0 * n_policy.q / (2.0 * n_policy.q + 1.0);
      n = static_cast<long>(std::floor(std::pow(h, -e)));
      break;
    }
    case NPolicy::Kind::Reciprocal:
      n = static_cast<long>(std::floor(1.0 / h));
      break;
    case NPolicy::Kind::Fixed:
      if (n_policy.n < lower)
        throw std::invalid_argument("method: fixed n below the minimum for this method");
      return n_policy.n;
  }
  n = std::max<long>(n, lower);
  n = std::min<long>(n, kUpper);
  return static_cast<int>(n);
}

double MethodSpec::resolve_beta(double h, double L) const {
  switch (beta.kind) {
    case BetaPolicy::Kind::InverseL:
      return 1.0 / L;
    case BetaPolicy::Kind::SgdDefault:
      return std::pow(h, 2.0 / 3.0);
    case BetaPolicy::Kind::Fixed:
      if (beta.value <= 0.0) throw std::invalid_argument("method: beta must be positive");
      return beta.value;
  }
  throw std::logic_error("method: unknown beta policy");
}

namespace {

long round_count(double h, double t_end) {
  if (h <= 0.0 || t_end <= 0.0)
    throw std::invalid_argument("run: h and t_end must be positive");
  return static_cast<long>(std::floor(t_end / h + 1e-9));
}

Eigen::VectorXd starting_point(const LassoProblem& problem, const Eigen::VectorXd& x0) {
  if (x0.size() == 0) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(problem.d);
    d(0) = 2.0;  // default start used throughout the experiments
    return d;
  }
  if (x0.size() != problem.d) throw std::invalid_argument("run: x0 dimension mismatch");
  return x0;
}

}  // namespace

RunRecord run_sharp(const LassoProblem& problem, const MethodSpec& method, double h,
                    double t_end, std::uint64_t seed, int batch_size,
                    const Eigen::VectorXd& x0) {
  if (method.kind == MethodSpec::Kind::Tvsgd)
    throw std::invalid_argument("run: use run_tvsgd for the baseline");
  if (batch_size < 1) throw std::invalid_argument("run: batch size must be positive");

  const long K = round_count(h, t_end);
  const int n = method.resolve_n(h);
  const double beta = method.resolve_beta(h, problem.L);
  const bool rolling = method.kind == MethodSpec::Kind::SharpPoly && method.p == 2;
  const Eigen::VectorXd start = starting_point(problem, x0);

  CoefficientVector alpha;
  OnlineCoeffState online;
  if (method.kind == MethodSpec::Kind::SharpPoly) {
    if (n < method.p) throw std::invalid_argument("run: resolved n < p");
    alpha = rolling ? linear_coefficients(n)
                    : regression_coefficients(BasisSpec::polynomial(method.p), n);
  } else {
    online = OnlineCoeffState::uniform(n, method.D, method.eta0, method.decay_exponent);
    alpha = online.alpha;
  }

  RunRecord record;
  record.method_id = method.id();
  record.h = h;
  record.t_end = t_end;
  record.seed = seed;
  record.lambda = problem.lambda;
  record.n = n;
  record.p = method.kind == MethodSpec::Kind::SharpPoly ? method.p : 0;
  record.c_max = method.c_max;
  record.beta = beta;
  record.uses_prediction_metric = true;
  record.rows.reserve(static_cast<std::size_t>(K));

  // conservative tracking-stability check, reported but not enforced
  const double gamma = contraction_factor(problem.mu, problem.L, beta, method.c_max);
  record.contraction_warning = gamma * norm_profile(alpha).l1 >= 1.0;

  HistoryBuffer buffer = rolling ? HistoryBuffer::rolling(n, start)
                                 : HistoryBuffer(n, start);
  const ProxSpec psi =
      problem.lambda > 0.0 ? ProxSpec::l1(problem.lambda) : ProxSpec::zero();
  Rng rng(Rng::derive(seed, 1));

  const auto t0 = std::chrono::steady_clock::now();
  for (long k = 1; k <= K; ++k) {
    const double t = static_cast<double>(k) * h;

    Eigen::VectorXd prediction = rolling
                                     ? predict_linear_rolling(buffer, n)
                                     : predict(buffer, method.kind == MethodSpec::Kind::SharpOnline
                                                           ? online.alpha
                                                           : alpha);

    auto batch = sample_batch(problem, t, batch_size, rng);
    Eigen::VectorXd ybar = batch_mean(batch);

    if (method.kind == MethodSpec::Kind::SharpOnline) {
      Eigen::VectorXd grad_loss =
          problem.A.transpose() * (problem.A * prediction - ybar);
      ++record.grad_calls;
      ogd_update(online, buffer.history_matrix(n), grad_loss, psi.subgradient(prediction));
    }

    GradientOracle oracle{
        [&problem, &ybar, &record](const Eigen::VectorXd& x) {
          ++record.grad_calls;
          return Eigen::VectorXd(problem.A.transpose() * (problem.A * x - ybar));
        },
        problem.mu, problem.L};
    Eigen::VectorXd corrected = prox_gradient(oracle, psi, prediction, beta, method.c_max);

    StepRow row;
    row.k = k;
    row.t = t;
    row.reference = reference_optimum(problem, t);
    row.err_pred = (prediction - row.reference).norm();
    row.err_corr = (corrected - row.reference).norm();
    row.prediction = std::move(prediction);
    buffer.push(corrected);
    row.corrected = std::move(corrected);
    record.rows.push_back(std::move(row));
  }
  const auto t1 = std::chrono::steady_clock::now();

  record.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  record.grad_calls_per_round = K > 0 ? static_cast<double>(record.grad_calls) / K : 0.0;
  return record;
}

RunRecord run_tvsgd(const LassoProblem& problem, const MethodSpec& method, double h,
                    double t_end, std::uint64_t seed, int batch_size,
                    const Eigen::VectorXd& x0) {
  if (method.kind != MethodSpec::Kind::Tvsgd)
    throw std::invalid_argument("run: method spec is not the baseline");
  if (batch_size < 1) throw std::invalid_argument("run: batch size must be positive");

  const long K = round_count(h, t_end);
  const double beta = method.resolve_beta(h, problem.L);
  if (beta > 1.0 / problem.L)
    throw std::invalid_argument("run: step size exceeds 1/L, decrease h or override beta");

  RunRecord record;
  record.method_id = method.id();
  record.h = h;
  record.t_end = t_end;
  record.seed = seed;
  record.lambda = problem.lambda;
  record.beta = beta;
  record.uses_prediction_metric = false;
  record.rows.reserve(static_cast<std::size_t>(K));

  const ProxSpec psi =
      problem.lambda > 0.0 ? ProxSpec::l1(problem.lambda) : ProxSpec::zero();
  Rng rng(Rng::derive(seed, 1));
  Eigen::VectorXd x = starting_point(problem, x0);

  const auto t0 = std::chrono::steady_clock::now();
  for (long k = 1; k <= K; ++k) {
    const double t = static_cast<double>(k) * h;
    auto batch = sample_batch(problem, t, batch_size, rng);
    Eigen::VectorXd ybar = batch_mean(batch);

    GradientOracle oracle{
        [&problem, &ybar, &record](const Eigen::VectorXd& x_in) {
          ++record.grad_calls;
          return Eigen::VectorXd(problem.A.transpose() * (problem.A * x_in - ybar));
        },
        problem.mu, problem.L};

    StepRow row;
    row.k = k;
    row.t = t;
    row.prediction = x;  // the warm start of this round is the previous iterate
    x = prox_gradient(oracle, psi, std::move(x), beta, 1);
    row.corrected = x;
    row.reference = reference_optimum(problem, t);
    row.err_pred = (row.prediction - row.reference).norm();
    row.err_corr = (row.corrected - row.reference).norm();
    record.rows.push_back(std::move(row));
  }
  const auto t1 = std::chrono::steady_clock::now();

  record.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  record.grad_calls_per_round = K > 0 ? static_cast<double>(record.grad_calls) / K : 0.0;
  return record;
}

double windowed_error(const RunRecord& record, double t_lo, double t_hi) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("window: need t_lo < t_hi");
  double acc = 0.0;
  long count = 0;
  for (const StepRow& row : record.rows) {
    if (row.t >= t_lo && row.t < t_hi) {
      acc += record.uses_prediction_metric ? row.err_pred : row.err_corr;
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("window: no rows fall inside the window");
  return acc / static_cast<double>(count);
}

double fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("rate: need at least 3 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [h, err] : points) {
    if (h <= 0.0 || err <= 0.0)
      throw std::invalid_argument("rate: h and err must be positive");
    const double x = std::log(h), y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(points.size());
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-12 * std::max(1.0, sxx))
    throw std::invalid_argument("rate: h values are degenerate");
  return (m * sxy - sx * sy) / denom;
}

}  // namespace tvtrack

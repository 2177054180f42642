#include "tvtrack/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tvtrack/corrector.hpp"

namespace tvtrack {

TrajectorySpec TrajectorySpec::sinusoid(int d) {
  if (d < 1) throw std::invalid_argument("trajectory: need d >= 1");
  TrajectorySpec spec;
  spec.kind = Kind::Sinusoid;
  spec.d = d;
  return spec;
}

TrajectorySpec TrajectorySpec::affine(const Eigen::VectorXd& base,
                                      const Eigen::VectorXd& slope) {
  if (base.size() == 0 || base.size() != slope.size())
    throw std::invalid_argument("trajectory: base and slope sizes must match");
  TrajectorySpec spec;
  spec.kind = Kind::Affine;
  spec.d = static_cast<int>(base.size());
  spec.base = base;
  spec.slope = slope;
  return spec;
}

TrajectorySpec TrajectorySpec::constant(const Eigen::VectorXd& value) {
  if (value.size() == 0) throw std::invalid_argument("trajectory: empty value");
  TrajectorySpec spec;
  spec.kind = Kind::Constant;
  spec.d = static_cast<int>(value.size());
  spec.base = value;
  return spec;
}

Eigen::VectorXd trajectory_value(const TrajectorySpec& spec, double t) {
  switch (spec.kind) {
    case TrajectorySpec::Kind::Sinusoid: {
      Eigen::VectorXd x(spec.d);
      for (int i = 0; i < spec.d; ++i) {
        double phase = 2.0 * std::numbers::pi * i / spec.d;
        x(i) = std::sin(t + phase) + 0.5 * std::sin(2.0 * t + phase);
      }
      return x;
    }
    case TrajectorySpec::Kind::Affine:
      return spec.base + t * spec.slope;
    case TrajectorySpec::Kind::Constant:
      return spec.base;
  }
  throw std::logic_error("trajectory: unknown kind");
}

Eigen::MatrixXd generate_matrix(int d_y, int d, double mu, double L, std::uint64_t seed) {
  if (d < 1 || d_y < d) throw std::invalid_argument("problem: need d_y >= d >= 1");
  if (!(mu > 0.0) || !(L >= mu)) throw std::invalid_argument("problem: need 0 < mu <= L");
  if (d == 1 && mu != L)
    throw std::invalid_argument("problem: d = 1 admits a single singular value, set mu = L");

  Rng rng(seed);

  auto orthonormal = [](Eigen::MatrixXd g) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() *
                        Eigen::MatrixXd::Identity(g.rows(), g.cols());
    // fix the QR sign ambiguity so the factor is a canonical function of g
    Eigen::MatrixXd r = qr.matrixQR().topRows(g.cols());
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
  };

  Eigen::MatrixXd U = orthonormal(rng.normal_matrix(d_y, d));
  Eigen::MatrixXd V = orthonormal(rng.normal_matrix(d, d));

  std::vector<double> sigma(static_cast<std::size_t>(d));
  sigma.front() = std::sqrt(L);
  if (d > 1) sigma.back() = std::sqrt(mu);
  const double lo = 0.5 * std::log(mu), hi = 0.5 * std::log(L);
  for (int i = 1; i + 1 < d; ++i) sigma[static_cast<std::size_t>(i)] = std::exp(rng.uniform(lo, hi));
  std::sort(sigma.begin(), sigma.end(), std::greater<double>());

  Eigen::VectorXd s = Eigen::Map<Eigen::VectorXd>(sigma.data(), d);
  return U * s.asDiagonal() * V.transpose();
}

LassoProblem lasso_from_matrix(Eigen::MatrixXd A, double lambda, TrajectorySpec trajectory,
                               double noise_scale) {
  if (A.rows() < A.cols() || A.cols() < 1)
    throw std::invalid_argument("problem: need d_y >= d >= 1");
  if (lambda < 0.0) throw std::invalid_argument("problem: lambda must be nonnegative");
  if (trajectory.d != A.cols())
    throw std::invalid_argument("problem: trajectory dimension must equal d");
  if (noise_scale < 0.0) throw std::invalid_argument("problem: noise scale must be nonnegative");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const double smin = svd.singularValues()(A.cols() - 1);
  const double smax = svd.singularValues()(0);
  if (smin <= 0.0) throw std::invalid_argument("problem: A must have full column rank");

  LassoProblem problem;
  problem.d = static_cast<int>(A.cols());
  problem.d_y = static_cast<int>(A.rows());
  problem.lambda = lambda;
  problem.mu = smin * smin;
  problem.L = smax * smax;
  problem.sigma1_sq = A.squaredNorm();
  problem.trajectory = std::move(trajectory);
  problem.noise_scale = noise_scale;
  problem.A = std::move(A);
  return problem;
}

LassoProblem make_lasso(int d_y, int d, double mu, double L, double lambda,
                        std::uint64_t seed, double noise_scale) {
  return lasso_from_matrix(generate_matrix(d_y, d, mu, L, seed), lambda,
                           TrajectorySpec::sinusoid(d), noise_scale);
}

std::vector<Eigen::VectorXd> sample_batch(const LassoProblem& problem, double t, int b,
                                          Rng& rng) {
  if (b < 1) throw std::invalid_argument("problem: batch size must be positive");
  Eigen::VectorXd mean = problem.A * trajectory_value(problem.trajectory, t);
  std::vector<Eigen::VectorXd> batch;
  batch.reserve(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i)
    batch.push_back(mean + problem.noise_scale * rng.normal_vector(problem.d_y));
  return batch;
}

Eigen::VectorXd batch_mean(const std::vector<Eigen::VectorXd>& batch) {
  if (batch.empty()) throw std::invalid_argument("problem: empty batch");
  Eigen::VectorXd mean = batch.front();
  for (std::size_t i = 1; i < batch.size(); ++i) mean += batch[i];
  return mean / static_cast<double>(batch.size());
}

Eigen::VectorXd stochastic_gradient(const LassoProblem& problem, const Eigen::VectorXd& x,
                                    const std::vector<Eigen::VectorXd>& batch) {
  if (x.size() != problem.d) throw std::invalid_argument("problem: x dimension mismatch");
  Eigen::VectorXd ybar = batch_mean(batch);
  if (ybar.size() != problem.d_y)
    throw std::invalid_argument("problem: sample dimension mismatch");
  return problem.A.transpose() * (problem.A * x - ybar);
}

namespace {

// proximal gradient on 0.5 ||A x - target||^2 + lambda ||x||_1 with
// beta = 1/L, iterated until the fixed-point residual drops below tol
Eigen::VectorXd solve_lasso(const LassoProblem& problem, const Eigen::VectorXd& target,
                            Eigen::VectorXd x, double tol, long max_iters) {
  const double beta = 1.0 / problem.L;
  const ProxSpec psi = problem.lambda > 0.0 ? ProxSpec::l1(problem.lambda) : ProxSpec::zero();
  for (long it = 0; it < max_iters; ++it) {
    Eigen::VectorXd next =
        psi.apply(x - beta * (problem.A.transpose() * (problem.A * x - target)), beta);
    double resid = (next - x).norm();
    x = std::move(next);
    if (resid <= tol) return x;
  }
  throw std::runtime_error("problem: optimum solve did not reach tolerance");
}

}  // namespace

Eigen::VectorXd empirical_optimum(const LassoProblem& problem,
                                  const std::vector<Eigen::VectorXd>& batch) {
  Eigen::VectorXd ybar = batch_mean(batch);
  // the expected optimum is an excellent warm start and keeps this solve pure
  Eigen::VectorXd init = trajectory_value(problem.trajectory, 0.0);
  return solve_lasso(problem, ybar, std::move(init), 1e-11, 1000000L);
}

Eigen::VectorXd reference_optimum(const LassoProblem& problem, double t) {
  Eigen::VectorXd xstar = trajectory_value(problem.trajectory, t);
  if (problem.lambda == 0.0) return xstar;
  Eigen::VectorXd target = problem.A * xstar;
  return solve_lasso(problem, target, std::move(xstar), 1e-11, 1000000L);
}

double empirical_optimum_deviation(const LassoProblem& problem, double t, int b,
                                   int trials, Rng& rng) {
  if (trials < 1) throw std::invalid_argument("problem: need at least one trial");
  Eigen::VectorXd ref = reference_optimum(problem, t);
  double acc = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    auto batch = sample_batch(problem, t, b, rng);
    Eigen::VectorXd fit = solve_lasso(problem, batch_mean(batch), ref, 1e-11, 1000000L);
    acc += (fit - ref).squaredNorm();
  }
  return acc / trials;
}

}  // namespace tvtrack

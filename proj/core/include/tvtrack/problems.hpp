#ifndef TVTRACK_PROBLEMS_HPP
#define TVTRACK_PROBLEMS_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tvtrack/rng.hpp"

namespace tvtrack {

// Moving target the solver tracks. The default is the staggered sinusoid
//   x*_i(t) = sin(t + 2 pi (i-1)/d) + 0.5 sin(2t + 2 pi (i-1)/d);
// affine and frozen variants exist for controlled runs.
struct TrajectorySpec {
  enum class Kind { Sinusoid, Affine, Constant };
  Kind kind = Kind::Sinusoid;
  int d = 1;
  Eigen::VectorXd base;   // Affine: value at t = 0; Constant: the value
  Eigen::VectorXd slope;  // Affine only

  static TrajectorySpec sinusoid(int d);
  static TrajectorySpec affine(const Eigen::VectorXd& base, const Eigen::VectorXd& slope);
  static TrajectorySpec constant(const Eigen::VectorXd& value);
};

Eigen::VectorXd trajectory_value(const TrajectorySpec& spec, double t);

// Time-varying lasso stream: observations y ~ N(A x*(t), noise_scale^2 I),
// smooth loss 0.5 ||A x - y||^2, regularizer lambda ||x||_1. Immutable after
// construction; share freely across threads.
struct LassoProblem {
  Eigen::MatrixXd A;
  double lambda = 0.0;
  int d = 0;
  int d_y = 0;
  double mu = 0.0;        // sigma_min(A)^2
  double L = 0.0;         // sigma_max(A)^2
  double sigma1_sq = 0.0; // ||A||_F^2, the gradient noise variance at the optimum
  TrajectorySpec trajectory;
  double noise_scale = 1.0;
};

// A = U diag(sigma) V^T with orthonormal factors drawn from seeded Gaussians
// (QR), sigma_max = sqrt(L), sigma_min = sqrt(mu), interior singular values
// log-uniform in [sqrt(mu), sqrt(L)]. Deterministic given the seed.
// Requires d_y >= d >= 1 and 0 < mu <= L (mu == L when d == 1).
Eigen::MatrixXd generate_matrix(int d_y, int d, double mu, double L, std::uint64_t seed);

LassoProblem lasso_from_matrix(Eigen::MatrixXd A, double lambda, TrajectorySpec trajectory,
                               double noise_scale = 1.0);

LassoProblem make_lasso(int d_y, int d, double mu, double L, double lambda,
                        std::uint64_t seed, double noise_scale = 1.0);

std::vector<Eigen::VectorXd> sample_batch(const LassoProblem& problem, double t, int b,
                                          Rng& rng);

Eigen::VectorXd batch_mean(const std::vector<Eigen::VectorXd>& batch);

// A^T (A x - ybar) with ybar the batch mean; equals the gradient of the
// batch-averaged smooth loss at x.
Eigen::VectorXd stochastic_gradient(const LassoProblem& problem, const Eigen::VectorXd& x,
                                    const std::vector<Eigen::VectorXd>& batch);

// Minimizer of the batch objective 0.5 ||A x - ybar||^2 + lambda ||x||_1,
// solved by proximal gradient with beta = 1/L to fixed-point residual 1e-11.
Eigen::VectorXd empirical_optimum(const LassoProblem& problem,
                                  const std::vector<Eigen::VectorXd>& batch);

// Optimum of the expected objective at time t. lambda = 0 gives x*(t)
// exactly; lambda > 0 solves the noise-free surrogate with target A x*(t).
Eigen::VectorXd reference_optimum(const LassoProblem& problem, double t);

// Monte-Carlo estimate of E || xhat*(batch) - x*(t) ||^2 for batch size b.
// Bounded above by sigma1_sq / (mu^2 b).
double empirical_optimum_deviation(const LassoProblem& problem, double t, int b,
                                   int trials, Rng& rng);

}  // namespace tvtrack

#endif

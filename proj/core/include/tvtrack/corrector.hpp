#ifndef TVTRACK_CORRECTOR_HPP
#define TVTRACK_CORRECTOR_HPP

#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace tvtrack {

// Nonsmooth part of the objective. Zero or a scaled l1 norm; the prox of
// beta * lambda * ||.||_1 is componentwise soft thresholding.
struct ProxSpec {
  enum class Kind { Zero, L1 };
  Kind kind = Kind::Zero;
  double lambda = 0.0;

  static ProxSpec zero() { return ProxSpec{Kind::Zero, 0.0}; }
  static ProxSpec l1(double lambda);

  Eigen::VectorXd apply(const Eigen::VectorXd& x, double beta) const;
  double value(const Eigen::VectorXd& x) const;
  // minimum-norm subgradient: lambda * sign(x), zero at kinks
  Eigen::VectorXd subgradient(const Eigen::VectorXd& x) const;
};

// Callable gradient of the sampled smooth loss plus curvature bounds.
struct GradientOracle {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
  double mu = 0.0;
  double L = 1.0;
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double tau);

// c_max iterations of x <- prox_{beta psi}(x - beta grad(x)). Aborts with
// DivergenceError once ||x|| exceeds 1e12. Requires 0 < beta <= 1/L.
Eigen::VectorXd prox_gradient(const GradientOracle& oracle, const ProxSpec& psi,
                              Eigen::VectorXd x0, double beta, int c_max);

// (1 - beta mu)^{c_max}: per-step distance contraction toward the sampled
// optimum when beta <= 1/L.
double contraction_factor(double mu, double L, double beta, int c_max);

}  // namespace tvtrack

#endif

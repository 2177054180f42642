#include "tvtrack/corrector.hpp"

#include <cmath>
#include <string>

namespace tvtrack {

namespace {
constexpr double kDivergenceGuard = 1e12;
}

ProxSpec ProxSpec::l1(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("prox: lambda must be nonnegative");
  return ProxSpec{Kind::L1, lambda};
}

Eigen::VectorXd ProxSpec::apply(const Eigen::VectorXd& x, double beta) const {
  if (kind == Kind::Zero) return x;
  return soft_threshold(x, beta * lambda);
}

double ProxSpec::value(const Eigen::VectorXd& x) const {
  return kind == Kind::Zero ? 0.0 : lambda * x.lpNorm<1>();
}

Eigen::VectorXd ProxSpec::subgradient(const Eigen::VectorXd& x) const {
  if (kind == Kind::Zero) return Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j)
    g(j) = x(j) > 0.0 ? lambda : (x(j) < 0.0 ? -lambda : 0.0);
  return g;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double tau) {
  if (tau < 0.0) throw std::invalid_argument("prox: threshold must be nonnegative");
  Eigen::VectorXd out(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    double mag = std::abs(x(j)) - tau;
    out(j) = mag > 0.0 ? (x(j) > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

Eigen::VectorXd prox_gradient(const GradientOracle& oracle, const ProxSpec& psi,
                              Eigen::VectorXd x0, double beta, int c_max) {
  if (!oracle.grad) throw std::invalid_argument("prox: gradient oracle is empty");
  if (beta <= 0.0) throw std::invalid_argument("prox: beta must be positive");
  if (beta > 1.0 / oracle.L + 1e-12)
    throw std::invalid_argument("prox: beta exceeds 1/L");
  if (c_max < 0) throw std::invalid_argument("prox: c_max must be nonnegative");

  Eigen::VectorXd x = std::move(x0);
  for (int c = 0; c < c_max; ++c) {
    x = psi.apply(x - beta * oracle.grad(x), beta);
    if (x.norm() > kDivergenceGuard)
      throw DivergenceError("prox: iterate norm exceeded 1e12 at inner step " +
                            std::to_string(c + 1));
  }
  return x;
}

double contraction_factor(double mu, double L, double beta, int c_max) {
  if (!(mu > 0.0) || !(L >= mu)) throw std::invalid_argument("prox: need 0 < mu <= L");
  if (beta <= 0.0 || beta > 1.0 / L + 1e-12)
    throw std::invalid_argument("prox: need 0 < beta <= 1/L");
  if (c_max < 0) throw std::invalid_argument("prox: c_max must be nonnegative");
  return std::pow(1.0 - beta * mu, c_max);
}

}  // namespace tvtrack

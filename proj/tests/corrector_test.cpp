#include <doctest.h>

#include <cmath>

#include "test_oracles.hpp"
#include "tvtrack/corrector.hpp"
#include "tvtrack/rng.hpp"

using namespace tvtrack;

TEST_SUITE_BEGIN("corrector");

TEST_CASE("soft threshold worked examples") {
  Eigen::VectorXd x = (Eigen::VectorXd(3) << 3.0, -0.5, 0.0).finished();
  Eigen::VectorXd out = soft_threshold(x, 1.0);
  CHECK(out(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(out(1) == 0.0);
  CHECK(out(2) == 0.0);

  Eigen::VectorXd y = Eigen::VectorXd::Constant(1, -2.5);
  CHECK(soft_threshold(y, 1.5)(0) == doctest::Approx(-1.0).epsilon(1e-14));

  CHECK(soft_threshold(x, 0.0) == x);
  CHECK_THROWS_AS(soft_threshold(x, -0.1), std::invalid_argument);
}

TEST_CASE("soft threshold is the l1 prox: shrinks toward zero, never past") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x = 4.0 * rng.normal_vector(6);
    double tau = rng.uniform(0.0, 2.0);
    Eigen::VectorXd out = soft_threshold(x, tau);
    for (int j = 0; j < 6; ++j) {
      CHECK(std::abs(out(j)) <= std::abs(x(j)) + 1e-15);
      CHECK(out(j) * x(j) >= 0.0);  // no sign flips
      CHECK(std::abs(std::abs(x(j)) - std::abs(out(j))) <= tau + 1e-15);
    }
  }
}

TEST_CASE("one gradient step on 0.5 mu ||x||^2 with beta = 1/mu reaches zero") {
  const double mu = 4.0;
  GradientOracle oracle{[mu](const Eigen::VectorXd& x) { return Eigen::VectorXd(mu * x); },
                        mu, mu};
  Eigen::VectorXd x0 = (Eigen::VectorXd(3) << 1.0, -2.0, 0.5).finished();
  Eigen::VectorXd out = prox_gradient(oracle, ProxSpec::zero(), x0, 1.0 / mu, 1);
  CHECK(out.norm() < 1e-15);
}

TEST_CASE("one prox step on 0.5 (x-4)^2 + |x| from zero lands on 3") {
  GradientOracle oracle{
      [](const Eigen::VectorXd& x) { return Eigen::VectorXd(x.array() - 4.0); }, 1.0, 1.0};
  Eigen::VectorXd out =
      prox_gradient(oracle, ProxSpec::l1(1.0), Eigen::VectorXd::Zero(1), 1.0, 1);
  CHECK(out(0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("c_max = 0 returns the warm start untouched") {
  GradientOracle oracle{[](const Eigen::VectorXd& x) { return x; }, 1.0, 1.0};
  Eigen::VectorXd x0 = (Eigen::VectorXd(2) << 7.0, -3.0).finished();
  CHECK(prox_gradient(oracle, ProxSpec::zero(), x0, 1.0, 0) == x0);
}

TEST_CASE("step sizes beyond 1/L are rejected") {
  GradientOracle oracle{[](const Eigen::VectorXd& x) { return Eigen::VectorXd(10.0 * x); },
                        1.0, 10.0};
  CHECK_THROWS_AS(prox_gradient(oracle, ProxSpec::zero(), Eigen::VectorXd::Ones(1), 0.2, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(prox_gradient(oracle, ProxSpec::zero(), Eigen::VectorXd::Ones(1), -0.1, 3),
                  std::invalid_argument);
}

TEST_CASE("divergence guard fires on an explosive gradient field") {
  // grad = -100 x pretends L = 1; the iteration x <- 101 x blows up fast
  GradientOracle lying{[](const Eigen::VectorXd& x) { return Eigen::VectorXd(-100.0 * x); },
                       1.0, 1.0};
  CHECK_THROWS_AS(
      prox_gradient(lying, ProxSpec::zero(), Eigen::VectorXd::Ones(2), 1.0, 50),
      DivergenceError);
}

TEST_CASE("contraction factor formula and rejections") {
  CHECK(contraction_factor(1.0, 10.0, 0.1, 30) ==
        doctest::Approx(std::pow(0.9, 30)).epsilon(1e-12));
  CHECK(contraction_factor(2.0, 4.0, 0.25, 0) == 1.0);
  CHECK(contraction_factor(1.0, 1.0, 1.0, 1) == 0.0);
  CHECK_THROWS_AS(contraction_factor(1.0, 10.0, 0.2, 5), std::invalid_argument);
  CHECK_THROWS_AS(contraction_factor(-1.0, 10.0, 0.05, 5), std::invalid_argument);
  CHECK_THROWS_AS(contraction_factor(11.0, 10.0, 0.05, 5), std::invalid_argument);
}

namespace {

struct QuadraticLasso {
  Eigen::MatrixXd A;
  Eigen::VectorXd y;
  double lambda;

  double objective(const Eigen::VectorXd& x) const {
    return 0.5 * (A * x - y).squaredNorm() + lambda * x.lpNorm<1>();
  }
  GradientOracle oracle(double mu, double L) const {
    return GradientOracle{
        [this](const Eigen::VectorXd& x) { return Eigen::VectorXd(A.transpose() * (A * x - y)); },
        mu, L};
  }
};

}  // namespace

TEST_CASE("prox gradient contracts distance to the sampled optimum") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    // spectrum spread [1, sqrt(10)] gives mu = 1, L = 10
    const int d = 4, d_y = 8;
    Eigen::MatrixXd G = rng.normal_matrix(d_y, d);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d_y, d);
    Eigen::VectorXd s(d);
    for (int j = 0; j < d; ++j) s(j) = 1.0 + (std::sqrt(10.0) - 1.0) * j / (d - 1);
    QuadraticLasso prob{Q * s.asDiagonal(), rng.normal_vector(d_y), 0.3};
    const double mu = 1.0, L = 10.0, beta = 1.0 / L;
    GradientOracle oracle = prob.oracle(mu, L);

    // solve far past test precision for the reference optimum
    Eigen::VectorXd xstar =
        prox_gradient(oracle, ProxSpec::l1(prob.lambda), Eigen::VectorXd::Zero(d), beta, 4000);

    Eigen::VectorXd x = xstar + rng.normal_vector(d);
    double prev_dist = (x - xstar).norm();
    double prev_obj = prob.objective(x);
    for (int c = 0; c < 30; ++c) {
      x = prox_gradient(oracle, ProxSpec::l1(prob.lambda), x, beta, 1);
      double dist = (x - xstar).norm();
      if (prev_dist > 1e-12) CHECK(dist <= (1.0 - beta * mu) * prev_dist + 1e-9 * prev_dist);
      double obj = prob.objective(x);
      CHECK(obj <= prev_obj + 1e-12);
      prev_dist = dist;
      prev_obj = obj;
    }
  }
}

TEST_CASE("thirty steps meet the aggregate contraction bound") {
  Rng rng(18);
  const int d = 5, d_y = 9;
  Eigen::MatrixXd G = rng.normal_matrix(d_y, d);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d_y, d);
  Eigen::VectorXd s(d);
  for (int j = 0; j < d; ++j) s(j) = 1.0 + (std::sqrt(10.0) - 1.0) * j / (d - 1);
  QuadraticLasso prob{Q * s.asDiagonal(), rng.normal_vector(d_y), 0.5};
  GradientOracle oracle = prob.oracle(1.0, 10.0);
  const double beta = 0.1;

  Eigen::VectorXd xstar =
      prox_gradient(oracle, ProxSpec::l1(prob.lambda), Eigen::VectorXd::Zero(d), beta, 4000);
  Eigen::VectorXd x0 = xstar + rng.normal_vector(d);
  Eigen::VectorXd x30 = prox_gradient(oracle, ProxSpec::l1(prob.lambda), x0, beta, 30);
  CHECK((x30 - xstar).norm() <=
        std::pow(0.9, 30) * (x0 - xstar).norm() * (1.0 + 1e-6) + 1e-12);
}

TEST_CASE("fixed points stay fixed") {
  Rng rng(19);
  const int d = 4;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(d, d) * 2.0;
  QuadraticLasso prob{A, rng.normal_vector(d), 0.4};
  GradientOracle oracle = prob.oracle(4.0, 4.0);
  Eigen::VectorXd xstar =
      prox_gradient(oracle, ProxSpec::l1(prob.lambda), Eigen::VectorXd::Zero(d), 0.25, 2000);
  Eigen::VectorXd once = prox_gradient(oracle, ProxSpec::l1(prob.lambda), xstar, 0.25, 1);
  CHECK((once - xstar).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(20);
  const int d = 4, d_y = 7;
  Eigen::MatrixXd A = rng.normal_matrix(d_y, d);
  Eigen::VectorXd y = rng.normal_vector(d_y);
  auto f = [&](const Eigen::VectorXd& x) { return 0.5 * (A * x - y).squaredNorm(); };
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd x = rng.normal_vector(d);
    Eigen::VectorXd analytic = A.transpose() * (A * x - y);
    Eigen::VectorXd numeric = oracles::central_difference_gradient(f, x);
    CHECK((analytic - numeric).norm() <= 1e-6 * std::max(1.0, analytic.norm()));
  }
}

TEST_SUITE_END();

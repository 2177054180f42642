#include <benchmark/benchmark.h>

#include "tvtrack/coeffs.hpp"
#include "tvtrack/corrector.hpp"
#include "tvtrack/predictor.hpp"
#include "tvtrack/problems.hpp"
#include "tvtrack/rng.hpp"

using namespace tvtrack;

static void BM_regression_coefficients(benchmark::State& state) {
  const BasisSpec basis = BasisSpec::polynomial(static_cast<int>(state.range(0)));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(regression_coefficients(basis, n));
}
BENCHMARK(BM_regression_coefficients)
    ->Args({2, 20})
    ->Args({2, 100})
    ->Args({3, 100})
    ->Args({5, 1000});

static void BM_predict_direct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0)), d = 5;
  Rng rng(1);
  CoefficientVector alpha = linear_coefficients(n);
  HistoryBuffer buffer(n, rng.normal_vector(d));
  Eigen::VectorXd x = rng.normal_vector(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(buffer, alpha));
    buffer.push(x);
  }
}
BENCHMARK(BM_predict_direct)->Arg(20)->Arg(100)->Arg(1000);

static void BM_predict_rolling(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0)), d = 5;
  Rng rng(1);
  HistoryBuffer buffer = HistoryBuffer::rolling(n, rng.normal_vector(d));
  Eigen::VectorXd x = rng.normal_vector(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_linear_rolling(buffer, n));
    buffer.push(x);
  }
}
BENCHMARK(BM_predict_rolling)->Arg(20)->Arg(100)->Arg(1000);

static void BM_project_simplex_ball(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  Eigen::VectorXd v = rng.normal_vector(n);
  for (auto _ : state) benchmark::DoNotOptimize(project_A(v, 2.0));
}
BENCHMARK(BM_project_simplex_ball)->Arg(20)->Arg(1000);

static void BM_correction(benchmark::State& state) {
  const int c_max = static_cast<int>(state.range(0));
  LassoProblem problem = make_lasso(10, 5, 1.0, 10.0, 1.0, 3);
  Rng rng(4);
  auto batch = sample_batch(problem, 1.0, 1, rng);
  Eigen::VectorXd ybar = batch_mean(batch);
  GradientOracle oracle{
      [&](const Eigen::VectorXd& x) {
        return Eigen::VectorXd(problem.A.transpose() * (problem.A * x - ybar));
      },
      problem.mu, problem.L};
  const ProxSpec psi = ProxSpec::l1(problem.lambda);
  Eigen::VectorXd x0 = rng.normal_vector(5);
  for (auto _ : state)
    benchmark::DoNotOptimize(prox_gradient(oracle, psi, x0, 1.0 / problem.L, c_max));
}
BENCHMARK(BM_correction)->Arg(1)->Arg(30);

BENCHMARK_MAIN();

#include "tvtrack/coeffs.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tvtrack {

namespace {

constexpr int kMaxBasisSize = 8;   // double precision cannot certify reproduction beyond this
constexpr int kMaxSharpN = 60;     // C(60, 30) still fits in int64 exactly

void check_basis(const BasisSpec& basis) {
  if (basis.kind != BasisKind::Polynomial)
    throw std::invalid_argument("coeffs: unsupported basis kind");
  if (basis.p < 1 || basis.p > kMaxBasisSize)
    throw std::invalid_argument("coeffs: basis size p must be in [1, " +
                                std::to_string(kMaxBasisSize) + "]");
}

// Rows of the transposed design matrix with nodes scaled into (0, 1]:
// row i-1 = (1, i/n, (i/n)^2, ..., (i/n)^{p-1}).
Eigen::MatrixXd scaled_design(int p, int n) {
  Eigen::MatrixXd PhiT(n, p);
  for (int i = 1; i <= n; ++i) {
    double u = static_cast<double>(i) / static_cast<double>(n);
    double v = 1.0;
    for (int m = 0; m < p; ++m) {
      PhiT(i - 1, m) = v;
      v *= u;
    }
  }
  return PhiT;
}

}  // namespace

CoefficientVector regression_coefficients(const BasisSpec& basis, int n) {
  check_basis(basis);
  const int p = basis.p;
  if (n < p) throw std::invalid_argument("coeffs: need n >= p history points");

  // Scaling by 1/n maps phi(0) to itself (e_1), so the minimum-norm solution
  // of the scaled system is exactly the one we want.
  Eigen::MatrixXd PhiT = scaled_design(p, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(PhiT);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  Eigen::MatrixXd R = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  for (int j = 0; j < p; ++j) {
    if (std::abs(R(j, j)) < 1e-14 * std::sqrt(static_cast<double>(n)))
      throw std::runtime_error("coeffs: design matrix is numerically rank deficient");
  }

  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(p);
  e1(0) = 1.0;
  Eigen::VectorXd alpha =
      Q * R.transpose().triangularView<Eigen::Lower>().solve(e1).eval();

  // One refinement pass with an extended-precision residual tightens the
  // reproduction identity by several digits at large n.
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::VectorXd r(p);
    bool negligible = true;
    for (int m = 0; m < p; ++m) {
      long double acc = (m == 0) ? 1.0L : 0.0L;
      for (int i = 1; i <= n; ++i) {
        long double u = static_cast<long double>(i) / n;
        acc -= static_cast<long double>(alpha(i - 1)) * powl(u, m);
      }
      r(m) = static_cast<double>(acc);
      if (std::abs(r(m)) > 1e-18) negligible = false;
    }
    if (negligible) break;
    alpha += Q * R.transpose().triangularView<Eigen::Lower>().solve(r).eval();
  }

  return CoefficientVector{alpha, Provenance::MinNormRegression, p};
}

CoefficientVector linear_coefficients(int n) {
  if (n < 2) throw std::invalid_argument("coeffs: linear weights need n >= 2");
  Eigen::VectorXd alpha(n);
  const double denom = static_cast<double>(n) * (n - 1);
  for (int i = 1; i <= n; ++i) alpha(i - 1) = (4.0 * n + 2.0 - 6.0 * i) / denom;
  return CoefficientVector{alpha, Provenance::ClosedFormLinear, 2};
}

CoefficientVector sharp_coefficients(int n) {
  if (n < 1) throw std::invalid_argument("coeffs: sharp weights need n >= 1");
  if (n > kMaxSharpN)
    throw std::invalid_argument("coeffs: sharp weights overflow beyond n = " +
                                std::to_string(kMaxSharpN));
  Eigen::VectorXd alpha(n);
  std::int64_t binom = 1;  // C(n, 0)
  for (int i = 1; i <= n; ++i) {
    binom = binom * (n - i + 1) / i;  // exact: C(n,i-1)*(n-i+1) is divisible by i
    alpha(i - 1) = (i % 2 == 1) ? static_cast<double>(binom) : -static_cast<double>(binom);
  }
  return CoefficientVector{alpha, Provenance::SharpBinomial, n};
}

double reproduction_residual(const CoefficientVector& alpha, const BasisSpec& basis) {
  check_basis(basis);
  const int p = basis.p;
  const int n = alpha.n();
  if (n < p) throw std::invalid_argument("coeffs: residual needs alpha.n() >= p");

  long double sq = 0.0L;
  for (int m = 0; m < p; ++m) {
    long double acc = (m == 0) ? -1.0L : 0.0L;  // minus phi(0)
    for (int i = 1; i <= n; ++i)
      acc += static_cast<long double>(alpha.alpha(i - 1)) * powl(static_cast<long double>(i), m);
    sq += acc * acc;
  }
  return static_cast<double>(sqrtl(sq));
}

NormProfile norm_profile(const CoefficientVector& alpha) {
  return NormProfile{alpha.alpha.norm(), alpha.alpha.lpNorm<1>()};
}

}  // namespace tvtrack

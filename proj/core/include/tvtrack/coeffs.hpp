#ifndef TVTRACK_COEFFS_HPP
#define TVTRACK_COEFFS_HPP

#include <Eigen/Dense>

namespace tvtrack {

// Extrapolation weights are least-squares regression coefficients: fit the
// basis to the n most recent iterates at nodes -1..-n and evaluate the fit
// at node 0. All functions here are pure and safe to call concurrently.

enum class BasisKind { Polynomial };

// Basis convention: phi(-i) = (1, i, i^2, ..., i^{p-1}).
struct BasisSpec {
  int p = 2;
  BasisKind kind = BasisKind::Polynomial;

  static BasisSpec polynomial(int p) { return BasisSpec{p, BasisKind::Polynomial}; }
};

enum class Provenance { MinNormRegression, ClosedFormLinear, SharpBinomial, Learned };

struct CoefficientVector {
  Eigen::VectorXd alpha;
  Provenance provenance = Provenance::Learned;
  int p = 0;  // basis size for regression-built weights, 0 when not applicable

  int n() const { return static_cast<int>(alpha.size()); }
};

struct NormProfile {
  double l2 = 0.0;
  double l1 = 0.0;
};

// Minimum-norm solution of Phi * alpha = phi(0), where Phi has columns
// phi(-1)..phi(-n). Solved through a QR factorization with nodes scaled by
// 1/n; the raw power basis is too ill conditioned for large n. Requires
// n >= p and p in [1, 8].
CoefficientVector regression_coefficients(const BasisSpec& basis, int n);

// Closed form for p = 2: alpha_i = (4n + 2 - 6i) / (n(n - 1)), n >= 2.
CoefficientVector linear_coefficients(int n);

// alpha_i = (-1)^{i-1} C(n, i); equals the regression solution at n = p.
// Binomials grow fast, so n is capped at 60.
CoefficientVector sharp_coefficients(int n);

// || Phi * alpha - phi(0) ||_2 evaluated against the raw (unscaled) basis,
// accumulated in extended precision. Requires alpha.n() >= basis.p.
double reproduction_residual(const CoefficientVector& alpha, const BasisSpec& basis);

NormProfile norm_profile(const CoefficientVector& alpha);

}  // namespace tvtrack

#endif

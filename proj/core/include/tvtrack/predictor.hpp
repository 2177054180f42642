#ifndef TVTRACK_PREDICTOR_HPP
#define TVTRACK_PREDICTOR_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tvtrack/coeffs.hpp"

namespace tvtrack {

// Ring of the most recent iterates, newest first. Starts filled with x0, so
// the first predictions extrapolate a constant history. With a nonzero
// window the buffer also maintains the running sum of the `window` newest
// entries, which is what the O(d) rolling predictor consumes.
//
// Single writer assumed; no internal locking.
class HistoryBuffer {
 public:
  HistoryBuffer(int capacity, const Eigen::VectorXd& x0, int window = 0);

  // capacity n+1, window n-1, rolling recursion state armed
  static HistoryBuffer rolling(int n, const Eigen::VectorXd& x0);

  int dim() const { return dim_; }
  int capacity() const { return static_cast<int>(ring_.size()); }
  int window() const { return window_; }
  bool rolling_active() const { return rolling_active_; }

  const Eigen::VectorXd& entry(int i) const;  // i = 0 is the newest
  void push(const Eigen::VectorXd& x);

  const Eigen::VectorXd& window_sum() const { return sum_; }
  const Eigen::VectorXd& last_prediction() const { return last_prediction_; }

  // d x n matrix whose column j holds entry(j)
  Eigen::MatrixXd history_matrix(int n) const;

  friend Eigen::VectorXd predict_linear_rolling(HistoryBuffer& buffer, int n);

 private:
  int dim_;
  int window_;
  std::vector<Eigen::VectorXd> ring_;
  int head_ = 0;
  Eigen::VectorXd sum_;

  bool rolling_active_ = false;
  Eigen::VectorXd last_prediction_;
  std::uint64_t steps_ = 0;
};

// Direct prediction: sum_i alpha_i * entry(i-1). O(n d).
Eigen::VectorXd predict(const HistoryBuffer& buffer, const CoefficientVector& alpha);

// O(d) recursion equivalent to predicting with linear_coefficients(n):
//   xhat_k = xhat_{k-1} + (4/n) x_{k-1} - 6/(n(n-1)) s_{k-1} + (2/n) x_{k-n-1},
//   s_k = s_{k-1} + x_{k-1} - x_{k-n}.
// Call exactly once per round, before pushing that round's iterate. Every
// 4096 steps the recursion is re-anchored against the buffer to stop
// floating-point drift. Requires a buffer built by HistoryBuffer::rolling(n).
Eigen::VectorXd predict_linear_rolling(HistoryBuffer& buffer, int n);

// Euclidean projection onto A = { a : <1, a> = 1, ||a||_2 <= D }: project
// onto the hyperplane, then clip radially toward the center (1/n)*1 within
// it. Requires D >= n^{-1/2}, otherwise A is empty.
Eigen::VectorXd project_A(const Eigen::VectorXd& v, double D);

// Learned extrapolation weights, adapted by projected online gradient
// descent on the prediction loss.
struct OnlineCoeffState {
  CoefficientVector alpha;
  double D = 1.0;
  double eta0 = 0.01;
  double decay_exponent = 0.5;  // eta_k = eta0 * 2^(-floor(log2 k) * decay_exponent)
  std::uint64_t k = 1;          // index of the next update

  static OnlineCoeffState uniform(int n, double D = 1.0, double eta0 = 0.01,
                                  double decay_exponent = 0.5);
};

// alpha <- project_A(alpha - eta_k * X^T (grad_loss + subgrad_psi), D).
// X is the d x n history matrix the prediction was formed from; grad_loss is
// the sampled loss gradient at X * alpha and subgrad_psi a subgradient of
// the regularizer there.
void ogd_update(OnlineCoeffState& state, const Eigen::MatrixXd& X,
                const Eigen::VectorXd& grad_loss, const Eigen::VectorXd& subgrad_psi);

}  // namespace tvtrack

#endif

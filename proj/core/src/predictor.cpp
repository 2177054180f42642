#include "tvtrack/predictor.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace tvtrack {

HistoryBuffer::HistoryBuffer(int capacity, const Eigen::VectorXd& x0, int window)
    : dim_(static_cast<int>(x0.size())), window_(window) {
  if (dim_ < 1) throw std::invalid_argument("history: x0 must be nonempty");
  if (capacity < 1) throw std::invalid_argument("history: capacity must be positive");
  if (window < 0 || window > capacity)
    throw std::invalid_argument("history: window must lie in [0, capacity]");
  ring_.assign(static_cast<std::size_t>(capacity), x0);
  sum_ = static_cast<double>(window) * x0;
  last_prediction_ = x0;
}

HistoryBuffer HistoryBuffer::rolling(int n, const Eigen::VectorXd& x0) {
  if (n < 2) throw std::invalid_argument("history: rolling mode needs n >= 2");
  HistoryBuffer buf(n + 1, x0, n - 1);
  buf.rolling_active_ = true;
  return buf;
}

const Eigen::VectorXd& HistoryBuffer::entry(int i) const {
  if (i < 0 || i >= capacity()) throw std::out_of_range("history: entry index out of range");
  return ring_[static_cast<std::size_t>((head_ + i) % capacity())];
}

void HistoryBuffer::push(const Eigen::VectorXd& x) {
  if (x.size() != dim_) throw std::invalid_argument("history: dimension mismatch on push");
  if (window_ > 0) sum_ += x - entry(window_ - 1);
  head_ = (head_ + capacity() - 1) % capacity();
  ring_[static_cast<std::size_t>(head_)] = x;
}

Eigen::MatrixXd HistoryBuffer::history_matrix(int n) const {
  if (n < 1 || n > capacity())
    throw std::invalid_argument("history: matrix width exceeds capacity");
  Eigen::MatrixXd X(dim_, n);
  for (int j = 0; j < n; ++j) X.col(j) = entry(j);
  return X;
}

Eigen::VectorXd predict(const HistoryBuffer& buffer, const CoefficientVector& alpha) {
  const int n = alpha.n();
  if (n < 1) throw std::invalid_argument("predict: empty coefficient vector");
  if (n > buffer.capacity())
    throw std::invalid_argument("predict: buffer holds fewer entries than coefficients");
  Eigen::VectorXd out = alpha.alpha(0) * buffer.entry(0);
  for (int i = 1; i < n; ++i) out.noalias() += alpha.alpha(i) * buffer.entry(i);
  return out;
}

Eigen::VectorXd predict_linear_rolling(HistoryBuffer& buffer, int n) {
  if (!buffer.rolling_active_)
    throw std::logic_error("predict: rolling state absent, build the buffer with rolling()");
  if (n < 2 || buffer.capacity() != n + 1 || buffer.window_ != n - 1)
    throw std::invalid_argument("predict: rolling buffer shape does not match n");

  if (buffer.steps_ > 0 && buffer.steps_ % 4096 == 0) {
    // re-anchor both running quantities straight from the entries
    buffer.sum_.setZero();
    for (int i = 0; i < n - 1; ++i) buffer.sum_ += buffer.entry(i);
    const double denom = static_cast<double>(n) * (n - 1);
    buffer.last_prediction_.setZero();
    for (int i = 1; i <= n; ++i)
      buffer.last_prediction_ += ((4.0 * n + 2.0 - 6.0 * i) / denom) * buffer.entry(i);
  }

  // window_sum holds the sum of the n-1 newest entries; the recursion wants
  // the same window one step earlier
  Eigen::VectorXd s_prev = buffer.sum_ - buffer.entry(0) + buffer.entry(n - 1);
  Eigen::VectorXd xhat = buffer.last_prediction_ + (4.0 / n) * buffer.entry(0) -
                         (6.0 / (static_cast<double>(n) * (n - 1))) * s_prev +
                         (2.0 / n) * buffer.entry(n);
  buffer.last_prediction_ = xhat;
  ++buffer.steps_;
  return xhat;
}

Eigen::VectorXd project_A(const Eigen::VectorXd& v, double D) {
  const int n = static_cast<int>(v.size());
  if (n < 1) throw std::invalid_argument("project: empty vector");
  const double c = 1.0 / n;
  if (D * D < c - 1e-15)
    throw std::invalid_argument("project: D < n^{-1/2} leaves the set empty");

  Eigen::VectorXd w = v;
  w.array() -= (v.sum() - 1.0) / n;
  Eigen::VectorXd dev = w;
  dev.array() -= c;
  const double r = std::sqrt(std::max(0.0, D * D - c));
  const double dn = dev.norm();
  if (dn <= r) return w;
  Eigen::VectorXd out = (r / dn) * dev;
  out.array() += c;
  return out;
}

OnlineCoeffState OnlineCoeffState::uniform(int n, double D, double eta0,
                                           double decay_exponent) {
  if (n < 1) throw std::invalid_argument("online: need n >= 1");
  if (D * D < 1.0 / n - 1e-15)
    throw std::invalid_argument("online: D < n^{-1/2} leaves the feasible set empty");
  if (eta0 <= 0.0) throw std::invalid_argument("online: eta0 must be positive");
  OnlineCoeffState state;
  state.alpha = CoefficientVector{Eigen::VectorXd::Constant(n, 1.0 / n),
                                  Provenance::Learned, 0};
  state.D = D;
  state.eta0 = eta0;
  state.decay_exponent = decay_exponent;
  return state;
}

void ogd_update(OnlineCoeffState& state, const Eigen::MatrixXd& X,
                const Eigen::VectorXd& grad_loss, const Eigen::VectorXd& subgrad_psi) {
  const int n = state.alpha.n();
  if (X.cols() != n) throw std::invalid_argument("online: history matrix width != n");
  if (X.rows() != grad_loss.size() || X.rows() != subgrad_psi.size())
    throw std::invalid_argument("online: gradient dimension mismatch");

  const int log2k = std::bit_width(state.k) - 1;  // floor(log2 k), k >= 1
  const double eta = state.eta0 * std::pow(2.0, -state.decay_exponent * log2k);
  Eigen::VectorXd step = state.alpha.alpha - eta * (X.transpose() * (grad_loss + subgrad_psi));
  state.alpha.alpha = project_A(step, state.D);
  ++state.k;
}

}  // namespace tvtrack

#ifndef TVTRACK_HARNESS_HPP
#define TVTRACK_HARNESS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tvtrack/problems.hpp"

namespace tvtrack {

// How the history length n is picked from the sampling interval h.
struct NPolicy {
  enum class Kind { Auto, Fixed, Reciprocal };
  Kind kind = Kind::Auto;
  int q = 0;  // Auto: n = max(p, floor(h^{-2q/(2q+1)}))
  int n = 0;  // Fixed

  static NPolicy automatic(int q) { return NPolicy{Kind::Auto, q, 0}; }
  static NPolicy fixed(int n) { return NPolicy{Kind::Fixed, 0, n}; }
  static NPolicy reciprocal() { return NPolicy{Kind::Reciprocal, 0, 0}; }  // n = floor(1/h)
};

struct BetaPolicy {
  enum class Kind { InverseL, SgdDefault, Fixed };
  Kind kind = Kind::InverseL;
  double value = 0.0;

  static BetaPolicy inverse_l() { return BetaPolicy{Kind::InverseL, 0.0}; }
  static BetaPolicy sgd_default() { return BetaPolicy{Kind::SgdDefault, 0.0}; }  // h^{2/3}
  static BetaPolicy fixed(double beta) { return BetaPolicy{Kind::Fixed, beta}; }
};

struct MethodSpec {
  enum class Kind { Tvsgd, SharpPoly, SharpOnline };
  Kind kind = Kind::SharpPoly;
  int p = 2;  // SharpPoly basis size
  NPolicy n_policy;
  int c_max = 30;
  BetaPolicy beta;
  // SharpOnline knobs
  double eta0 = 0.01;
  double D = 1.0;
  double decay_exponent = 0.5;

  static MethodSpec tvsgd();
  static MethodSpec sharp_poly(int p);
  static MethodSpec sharp_online();

  std::string id() const;             // "tvsgd", "sharp:p=2", "sharp:online", ...
  int resolve_n(double h) const;      // applies the policy and the [max(p,2), 1e5] clamp
  double resolve_beta(double h, double L) const;
};

struct StepRow {
  long k = 0;
  double t = 0.0;
  Eigen::VectorXd prediction;  // warm start handed to the corrector
  Eigen::VectorXd corrected;   // iterate after the correction steps
  Eigen::VectorXd reference;   // optimum of the expected objective at t
  double err_pred = 0.0;       // ||prediction - reference||
  double err_corr = 0.0;       // ||corrected - reference||
};

struct RunRecord {
  std::string method_id;
  double h = 0.0;
  double t_end = 0.0;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  int n = 0;           // 0 when the method has no history length
  int p = 0;           // 0 when not applicable
  int c_max = 0;
  double beta = 0.0;
  bool uses_prediction_metric = false;  // which error column the summary reads
  bool contraction_warning = false;     // gamma * ||alpha||_1 >= 1 at setup
  long grad_calls = 0;
  double grad_calls_per_round = 0.0;
  double wall_ms = 0.0;
  std::vector<StepRow> rows;
};

// Prediction-correction driver: predict from history, observe a batch at
// t_k = k h, correct with c_max proximal gradient steps, push. Covers the
// fixed-coefficient (p = 2 rolling, p >= 3 direct) and learned-coefficient
// variants.
RunRecord run_sharp(const LassoProblem& problem, const MethodSpec& method, double h,
                    double t_end, std::uint64_t seed, int batch_size = 1,
                    const Eigen::VectorXd& x0 = Eigen::VectorXd());

// Baseline: one proximal gradient step per round from the previous iterate,
// beta = h^{2/3} unless overridden.
RunRecord run_tvsgd(const LassoProblem& problem, const MethodSpec& method, double h,
                    double t_end, std::uint64_t seed, int batch_size = 1,
                    const Eigen::VectorXd& x0 = Eigen::VectorXd());

// Mean tracking error over rows with t_lo <= t_k < t_hi; err_pred for
// prediction-correction records, err_corr for the baseline.
double windowed_error(const RunRecord& record, double t_lo = 4.0, double t_hi = 5.0);

// Least-squares slope of log(err) against log(h). Needs >= 3 points with
// positive h and err.
double fit_rate(const std::vector<std::pair<double, double>>& points);

}  // namespace tvtrack

#endif

#ifndef TVTRACK_GRID_HPP
#define TVTRACK_GRID_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tvtrack/harness.hpp"

namespace tvtrack {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Curvature of the generated instances. Paper mode couples both constants to
// the sampling interval: L = h^{-2/3} / 2, mu = L / 10.
struct MuLPolicy {
  enum class Kind { Paper, Fixed };
  Kind kind = Kind::Paper;
  double mu = 1.0;
  double L = 10.0;

  static MuLPolicy paper() { return MuLPolicy{Kind::Paper, 0.0, 0.0}; }
  static MuLPolicy fixed(double mu, double L);

  double resolve_mu(double h) const;
  double resolve_L(double h) const;
};

struct ProblemConfig {
  int d = 5;
  int d_y = 10;
  double lambda = 1.0;
  MuLPolicy mul;
  Eigen::VectorXd x0;       // empty means (2, 0, ..., 0)
  double noise_scale = 1.0;
  TrajectorySpec::Kind trajectory_kind = TrajectorySpec::Kind::Sinusoid;
  Eigen::VectorXd trajectory_base;   // Affine / Constant
  Eigen::VectorXd trajectory_slope;  // Affine

  TrajectorySpec make_trajectory() const;
};

struct ExperimentConfig {
  ProblemConfig problem;
  std::vector<double> h;
  std::vector<std::uint64_t> seeds;
  std::vector<MethodSpec> methods;
  double t_end = 5.0;
  int batch = 1;
  std::string output = "results.csv";
  int threads = 1;

  static ExperimentConfig defaults();
  void validate() const;
};

// One (method, h, seed) cell of the sweep.
struct CellResult {
  std::string method_id;
  double h = 0.0;
  int n = 0;
  int p = 0;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double windowed_err = 0.0;
  double grad_calls_per_round = 0.0;
  double wall_ms = 0.0;
  bool ok = false;
  bool diverged = false;
  std::string error;
};

struct AggregateRow {
  std::string method_id;
  double h = 0.0;
  int n = 0;
  int p = 0;
  double lambda = 0.0;
  double avg_err = 0.0;             // mean of windowed errors over seeds
  double std_err_over_seeds = 0.0;  // sample standard deviation (0 for one seed)
  double grad_calls_per_round = 0.0;
  double wall_ms = 0.0;  // mean over seeds
};

struct GridResult {
  std::vector<CellResult> cells;        // every (method, h, seed), input order
  std::vector<AggregateRow> aggregates; // every (method, h), input order
  bool all_ok = false;
  bool any_divergence = false;
};

// Runs every cell (in parallel when config.threads > 1; results match the
// serial order regardless) and aggregates over seeds. Per-cell failures are
// captured, not thrown.
GridResult run_grid(const ExperimentConfig& config);

// CSV schema, one line per run then one per aggregate:
//   method,h,n,p,seed,lambda,avg_err,std_err_over_seeds,grad_calls_per_round,wall_ms
// Aggregate rows leave seed empty; run rows leave std_err_over_seeds empty.
// Inapplicable n/p (the baseline) are empty. 17 significant digits.
void write_csv(const GridResult& result, const std::string& path);
std::string to_csv(const GridResult& result);

// JSON configuration document; see configs/schema.json for the field list.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// CLI method vocabulary: "tvsgd", "sharp:p=2", "sharp:p=3", "sharp:online".
MethodSpec parse_method(const std::string& text);

RunRecord run_method(const LassoProblem& problem, const MethodSpec& method, double h,
                     double t_end, std::uint64_t seed, int batch_size,
                     const Eigen::VectorXd& x0);

}  // namespace tvtrack

#endif

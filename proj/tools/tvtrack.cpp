// Command line front end: run parameter sweeps, inspect extrapolation
// weights, and fit empirical convergence rates from result files.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tvtrack/coeffs.hpp"
#include "tvtrack/corrector.hpp"
#include "tvtrack/grid.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDivergence = 2;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_run(const std::string& config_path, const std::vector<double>& h_override,
            const std::vector<std::string>& method_override, double lambda_override,
            bool lambda_set, const std::vector<std::uint64_t>& seeds_override,
            int cmax_override, int batch_override, const std::string& out_override,
            int threads_override) {
  tvtrack::ExperimentConfig config = config_path.empty()
                                         ? tvtrack::ExperimentConfig::defaults()
                                         : tvtrack::load_config(config_path);

  if (!h_override.empty()) config.h = h_override;
  if (!seeds_override.empty()) config.seeds = seeds_override;
  if (!method_override.empty()) {
    config.methods.clear();
    for (const std::string& m : method_override)
      config.methods.push_back(tvtrack::parse_method(m));
  }
  if (lambda_set) config.problem.lambda = lambda_override;
  if (cmax_override >= 0)
    for (tvtrack::MethodSpec& m : config.methods) m.c_max = cmax_override;
  if (batch_override > 0) config.batch = batch_override;
  if (!out_override.empty()) config.output = out_override;
  if (threads_override > 0) config.threads = threads_override;
  config.validate();

  tvtrack::GridResult result = tvtrack::run_grid(config);
  tvtrack::write_csv(result, config.output);

  std::size_t failed = 0;
  for (const tvtrack::CellResult& cell : result.cells) {
    if (!cell.ok) {
      ++failed;
      std::cerr << "cell failed: method=" << cell.method_id << " h=" << num(cell.h)
                << " seed=" << cell.seed << ": " << cell.error << "\n";
    }
  }
  std::cout << "wrote " << config.output << " (" << result.cells.size() << " runs, "
            << result.aggregates.size() << " aggregates";
  if (failed > 0) std::cout << ", " << failed << " failed";
  std::cout << ")\n";

  if (result.any_divergence) return kExitDivergence;
  return result.all_ok ? kExitOk : kExitConfig;
}

int cmd_coeffs(int p, int n) {
  tvtrack::CoefficientVector alpha =
      tvtrack::regression_coefficients(tvtrack::BasisSpec::polynomial(p), n);
  std::cout << "alpha =";
  for (int i = 0; i < alpha.n(); ++i) std::cout << ' ' << num(alpha.alpha(i));
  std::cout << '\n';
  tvtrack::NormProfile norms = tvtrack::norm_profile(alpha);
  std::cout << "sum = " << num(alpha.alpha.sum()) << '\n'
            << "l2 = " << num(norms.l2) << "  l1 = " << num(norms.l1)
            << "  n*l2^2 = " << num(n * norms.l2 * norms.l2) << '\n'
            << "reproduction_residual = "
            << num(tvtrack::reproduction_residual(alpha, tvtrack::BasisSpec::polynomial(p)))
            << '\n';
  return kExitOk;
}

int cmd_rate(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "rate: cannot open " << path << "\n";
    return kExitConfig;
  }

  std::string line;
  if (!std::getline(in, line)) {
    std::cerr << "rate: empty file\n";
    return kExitConfig;
  }

  // aggregate rows have an empty seed field (column 5)
  std::map<std::string, std::vector<std::pair<double, double>>> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    while (fields.size() < 10) fields.emplace_back();
    if (!fields[4].empty()) continue;
    try {
      points[fields[0]].emplace_back(std::stod(fields[1]), std::stod(fields[6]));
    } catch (const std::exception&) {
      std::cerr << "rate: malformed row: " << line << "\n";
      return kExitConfig;
    }
  }

  if (points.empty()) {
    std::cerr << "rate: no aggregate rows found\n";
    return kExitConfig;
  }
  bool any = false;
  for (const auto& [method, pts] : points) {
    if (pts.size() < 3) {
      std::cerr << "rate: " << method << ": need >= 3 h values, have " << pts.size() << "\n";
      continue;
    }
    std::cout << method << " slope = " << num(tvtrack::fit_rate(pts)) << '\n';
    any = true;
  }
  return any ? kExitOk : kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-varying optimization tracking benchmarks"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a sweep and write a CSV of tracking errors");
  run->set_help_flag("--help", "print this help and exit");  // frees -h for --h
  std::string config_path;
  std::vector<double> h_override;
  std::vector<std::string> method_override;
  double lambda_override = 0.0;
  std::vector<std::uint64_t> seeds_override;
  int cmax_override = -1;
  int batch_override = 0;
  int threads_override = 0;
  std::string out_override;
  run->add_option("--config", config_path, "JSON experiment config (see configs/)");
  run->add_option("--h", h_override, "sampling intervals")->delimiter(',');
  auto* lambda_opt =
      run->add_option("--lambda", lambda_override, "l1 regularization weight");
  run->add_option("--method", method_override,
                  "methods: tvsgd, sharp:p=<int>, sharp:online")
      ->delimiter(',');
  run->add_option("--seeds", seeds_override, "run seeds")->delimiter(',');
  run->add_option("--cmax", cmax_override, "correction steps per round");
  run->add_option("--batch", batch_override, "samples per round");
  run->add_option("--out", out_override, "output CSV path");
  run->add_option("--threads", threads_override, "worker threads for grid cells");

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "print extrapolation weights and norms");
  int p = 2, n = 0;
  coeffs->add_option("--p", p, "basis size")->required();
  coeffs->add_option("--n", n, "history length")->required();

  // rate
  auto* rate = app.add_subcommand("rate", "fit log-log error slopes from a run CSV");
  std::string rate_in;
  rate->add_option("--in", rate_in, "CSV produced by run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, h_override, method_override, lambda_override,
                     lambda_opt->count() > 0, seeds_override, cmax_override,
                     batch_override, out_override, threads_override);
    if (coeffs->parsed()) return cmd_coeffs(p, n);
    if (rate->parsed()) return cmd_rate(rate_in);
  } catch (const tvtrack::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

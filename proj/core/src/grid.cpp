#include "tvtrack/grid.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tvtrack/corrector.hpp"

namespace tvtrack {

MuLPolicy MuLPolicy::fixed(double mu, double L) {
  if (!(mu > 0.0) || !(L >= mu)) throw ConfigError("config: need 0 < mu <= L");
  return MuLPolicy{Kind::Fixed, mu, L};
}

double MuLPolicy::resolve_L(double h) const {
  if (kind == Kind::Fixed) return L;
  if (h <= 0.0) throw ConfigError("config: h must be positive");
  return 0.5 * std::pow(h, -2.0 / 3.0);
}

double MuLPolicy::resolve_mu(double h) const {
  return kind == Kind::Fixed ? mu : resolve_L(h) / 10.0;
}

TrajectorySpec ProblemConfig::make_trajectory() const {
  switch (trajectory_kind) {
    case TrajectorySpec::Kind::Sinusoid:
      return TrajectorySpec::sinusoid(d);
    case TrajectorySpec::Kind::Affine:
      return TrajectorySpec::affine(trajectory_base, trajectory_slope);
    case TrajectorySpec::Kind::Constant:
      return TrajectorySpec::constant(trajectory_base);
  }
  throw ConfigError("config: unknown trajectory kind");
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig config;
  config.h = {0.1, 0.05, 0.02, 0.01};
  config.seeds = {1, 2, 3, 4, 5};
  config.methods = {MethodSpec::tvsgd(), MethodSpec::sharp_poly(2), MethodSpec::sharp_poly(3)};
  return config;
}

void ExperimentConfig::validate() const {
  if (problem.d < 1 || problem.d_y < problem.d)
    throw ConfigError("config: need d_y >= d >= 1");
  if (problem.lambda < 0.0) throw ConfigError("config: lambda must be nonnegative");
  if (problem.noise_scale < 0.0) throw ConfigError("config: noise_scale must be nonnegative");
  if (problem.x0.size() != 0 && problem.x0.size() != problem.d)
    throw ConfigError("config: x0 dimension must equal d");
  if (h.empty()) throw ConfigError("config: empty h list");
  for (double hv : h)
    if (hv <= 0.0) throw ConfigError("config: h values must be positive");
  if (seeds.empty()) throw ConfigError("config: empty seed list");
  if (methods.empty()) throw ConfigError("config: empty method list");
  if (t_end <= 0.0) throw ConfigError("config: t_end must be positive");
  if (batch < 1) throw ConfigError("config: batch must be positive");
  if (threads < 1) throw ConfigError("config: threads must be positive");
  for (const MethodSpec& m : methods)
    for (double hv : h) (void)m.resolve_n(hv);  // surfaces bad n policies up front
}

RunRecord run_method(const LassoProblem& problem, const MethodSpec& method, double h,
                     double t_end, std::uint64_t seed, int batch_size,
                     const Eigen::VectorXd& x0) {
  return method.kind == MethodSpec::Kind::Tvsgd
             ? run_tvsgd(problem, method, h, t_end, seed, batch_size, x0)
             : run_sharp(problem, method, h, t_end, seed, batch_size, x0);
}

GridResult run_grid(const ExperimentConfig& config) {
  config.validate();

  struct Cell {
    std::size_t method_idx;
    double h;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t mi = 0; mi < config.methods.size(); ++mi)
    for (double h : config.h)
      for (std::uint64_t seed : config.seeds) cells.push_back(Cell{mi, h, seed});

  GridResult result;
  result.cells.resize(cells.size());

  auto run_cell = [&](std::size_t idx) {
    const Cell& cell = cells[idx];
    const MethodSpec& method = config.methods[cell.method_idx];
    CellResult out;
    out.method_id = method.id();
    out.h = cell.h;
    out.seed = cell.seed;
    out.lambda = config.problem.lambda;
    try {
      const double mu = config.problem.mul.resolve_mu(cell.h);
      const double L = config.problem.mul.resolve_L(cell.h);
      LassoProblem problem = lasso_from_matrix(
          generate_matrix(config.problem.d_y, config.problem.d, mu, L, cell.seed),
          config.problem.lambda, config.problem.make_trajectory(),
          config.problem.noise_scale);
      RunRecord record = run_method(problem, method, cell.h, config.t_end, cell.seed,
                                    config.batch, config.problem.x0);
      out.n = record.n;
      out.p = record.p;
      out.windowed_err = windowed_error(record);
      out.grad_calls_per_round = record.grad_calls_per_round;
      out.wall_ms = record.wall_ms;
      out.ok = true;
    } catch (const DivergenceError& e) {
      out.diverged = true;
      out.error = e.what();
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    result.cells[idx] = std::move(out);
  };

  const int threads = std::min<int>(config.threads, static_cast<int>(cells.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
          run_cell(i);
      });
    for (auto& th : pool) th.join();
  }

  result.all_ok = true;
  for (const CellResult& cell : result.cells) {
    result.all_ok = result.all_ok && cell.ok;
    result.any_divergence = result.any_divergence || cell.diverged;
  }

  // one aggregate per (method, h), in input order
  for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
    for (double h : config.h) {
      AggregateRow agg;
      agg.method_id = config.methods[mi].id();
      agg.h = h;
      agg.lambda = config.problem.lambda;
      long count = 0;
      for (const CellResult& cell : result.cells) {
        if (cell.method_id != agg.method_id || cell.h != h || !cell.ok) continue;
        agg.n = cell.n;
        agg.p = cell.p;
        agg.avg_err += cell.windowed_err;
        agg.grad_calls_per_round = cell.grad_calls_per_round;
        agg.wall_ms += cell.wall_ms;
        ++count;
      }
      if (count == 0) continue;
      agg.avg_err /= static_cast<double>(count);
      agg.wall_ms /= static_cast<double>(count);
      if (count > 1) {
        double ss = 0.0;
        for (const CellResult& cell : result.cells)
          if (cell.method_id == agg.method_id && cell.h == h && cell.ok)
            ss += (cell.windowed_err - agg.avg_err) * (cell.windowed_err - agg.avg_err);
        agg.std_err_over_seeds = std::sqrt(ss / static_cast<double>(count - 1));
      }
      result.aggregates.push_back(std::move(agg));
    }
  }
  return result;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv(const GridResult& result) {
  std::ostringstream out;
  out << "method,h,n,p,seed,lambda,avg_err,std_err_over_seeds,grad_calls_per_round,wall_ms\n";
  for (const CellResult& cell : result.cells) {
    out << cell.method_id << ',' << num(cell.h) << ',';
    if (cell.n > 0) out << cell.n;
    out << ',';
    if (cell.p > 0) out << cell.p;
    out << ',' << cell.seed << ',' << num(cell.lambda) << ','
        << num(cell.windowed_err) << ",," << num(cell.grad_calls_per_round) << ','
        << num(cell.wall_ms) << '\n';
  }
  for (const AggregateRow& agg : result.aggregates) {
    out << agg.method_id << ',' << num(agg.h) << ',';
    if (agg.n > 0) out << agg.n;
    out << ',';
    if (agg.p > 0) out << agg.p;
    out << ",," << num(agg.lambda) << ',' << num(agg.avg_err) << ','
        << num(agg.std_err_over_seeds) << ',' << num(agg.grad_calls_per_round) << ','
        << num(agg.wall_ms) << '\n';
  }
  return out.str();
}

void write_csv(const GridResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot open " + path + " for writing");
  out << to_csv(result);
}

namespace {

using nlohmann::json;

Eigen::VectorXd parse_vector(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string("config: ") + what + " must be an array");
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(std::string("config: ") + what + " must be numeric");
    v(i++) = e.get<double>();
  }
  return v;
}

MethodSpec parse_method_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("config: each method needs a kind");
  const std::string kind = j.at("kind").get<std::string>();

  MethodSpec m;
  if (kind == "tvsgd") {
    m = MethodSpec::tvsgd();
  } else if (kind == "sharp_poly") {
    m = MethodSpec::sharp_poly(j.value("p", 2));
  } else if (kind == "sharp_online") {
    m = MethodSpec::sharp_online();
    if (j.contains("eta0")) m.eta0 = j.at("eta0").get<double>();
    if (j.contains("D")) m.D = j.at("D").get<double>();
    if (j.contains("decay_exponent")) m.decay_exponent = j.at("decay_exponent").get<double>();
  } else {
    throw ConfigError("config: unknown method kind '" + kind + "'");
  }

  if (j.contains("n")) m.n_policy = NPolicy::fixed(j.at("n").get<int>());
  if (j.contains("q")) m.n_policy = NPolicy::automatic(j.at("q").get<int>());
  if (j.contains("c_max")) m.c_max = j.at("c_max").get<int>();
  if (j.contains("beta")) m.beta = BetaPolicy::fixed(j.at("beta").get<double>());
  if (m.c_max < 0) throw ConfigError("config: c_max must be nonnegative");
  return m;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  ExperimentConfig config = ExperimentConfig::defaults();
  try {
    if (j.contains("problem")) {
      const json& p = j.at("problem");
      config.problem.d = p.value("d", config.problem.d);
      config.problem.d_y = p.value("d_y", config.problem.d_y);
      config.problem.lambda = p.value("lambda", config.problem.lambda);
      config.problem.noise_scale = p.value("noise_scale", config.problem.noise_scale);
      if (p.contains("x0")) config.problem.x0 = parse_vector(p.at("x0"), "x0");
      if (p.contains("mu_l_policy")) {
        const json& mp = p.at("mu_l_policy");
        if (mp.is_string() && mp.get<std::string>() == "paper") {
          config.problem.mul = MuLPolicy::paper();
        } else if (mp.is_object()) {
          config.problem.mul =
              MuLPolicy::fixed(mp.at("mu").get<double>(), mp.at("L").get<double>());
        } else {
          throw ConfigError("config: mu_l_policy must be \"paper\" or {mu, L}");
        }
      }
      if (p.contains("trajectory")) {
        const json& tj = p.at("trajectory");
        const std::string kind = tj.at("kind").get<std::string>();
        if (kind == "sinusoid") {
          config.problem.trajectory_kind = TrajectorySpec::Kind::Sinusoid;
        } else if (kind == "affine") {
          config.problem.trajectory_kind = TrajectorySpec::Kind::Affine;
          config.problem.trajectory_base = parse_vector(tj.at("base"), "trajectory.base");
          config.problem.trajectory_slope = parse_vector(tj.at("slope"), "trajectory.slope");
        } else if (kind == "constant") {
          config.problem.trajectory_kind = TrajectorySpec::Kind::Constant;
          config.problem.trajectory_base = parse_vector(tj.at("value"), "trajectory.value");
        } else {
          throw ConfigError("config: unknown trajectory kind '" + kind + "'");
        }
      }
    }
    if (j.contains("h")) {
      config.h.clear();
      for (const auto& e : j.at("h")) config.h.push_back(e.get<double>());
    }
    if (j.contains("seeds")) {
      config.seeds.clear();
      for (const auto& e : j.at("seeds")) config.seeds.push_back(e.get<std::uint64_t>());
    }
    if (j.contains("methods")) {
      config.methods.clear();
      for (const auto& e : j.at("methods")) config.methods.push_back(parse_method_json(e));
    }
    config.t_end = j.value("t_end", config.t_end);
    config.batch = j.value("batch", config.batch);
    config.output = j.value("output", config.output);
    config.threads = j.value("threads", config.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

MethodSpec parse_method(const std::string& text) {
  if (text == "tvsgd") return MethodSpec::tvsgd();
  if (text == "sharp:online") return MethodSpec::sharp_online();
  const std::string prefix = "sharp:p=";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t pos = 0;
      const std::string digits = text.substr(prefix.size());
      const int p = std::stoi(digits, &pos);
      if (pos == digits.size() && p >= 1) return MethodSpec::sharp_poly(p);
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("config: unknown method '" + text +
                    "' (expected tvsgd, sharp:p=<int>, or sharp:online)");
}

}  // namespace tvtrack

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "badmm/core.hpp"
#include "badmm/io.hpp"
#include "badmm/logistic.hpp"
#include "badmm/oracle.hpp"
#include "badmm/transport.hpp"

namespace {

struct SolverOpts {
  double rho = 1e-3;
  double tau_ratio = 1.0;
  double rho_x = 0.0;
  double rho_z = 0.0;
  double gamma = 0.125;
  int max_iters = 2000;
  double tol = 1e-4;
  std::string variant = "badmm-kl";
  std::string schedule = "constant";
  double c1 = 1.0;
  double c2 = 1.0;
  std::string trace_out;
  std::string config_file;
};

struct SolveOpts {
  SolverOpts solver;
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string cost_file;
  bool check_oracle = false;
};

struct CompareOpts {
  SolverOpts solver;
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  int seeds = 5;
};

struct LogisticOpts {
  SolverOpts solver;
  std::string data_file;
  std::uint64_t n_samples = 50;
  std::uint64_t dim = 10;
  std::uint64_t seed = 0;
  double lambda = 0.1;
};

void add_solver_flags(CLI::App* cmd, SolverOpts& o, bool with_variant) {
  cmd->add_option("--rho", o.rho, "penalty weight")->capture_default_str();
  cmd->add_option("--tau-ratio", o.tau_ratio, "dual step as a multiple of rho")
      ->capture_default_str();
  cmd->add_option("--rho-x", o.rho_x, "proximal weight on the x block")->capture_default_str();
  cmd->add_option("--rho-z", o.rho_z, "proximal weight on the z block")->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "diagnostics weight on the feasibility term")
      ->capture_default_str();
  cmd->add_option("--max-iters", o.max_iters, "iteration cap")->capture_default_str();
  cmd->add_option("--tol", o.tol, "residual tolerance")->capture_default_str();
  if (with_variant) {
    cmd->add_option("--variant", o.variant, "solver variant")
        ->check(CLI::IsMember({"badmm-kl", "admm"}))
        ->capture_default_str();
  }
  cmd->add_option("--schedule", o.schedule, "step-size schedule")
      ->check(CLI::IsMember({"constant", "sqrt-t"}))
      ->capture_default_str();
  cmd->add_option("--c1", o.c1, "sqrt-t schedule proximal constant")->capture_default_str();
  cmd->add_option("--c2", o.c2, "sqrt-t schedule dual constant")->capture_default_str();
  cmd->add_option("--trace-out", o.trace_out, "write the per-iteration trace CSV here");
  cmd->add_option("--config", o.config_file,
                  "flat key=value file mirroring the long flag names");
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) {
    s.erase(s.begin());
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) {
    s.pop_back();
  }
  return s;
}

// Applies key=value lines to the subcommand's own options. Values given on
// the command line win; config values beat built-in defaults. Applied by
// hand because the parser library only consults config files on the top-level
// command, and the solver flags live on subcommands.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error(path + ": cannot open config file");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    CLI::Option* option = (key == "config") ? nullptr : cmd->get_option_no_throw("--" + key);
    if (option == nullptr) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown config key '" +
                               key + "'");
    }
    if (option->count() > 0) continue;
    option->add_result(value);
    option->run_callback();
  }
}

badmm::SolverConfig build_config(const SolverOpts& o) {
  badmm::SolverConfig cfg;
  cfg.rho = o.rho;
  cfg.tau_ratio = o.tau_ratio;
  cfg.rho_x = o.rho_x;
  cfg.rho_z = o.rho_z;
  cfg.gamma = o.gamma;
  cfg.max_iters = o.max_iters;
  cfg.tol = o.tol;
  cfg.variant = (o.variant == "admm") ? badmm::Variant::AdmmEuclidean : badmm::Variant::BadmmKl;
  cfg.schedule.kind = (o.schedule == "sqrt-t") ? badmm::ScheduleKind::SqrtT
                                               : badmm::ScheduleKind::Constant;
  cfg.schedule.c1 = o.c1;
  cfg.schedule.c2 = o.c2;
  cfg.validate();
  return cfg;
}

badmm::TransportProblem build_transport_instance(const std::string& cost_file, std::uint64_t m,
                                                 std::uint64_t n, std::uint64_t seed) {
  badmm::Matrix cost;
  if (!cost_file.empty()) {
    cost = badmm::io::load_cost_file(cost_file);
  } else {
    if (n == 0) throw std::invalid_argument("pass --n (or --cost-file) to size the instance");
    if (m == 0) m = n;
    cost = badmm::uniform_cost_matrix(m, n, seed);
  }
  // unit row marginals; rectangular instances scale the columns so the
  // marginal masses agree
  badmm::Vector a(cost.rows(), 1.0);
  badmm::Vector b(cost.cols(),
                  static_cast<double>(cost.rows()) / static_cast<double>(cost.cols()));
  return badmm::TransportProblem(std::move(cost), std::move(a), std::move(b));
}

double final_elapsed(const std::vector<badmm::TraceRecord>& trace) {
  return trace.empty() ? 0.0 : trace.back().elapsed_sec;
}

int run_solve(const SolveOpts& o) {
  const badmm::SolverConfig cfg = build_config(o.solver);
  const badmm::TransportProblem problem =
      build_transport_instance(o.cost_file, o.m, o.n, o.seed);
  const badmm::transport::SolveResult result = badmm::transport::solve(problem, cfg);
  const double objective = result.trace.back().objective;
  if (!o.solver.trace_out.empty()) badmm::io::write_trace_csv(result.trace, o.solver.trace_out);
  std::printf("variant=%s n=%zu iters=%d objective=%.9g time=%.3fs reason=%s\n",
              o.solver.variant.c_str(), problem.cols(), result.state.iter, objective,
              final_elapsed(result.trace), badmm::to_string(result.reason).c_str());
  if (o.check_oracle) {
    const badmm::oracle::AssignmentSolution truth =
        badmm::oracle::assignment_bruteforce(problem.cost);
    std::printf("oracle=%.9g gap=%.9g\n", truth.value, objective - truth.value);
  }
  return 0;
}

struct CompareRow {
  std::uint64_t seed;
  std::string variant;
  int iters;
  double elapsed;
  double objective;
};

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size();
  if (k == 0) return 0.0;
  if (k % 2 == 1) return values[k / 2];
  return 0.5 * (values[k / 2 - 1] + values[k / 2]);
}

int run_compare(const CompareOpts& o) {
  if (o.seeds < 1) throw std::invalid_argument("--seeds must be >= 1");
  if (o.n == 0) throw std::invalid_argument("pass --n to size the instances");
  const std::uint64_t m = (o.m == 0) ? o.n : o.m;
  const std::size_t count = static_cast<std::size_t>(o.seeds);

  std::vector<CompareRow> rows(2 * count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      const std::uint64_t seed = o.seed + k;
      const badmm::TransportProblem problem = build_transport_instance("", m, o.n, seed);
      for (int which = 0; which < 2; ++which) {
        SolverOpts variant_opts = o.solver;
        variant_opts.variant = (which == 0) ? "badmm-kl" : "admm";
        const badmm::SolverConfig cfg = build_config(variant_opts);
        const badmm::transport::SolveResult result = badmm::transport::solve(problem, cfg);
        rows[2 * k + which] =
            CompareRow{seed, variant_opts.variant, result.state.iter,
                       final_elapsed(result.trace), result.trace.back().objective};
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, count));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::printf("seed,variant,iters,elapsed_sec,objective\n");
  for (const CompareRow& row : rows) {
    std::printf("%llu,%s,%d,%s,%s\n", static_cast<unsigned long long>(row.seed),
                row.variant.c_str(), row.iters, badmm::io::format_g17(row.elapsed).c_str(),
                badmm::io::format_g17(row.objective).c_str());
  }
  for (int which = 0; which < 2; ++which) {
    std::vector<double> iters, times, objectives;
    for (std::size_t k = 0; k < count; ++k) {
      const CompareRow& row = rows[2 * k + which];
      iters.push_back(row.iters);
      times.push_back(row.elapsed);
      objectives.push_back(row.objective);
    }
    std::printf("median,%s,%s,%s,%s\n", (which == 0) ? "badmm-kl" : "admm",
                badmm::io::format_g17(median(iters)).c_str(),
                badmm::io::format_g17(median(times)).c_str(),
                badmm::io::format_g17(median(objectives)).c_str());
  }
  return 0;
}

int run_logistic(const LogisticOpts& o) {
  badmm::SolverConfig cfg = build_config(o.solver);
  badmm::logistic::Problem problem = [&] {
    if (!o.data_file.empty()) {
      badmm::io::LabeledData data = badmm::io::load_labeled_csv(o.data_file);
      return badmm::logistic::Problem(std::move(data.features), std::move(data.labels),
                                      o.lambda);
    }
    return badmm::logistic::synthetic_fixture(o.n_samples, o.dim, o.lambda, o.seed);
  }();
  const badmm::logistic::SolveResult result = badmm::logistic::solve(problem, cfg);
  if (!o.solver.trace_out.empty()) badmm::io::write_trace_csv(result.trace, o.solver.trace_out);
  std::printf("variant=logistic n=%zu iters=%d objective=%.9g time=%.3fs reason=%s\n",
              problem.dim(), result.state.iter, result.trace.back().objective,
              final_elapsed(result.trace), badmm::to_string(result.reason).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bregman and Euclidean ADMM for mass transportation and l1 logistic regression"};
  app.require_subcommand(1);

  SolveOpts solve_opts;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one transport instance");
  solve_cmd->add_option("--m", solve_opts.m, "rows (defaults to --n)");
  solve_cmd->add_option("--n", solve_opts.n, "columns");
  solve_cmd->add_option("--seed", solve_opts.seed, "cost matrix seed")->capture_default_str();
  solve_cmd->add_option("--cost-file", solve_opts.cost_file,
                        "load the cost matrix (.csv or .bin) instead of generating it");
  solve_cmd->add_flag("--check-oracle", solve_opts.check_oracle,
                      "compare against the exact assignment optimum (n <= 8)");
  add_solver_flags(solve_cmd, solve_opts.solver, true);

  CompareOpts compare_opts;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run both variants across seeds on identical instances");
  compare_cmd->add_option("--m", compare_opts.m, "rows (defaults to --n)");
  compare_cmd->add_option("--n", compare_opts.n, "columns");
  compare_cmd->add_option("--seed", compare_opts.seed, "first seed")->capture_default_str();
  compare_cmd->add_option("--seeds", compare_opts.seeds, "number of seeds")
      ->capture_default_str();
  add_solver_flags(compare_cmd, compare_opts.solver, false);

  LogisticOpts logistic_opts;
  CLI::App* logistic_cmd =
      app.add_subcommand("logistic", "l1-regularized logistic regression via consensus");
  logistic_cmd->add_option("--data", logistic_opts.data_file,
                           "labeled CSV (features..., label +1/-1)");
  logistic_cmd->add_option("--n-samples", logistic_opts.n_samples, "synthetic sample count")
      ->capture_default_str();
  logistic_cmd->add_option("--dim", logistic_opts.dim, "synthetic feature dimension")
      ->capture_default_str();
  logistic_cmd->add_option("--seed", logistic_opts.seed, "synthetic data seed")
      ->capture_default_str();
  logistic_cmd->add_option("--lambda", logistic_opts.lambda, "l1 weight")
      ->capture_default_str();
  add_solver_flags(logistic_cmd, logistic_opts.solver, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) {
      if (!solve_opts.solver.config_file.empty()) {
        apply_config_file(solve_cmd, solve_opts.solver.config_file);
      }
      return run_solve(solve_opts);
    }
    if (compare_cmd->parsed()) {
      if (!compare_opts.solver.config_file.empty()) {
        apply_config_file(compare_cmd, compare_opts.solver.config_file);
      }
      return run_compare(compare_opts);
    }
    if (logistic_cmd->parsed()) {
      if (!logistic_opts.solver.config_file.empty()) {
        apply_config_file(logistic_cmd, logistic_opts.solver.config_file);
      }
      return run_logistic(logistic_opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "gppde/bench.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gppde/errors.hpp"

namespace gppde {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CollocationSet initial_set(const ProblemSpec& problem, const RunConfig& config) {
  CollocationSet cs;
  for (const Point& p :
       sample_interior(problem.domain, config.initial_interior, 0)) {
    cs.add_interior(problem.make_interior_entry(p));
  }
  for (const auto& [p, face] :
       sample_boundary(problem.domain, config.initial_boundary, 0)) {
    cs.add_boundary(problem.make_boundary_entry(p, face));
  }
  return cs;
}

// Evaluation grid skips are far from the training/pool skip ranges.
std::vector<Point> eval_grid(const Domain& domain, int n) {
  return sample_interior(domain, n, 20'000'000);
}

}  // namespace

double relative_mse_percent(const Eigen::VectorXd& predictions,
                            const Eigen::VectorXd& truth) {
  if (predictions.size() != truth.size())
    throw DimensionMismatchError(static_cast<int>(truth.size()),
                                 static_cast<int>(predictions.size()));
  if (truth.size() == 0) throw UndefinedMetricError("empty evaluation grid");
  const double den = truth.squaredNorm();
  if (den <= 0.0)
    throw UndefinedMetricError("relative MSE undefined for all-zero truth");
  return 100.0 * (predictions - truth).squaredNorm() / den;
}

ProblemSpec problem_by_name(const std::string& case_name) {
  if (case_name == "poisson-disk") return make_poisson_disk();
  if (case_name == "poisson-3d") return make_poisson_3d();
  if (case_name == "heat-1d") return make_heat_1d();
  throw ConfigError("unknown case '" + case_name + "'");
}

std::uint64_t direct_memory_estimate(std::size_t n) {
  // Dense K plus factorization copy plus weights/rhs.
  return 16ull * n * n + 4ull * 8ull * n;
}

std::uint64_t sdd_memory_estimate(std::size_t n) {
  // One row buffer and the alpha / velocity / average / probe / rhs vectors.
  return 8ull * n + 5ull * 8ull * n;
}

RunReport run_case(const ProblemSpec& problem, const RunConfig& config,
                   const std::string& grid_out) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.case_name = problem.name;

  ALResult result =
      active_learning_loop(problem, initial_set(problem, config),
                           config.kernel, config.effective_lambda(),
                           config.al, config.sdd);

  const std::vector<Point> grid =
      eval_grid(problem.domain, config.eval_grid_size);
  Eigen::VectorXd pred(grid.size()), truth(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    pred[i] = result.model.mean(grid[i]);
    truth[i] = problem.ground_truth ? problem.ground_truth(grid[i]) : 0.0;
  }
  if (problem.ground_truth) {
    report.relative_mse_percent = relative_mse_percent(pred, truth);
  }

  report.n_interior = result.colset.n_interior();
  report.n_boundary = result.colset.n_boundary();
  report.history = std::move(result.history);
  report.peak_memory_estimate_bytes =
      result.model.system()->has_dense()
          ? direct_memory_estimate(result.colset.size())
          : sdd_memory_estimate(result.colset.size());

  // Boundary-row residuals of the fitted weights.
  {
    const GramSystem& sys = *result.model.system();
    const Eigen::VectorXd g = sys.rhs();
    double worst = 0.0;
    for (std::size_t j = result.colset.n_interior(); j < sys.size(); ++j) {
      const double fit = sys.row(j).dot(result.model.weights()) -
                         sys.lambda() * result.model.weights()[j];
      worst = std::max(worst, std::abs(fit - g[j]));
    }
    report.max_boundary_residual = worst;
    report.clamped_variance_count = result.model.clamped_variance_count();
  }

  if (!grid_out.empty()) {
    const Eigen::VectorXd var = result.model.variance_exact_batch(grid);
    std::ostringstream out;
    const int d = problem.domain.dim();
    for (int r = 0; r < d; ++r) out << "x" << r + 1 << ",";
    out << "mean,std,truth,abs_error\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (int r = 0; r < d; ++r) out << fmt17(grid[i][r]) << ",";
      out << fmt17(pred[i]) << "," << fmt17(std::sqrt(std::max(var[i], 0.0)))
          << "," << fmt17(truth[i]) << "," << fmt17(std::abs(pred[i] - truth[i]))
          << "\n";
    }
    write_text_atomically(grid_out, out.str());
    report.grid_dump_path = grid_out;
  }

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

std::vector<SweepRow> scalability_sweep(const ProblemSpec& problem,
                                        const RunConfig& config,
                                        const std::vector<std::size_t>& n_list,
                                        SweepMode mode) {
  constexpr std::size_t kDirectCap = 5000;
  constexpr std::size_t kSddCap = 50000;
  std::vector<SweepRow> rows;

  const std::vector<Point> grid =
      eval_grid(problem.domain, config.eval_grid_size);
  Eigen::VectorXd truth(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    truth[i] = problem.ground_truth(grid[i]);

  for (std::size_t n : n_list) {
    if ((mode == SweepMode::DirectNoAL && n > kDirectCap) ||
        (mode == SweepMode::SddWithAL && n > kSddCap)) {
      std::cerr << "sweep: skipping N=" << n << " (beyond mode cap)\n";
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Eigen::VectorXd pred(grid.size());

    if (mode == SweepMode::DirectNoAL) {
      // Random Sobol collocation at the requested budget, no refinement.
      const std::size_t n_bnd = std::max<std::size_t>(
          1, static_cast<std::size_t>(config.al.boundary_fraction * n));
      const std::size_t n_int = n - n_bnd;
      CollocationSet cs;
      for (const Point& p : sample_interior(problem.domain, n_int, 0))
        cs.add_interior(problem.make_interior_entry(p));
      for (const auto& [p, face] : sample_boundary(problem.domain, n_bnd, 0))
        cs.add_boundary(problem.make_boundary_entry(p, face));
      auto sys = std::make_shared<GramSystem>(GramSystem::assemble_dense(
          std::move(cs), config.kernel, config.effective_lambda(), kDirectCap));
      PosteriorModel model(sys, solve_direct(*sys));
      for (std::size_t i = 0; i < grid.size(); ++i) pred[i] = model.mean(grid[i]);
    } else {
      RunConfig scaled = config;
      // Grow the batch per iteration so large budgets stay within a
      // bounded number of refinement rounds.
      scaled.al.cluster_count =
          std::max(scaled.al.cluster_count, static_cast<int>(n / 16));
      scaled.al.pool_size = std::max(
          scaled.al.pool_size,
          static_cast<int>(5.0 * scaled.al.cluster_count / scaled.al.retain_fraction) + 1);
      const std::size_t initial = scaled.initial_interior + scaled.initial_boundary;
      scaled.al.max_iterations = std::max<int>(
          1, static_cast<int>((n - std::min(n, initial) + scaled.al.cluster_count - 1) /
                              scaled.al.cluster_count));
      ALResult result = active_learning_loop(
          problem, initial_set(problem, scaled), scaled.kernel,
          scaled.effective_lambda(), scaled.al, scaled.sdd);
      for (std::size_t i = 0; i < grid.size(); ++i)
        pred[i] = result.model.mean(grid[i]);
    }

    SweepRow row;
    row.n = n;
    row.relative_mse_percent = relative_mse_percent(pred, truth);
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    row.memory_estimate_bytes = mode == SweepMode::DirectNoAL
                                    ? direct_memory_estimate(n)
                                    : sdd_memory_estimate(n);
    rows.push_back(row);
  }
  return rows;
}

void write_text_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
  }
  fs::rename(tmp, target);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "N,rel_mse,wall_s,mem_bytes\n";
  for (const SweepRow& r : rows) {
    out << r.n << "," << fmt17(r.relative_mse_percent) << ","
        << fmt17(r.wall_seconds) << "," << r.memory_estimate_bytes << "\n";
  }
  return out.str();
}

std::string trace_csv(const ALHistory& history) {
  std::ostringstream out;
  out << "iter,N,mean_variance,rel_mse,wall_s\n";
  for (const ALIterationRecord& r : history.records) {
    out << r.iteration << "," << r.n_points << ","
        << fmt17(r.mean_probe_variance) << ","
        << (r.relative_mse_percent ? fmt17(*r.relative_mse_percent)
                                   : std::string("nan"))
        << "," << fmt17(r.wall_seconds) << "\n";
  }
  return out.str();
}

namespace {

int usage(std::ostream& out) {
  out << "usage: gppde <run|sweep|trace> <poisson-disk|poisson-3d|heat-1d>\n"
         "             [--seed S] [--config FILE] [--out FILE] [--check]\n"
         "             [--mode direct|sdd-al]   (sweep only)\n";
  return 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  try {
    if (args.size() < 2) return usage(std::cerr);
    const std::string command = args[0];
    const std::string case_name = args[1];
    if (command != "run" && command != "sweep" && command != "trace")
      return usage(std::cerr);

    RunConfig config;
    try {
      config = default_run_config(case_name);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return usage(std::cerr);
    }

    bool check = false;
    std::string out_path;
    std::string mode_str = "sdd-al";
    for (std::size_t i = 2; i < args.size(); ++i) {
      const std::string& a = args[i];
      auto next = [&]() -> const std::string& {
        if (i + 1 >= args.size()) throw ConfigError("missing value for " + a);
        return args[++i];
      };
      if (a == "--check") check = true;
      else if (a == "--seed") { config.seed = std::stoull(next()); config.apply_seed(); }
      else if (a == "--config") apply_overrides(config, parse_config_file(next()));
      else if (a == "--out") out_path = next();
      else if (a == "--mode") mode_str = next();
      else { std::cerr << "error: unknown flag '" << a << "'\n"; return usage(std::cerr); }
    }

    const ProblemSpec problem = problem_by_name(case_name);

    if (command == "run") {
      const RunReport report = run_case(problem, config, out_path);
      std::cout << "case: " << report.case_name << "\n"
                << "collocation points: " << report.n_interior << " interior + "
                << report.n_boundary << " boundary\n"
                << "relative MSE: " << report.relative_mse_percent << " %\n"
                << "wall time: " << report.wall_time_seconds << " s\n"
                << "memory estimate: " << report.peak_memory_estimate_bytes
                << " bytes\n"
                << "max boundary residual: " << report.max_boundary_residual
                << " (clamped variances: " << report.clamped_variance_count
                << ")\n";
      if (!report.grid_dump_path.empty())
        std::cout << "grid dump: " << report.grid_dump_path << "\n";
      if (check && report.relative_mse_percent > config.check_threshold_percent) {
        std::cout << "check: FAIL (threshold "
                  << config.check_threshold_percent << " %)\n";
        return 2;
      }
      if (check) std::cout << "check: PASS (threshold "
                           << config.check_threshold_percent << " %)\n";
      return 0;
    }

    if (command == "sweep") {
      SweepMode mode;
      if (mode_str == "direct") mode = SweepMode::DirectNoAL;
      else if (mode_str == "sdd-al") mode = SweepMode::SddWithAL;
      else { std::cerr << "error: unknown sweep mode '" << mode_str << "'\n"; return 1; }
      std::vector<std::size_t> n_list = {50, 100, 200, 400, 800};
      const std::string csv = sweep_csv(scalability_sweep(problem, config, n_list, mode));
      if (out_path.empty()) std::cout << csv;
      else write_text_atomically(out_path, csv);
      return 0;
    }

    // trace
    const RunReport report = run_case(problem, config, "");
    const std::string csv = trace_csv(report.history);
    if (out_path.empty()) std::cout << csv;
    else write_text_atomically(out_path, csv);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gppde

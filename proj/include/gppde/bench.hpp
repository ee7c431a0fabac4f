#ifndef GPPDE_BENCH_HPP_
#define GPPDE_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gppde/adapt.hpp"
#include "gppde/config.hpp"
#include "gppde/problem.hpp"

namespace gppde {

// 100 * sum (pred - truth)^2 / sum truth^2.  Throws UndefinedMetricError
// when the truth vector is identically zero.
double relative_mse_percent(const Eigen::VectorXd& predictions,
                            const Eigen::VectorXd& truth);

struct RunReport {
  std::string case_name;
  double relative_mse_percent = 0.0;
  std::size_t n_interior = 0;
  std::size_t n_boundary = 0;
  double wall_time_seconds = 0.0;
  std::uint64_t peak_memory_estimate_bytes = 0;
  ALHistory history;
  std::string grid_dump_path;  // empty when no dump was requested
  // Diagnostics: worst |K alpha - g| over boundary rows (how strongly the
  // fitted field violates the stated boundary data, e.g. under
  // inconsistent conditions), and the count of clamped negative variances.
  double max_boundary_residual = 0.0;
  std::int64_t clamped_variance_count = 0;
};

ProblemSpec problem_by_name(const std::string& case_name);

// Runs the refinement loop for one case, evaluates on eval_grid_size Sobol
// interior points, and optionally dumps the evaluation grid
// (coordinates..., mean, std, truth, abs_error) to `grid_out`.
RunReport run_case(const ProblemSpec& problem, const RunConfig& config,
                   const std::string& grid_out = "");

enum class SweepMode { DirectNoAL, SddWithAL };

struct SweepRow {
  std::size_t n;
  double relative_mse_percent;
  double wall_seconds;
  std::uint64_t memory_estimate_bytes;
};

// Error/cost table over collocation budgets.  Direct mode solves random
// Sobol point sets by Cholesky (capped at 5,000 points); SDD mode runs the
// full adaptive pipeline (capped at 50,000).  Budgets beyond a cap are
// skipped.
std::vector<SweepRow> scalability_sweep(const ProblemSpec& problem,
                                        const RunConfig& config,
                                        const std::vector<std::size_t>& n_list,
                                        SweepMode mode);

// Analytic allocated-structure byte counts (not RSS): the direct path
// stores the dense system, the stochastic path a row buffer plus O(N)
// vectors.
std::uint64_t direct_memory_estimate(std::size_t n);
std::uint64_t sdd_memory_estimate(std::size_t n);

// Writes via a temp file then renames, so readers never see partial rows.
void write_text_atomically(const std::string& path, const std::string& content);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string trace_csv(const ALHistory& history);

// `run | sweep | trace <case>` with --seed/--config/--out/--check flags.
// Returns 0 on success, 1 on usage or runtime errors, 2 when --check finds
// the relative MSE above the case threshold.
int cli_main(const std::vector<std::string>& args);

}  // namespace gppde

#endif  // GPPDE_BENCH_HPP_

#ifndef GPPDE_CONFIG_HPP_
#define GPPDE_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "gppde/adapt.hpp"
#include "gppde/kernel.hpp"
#include "gppde/solvers.hpp"

namespace gppde {

// All knobs of one benchmark run.  Defaults are per case; a config file
// (flat key = value lines grouped into [kernel] / [gram] / [sdd] / [al] /
// [case] sections) overrides them selectively.
struct RunConfig {
  KernelParams kernel;
  double lambda = 0.0;  // 0 selects default_lambda(kernel)
  SDDConfig sdd;
  ALConfig al;
  int initial_interior = 4;
  int initial_boundary = 1;
  int eval_grid_size = 2000;
  double check_threshold_percent = 5.0;  // --check gate on relative MSE
  std::uint64_t seed = 20240001;

  double effective_lambda() const;
  // Master seed fan-out: keeps the SDD and AL streams distinct.
  void apply_seed();
};

RunConfig default_run_config(const std::string& case_name);

// Parsed [section] key = value file; '#' starts a comment.
using ConfigMap = std::map<std::string, std::string>;  // "section.key"
ConfigMap parse_config_file(const std::string& path);

// Applies recognized keys from `overrides` on top of `config`.
void apply_overrides(RunConfig& config, const ConfigMap& overrides);

}  // namespace gppde

#endif  // GPPDE_CONFIG_HPP_

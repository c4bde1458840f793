#pragma once

// Experiment orchestration behind the CLI: run solvers and verifiers over
// instances and emit deterministic CSV reports.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "distfl/instance.hpp"
#include "distfl/select.hpp"

namespace distfl {

struct ExperimentConfig {
  std::string instance_path;           // mutually exclusive with generate
  std::optional<GenParams> generate;   // per-run seed overrides GenParams::seed
  Rat epsilon = Rat(1, 2);
  std::vector<uint64_t> seeds = {0};
  std::vector<std::string> solvers = {"distributed"};  // greedy, optimal
  std::vector<std::string> verifiers;  // fact1 lemma1 lemma2 dualfit bracket
  std::string out_path;
  bool conservative_rounds = false;
  long round_cap = 0;  // 0 = default
  std::string trace_dir;     // when set, per-seed trace + round-log files
  std::string solution_dir;  // when set, per-seed solution files
};

// Empty when the config is usable.
std::vector<std::string> validate_config(const ExperimentConfig& config);

// Report CSV header, one row per (instance, seed):
// instance,seed,epsilon,cost_dist,cost_greedy,cost_opt,ratio_dist,
// ratio_greedy,phases,rounds,max_bits,fact1,lemma1,lemma2,dualfit,bracket
// Costs are exact rationals; ratio cells carry the exact value plus a
// 6-place decimal marked with '~'. Verifier cells are 1/0, blank when not
// requested. Returns nonzero when any verifier reported a violation or a run
// errored; violations are printed as VIOLATION lines to `log`.
int cmd_run(const ExperimentConfig& config, std::ostream& log);

struct SelectStatsConfig {
  int num_facilities = 4;
  int num_clients = 8;
  long edges = 16;
  long trials = 1;
  uint64_t seed = 0;
  std::string out_path;
};

// Per-iteration stats CSV over seeded trials:
// trial,iteration,n_t,F_t,C_t,E_t,heavy,removed_clients,removed_edges
// plus a summary (iteration-count quantiles, first-iteration mean removals
// vs. the analytic lower bounds) on `log`. Returns 0.
int cmd_select_stats(const SelectStatsConfig& config, std::ostream& log);

// Per-trial seed derivation shared by cmd_select_stats and tests.
uint64_t trial_seed(uint64_t base_seed, long trial);

}  // namespace distfl

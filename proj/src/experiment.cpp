#include "distfl/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "distfl/oracles.hpp"

namespace distfl {

namespace {

bool has(const std::vector<std::string>& list, const std::string& item) {
  return std::find(list.begin(), list.end(), item) != list.end();
}

const std::vector<std::string> kSolvers = {"distributed", "greedy", "optimal"};
const std::vector<std::string> kVerifiers = {"fact1", "lemma1", "lemma2",
                                             "dualfit", "bracket"};

std::string ratio_cell(const Rat& num, const Rat& den) {
  const Rat ratio = num / den;
  char approx[32];
  std::snprintf(approx, sizeof(approx), "%.6f", to_double(ratio));
  return format_rat(ratio) + "~" + approx;
}

}  // namespace

std::vector<std::string> validate_config(const ExperimentConfig& config) {
  std::vector<std::string> problems;
  if (config.epsilon <= 0) problems.push_back("epsilon must be positive");
  if (config.instance_path.empty() == !config.generate.has_value())
    problems.push_back("exactly one of --instance and --generate is required");
  if (config.solvers.empty()) problems.push_back("select at least one solver");
  for (const auto& s : config.solvers)
    if (!has(kSolvers, s)) problems.push_back("unknown solver '" + s + "'");
  for (const auto& v : config.verifiers)
    if (!has(kVerifiers, v)) problems.push_back("unknown verifier '" + v + "'");
  if (!config.verifiers.empty() && !has(config.solvers, "distributed"))
    problems.push_back("verifiers need the distributed solver");
  if (config.seeds.empty()) problems.push_back("need at least one seed");
  if (config.out_path.empty()) problems.push_back("need an output path");
  return problems;
}

int cmd_run(const ExperimentConfig& config, std::ostream& log) {
  {
    auto problems = validate_config(config);
    if (!problems.empty()) {
      for (const auto& p : problems) log << "config error: " << p << "\n";
      return 2;
    }
  }

  std::ofstream out(config.out_path);
  if (!out) {
    log << "cannot write report to " << config.out_path << "\n";
    return 2;
  }
  out << "instance,seed,epsilon,cost_dist,cost_greedy,cost_opt,ratio_dist,"
         "ratio_greedy,phases,rounds,max_bits,fact1,lemma1,lemma2,dualfit,"
         "bracket\n";

  const bool want_dist = has(config.solvers, "distributed");
  const bool want_greedy = has(config.solvers, "greedy");
  const bool want_opt = has(config.solvers, "optimal");

  std::optional<Instance> file_instance;
  std::string instance_label;
  if (!config.instance_path.empty()) {
    try {
      file_instance = read_instance(config.instance_path);
    } catch (const std::exception& e) {
      log << e.what() << "\n";
      return 2;
    }
    instance_label = config.instance_path;
  } else {
    const GenParams& g = *config.generate;
    std::ostringstream os;
    os << "gen(" << g.num_facilities << "," << g.num_clients << ","
       << g.grid_size << "," << g.f_min << "," << g.f_max << ")";
    instance_label = os.str();
  }

  int exit_code = 0;
  for (uint64_t seed : config.seeds) {
    Instance inst;
    try {
      if (file_instance) {
        inst = *file_instance;
      } else {
        GenParams g = *config.generate;
        g.seed = seed;
        inst = generate_instance(g);
      }
    } catch (const std::exception& e) {
      log << "instance error (seed " << seed << "): " << e.what() << "\n";
      exit_code = 1;
      continue;
    }

    std::string cost_dist, cost_greedy, cost_opt, ratio_dist, ratio_greedy;
    std::string phases, rounds, max_bits;
    std::string flags[5];
    std::optional<Rat> dist_value, greedy_value, opt_value;

    try {
      std::optional<DistResult> dist;
      if (want_dist) {
        DistConfig dc;
        dc.epsilon = config.epsilon;
        dc.seed = seed;
        dc.round_cap = config.round_cap;
        dc.conservative_rounds = config.conservative_rounds;
        dist = solve_distributed(inst, dc);
        dist_value = solution_cost(dist->solution, inst);
        cost_dist = format_rat(*dist_value);
        phases = std::to_string(dist->phase_count);
        rounds = std::to_string(dist->round_count);
        max_bits = std::to_string(dist->max_bits);
        if (!config.trace_dir.empty()) {
          std::filesystem::create_directories(config.trace_dir);
          const auto base = std::filesystem::path(config.trace_dir);
          write_trace(dist->trace, (base / ("trace_" + std::to_string(seed) + ".txt")).string());
          write_round_log_csv(dist->round_logs,
                              (base / ("rounds_" + std::to_string(seed) + ".csv")).string());
        }
        if (!config.solution_dir.empty()) {
          std::filesystem::create_directories(config.solution_dir);
          write_solution(dist->solution,
                         (std::filesystem::path(config.solution_dir) /
                          ("solution_" + std::to_string(seed) + ".txt")).string());
        }
      }
      if (want_greedy) {
        auto greedy = greedy_fl_sequential(inst);
        greedy_value = solution_cost(greedy.solution, inst);
        cost_greedy = format_rat(*greedy_value);
      }
      if (want_opt) {
        auto opt = brute_force_opt(inst);
        opt_value = solution_cost(opt, inst);
        cost_opt = format_rat(*opt_value);
      }
      if (dist_value && opt_value) ratio_dist = ratio_cell(*dist_value, *opt_value);
      if (greedy_value && opt_value)
        ratio_greedy = ratio_cell(*greedy_value, *opt_value);

      if (dist) {
        for (size_t v = 0; v < kVerifiers.size(); ++v) {
          if (!has(config.verifiers, kVerifiers[v])) continue;
          std::vector<VerifierViolation> violations;
          bool pass = true;
          if (kVerifiers[v] == "fact1") {
            violations = verify_fact1(dist->trace, inst);
          } else if (kVerifiers[v] == "lemma1") {
            violations = verify_lemma1(dist->trace, inst, config.epsilon);
          } else if (kVerifiers[v] == "lemma2") {
            violations = verify_lemma2(dist->trace, inst, config.epsilon);
          } else if (kVerifiers[v] == "dualfit") {
            violations = verify_dual_fitting(dist->trace, inst, config.epsilon);
          } else {  // bracket
            auto report = verify_cost_bracket(dist->trace, inst, config.epsilon);
            pass = report.pass;
            if (!pass)
              log << to_string(VerifierViolation{
                         "bracket", "seed=" + std::to_string(seed),
                         format_rat(report.cost),
                         "[" + format_rat(report.lower) + "," +
                             format_rat(report.upper) + "]"})
                  << "\n";
          }
          for (const auto& violation : violations) {
            pass = false;
            log << to_string(violation) << "\n";
          }
          flags[v] = pass ? "1" : "0";
          if (!pass) exit_code = 1;
        }
      }
    } catch (const std::exception& e) {
      log << "run error (seed " << seed << "): " << e.what() << "\n";
      exit_code = 1;
      continue;
    }

    out << instance_label << "," << seed << "," << format_rat(config.epsilon)
        << "," << cost_dist << "," << cost_greedy << "," << cost_opt << ","
        << ratio_dist << "," << ratio_greedy << "," << phases << "," << rounds
        << "," << max_bits;
    for (const auto& flag : flags) out << "," << flag;
    out << "\n";
  }
  return exit_code;
}

uint64_t trial_seed(uint64_t base_seed, long trial) {
  SplitMix64 mixer(base_seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(trial) + 1)));
  return mixer.next();
}

int cmd_select_stats(const SelectStatsConfig& config, std::ostream& log) {
  std::ofstream out(config.out_path);
  if (!out) {
    log << "cannot write stats to " << config.out_path << "\n";
    return 2;
  }
  const ContributionGraph graph = random_contribution_graph(
      config.num_facilities, config.num_clients, config.edges, config.seed);

  out << "trial,iteration,n_t,F_t,C_t,E_t,heavy,removed_clients,removed_edges\n";
  std::vector<long> iteration_counts;
  long first_removed_clients = 0, first_removed_edges = 0;
  for (long trial = 0; trial < config.trials; ++trial) {
    auto stats = facility_select(graph, trial_seed(config.seed, trial));
    iteration_counts.push_back(static_cast<long>(stats.size()));
    if (!stats.empty()) {
      first_removed_clients += stats.front().removed_clients;
      first_removed_edges += stats.front().removed_edges;
    }
    for (const auto& s : stats)
      out << trial << "," << s.iteration << "," << s.n_t << "," << s.f_t << ","
          << s.c_t << "," << s.e_t << "," << (s.heavy ? 1 : 0) << ","
          << s.removed_clients << "," << s.removed_edges << "\n";
  }

  std::sort(iteration_counts.begin(), iteration_counts.end());
  auto quantile = [&](double q) {
    if (iteration_counts.empty()) return 0L;
    size_t idx = static_cast<size_t>(q * (iteration_counts.size() - 1));
    return iteration_counts[idx];
  };
  const auto bounds = expected_removal_bounds(graph);
  char buffer[256];
  log << "graph: F=" << graph.num_facilities << " C=" << graph.num_clients
      << " E=" << graph.edges.size() << "\n";
  log << "iterations: median=" << quantile(0.5) << " p95=" << quantile(0.95)
      << " max=" << (iteration_counts.empty() ? 0 : iteration_counts.back())
      << "\n";
  if (config.trials > 0) {
    std::snprintf(buffer, sizeof(buffer),
                  "first-iteration means: clients=%.4f edges=%.4f",
                  static_cast<double>(first_removed_clients) / config.trials,
                  static_cast<double>(first_removed_edges) / config.trials);
    log << buffer << "\n";
    std::snprintf(buffer, sizeof(buffer),
                  "analytic lower bounds: clients=%s edges=%s sqrt_edges=%.4f",
                  format_rat(bounds.clients_lb).c_str(),
                  format_rat(bounds.edges_lb).c_str(), bounds.edges_sqrt_lb);
    log << buffer << "\n";
  }
  return 0;
}

}  // namespace distfl

// flsim: run facility-location solvers and verifiers over instances, or
// collect facility-selection shrinking statistics.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "distfl/experiment.hpp"

namespace {

std::vector<long> parse_long_list(const std::string& csv) {
  std::vector<long> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  return out;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed facility location simulator"};
  app.require_subcommand(1);

  // ---- run ----
  auto* run = app.add_subcommand("run", "solve instances and verify traces");
  std::string instance_path, generate_spec, epsilon = "1/2", seeds = "0";
  std::string solvers = "distributed", verify, out_path = "report.csv";
  std::string trace_dir, solution_dir;
  bool conservative = false;
  long round_cap = 0;
  run->add_option("--instance", instance_path, "instance file path");
  run->add_option("--generate", generate_spec,
                  "generator params F,C,GRID,FMIN,FMAX (per-seed instances)");
  run->add_option("--epsilon", epsilon, "growth parameter as P/Q");
  run->add_option("--seed", seeds, "comma-separated seed list");
  run->add_option("--solvers", solvers,
                  "subset of distributed,greedy,optimal");
  run->add_option("--verify", verify,
                  "verifiers: all or subset of fact1,lemma1,lemma2,dualfit,bracket");
  run->add_option("--out", out_path, "report CSV path");
  run->add_option("--trace-out", trace_dir, "directory for trace/round-log files");
  run->add_option("--solutions", solution_dir, "directory for solution files");
  run->add_flag("--conservative-rounds", conservative,
                "charge 2 extra rounds per global termination check");
  run->add_option("--round-cap", round_cap, "override the hard round cap");

  // ---- select-stats ----
  auto* sel = app.add_subcommand("select-stats",
                                 "facility-selection shrinking statistics");
  std::string graph_spec = "4,8,16";
  long trials = 100;
  long sel_seed = 0;
  std::string sel_out = "select_stats.csv";
  sel->add_option("--graph", graph_spec, "random graph params F,C,E");
  sel->add_option("--trials", trials, "number of seeded trials");
  sel->add_option("--seed", sel_seed, "base seed");
  sel->add_option("--out", sel_out, "stats CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      distfl::ExperimentConfig config;
      config.instance_path = instance_path;
      if (!generate_spec.empty()) {
        auto parts = parse_long_list(generate_spec);
        if (parts.size() != 5) {
          std::cerr << "--generate expects F,C,GRID,FMIN,FMAX\n";
          return 2;
        }
        distfl::GenParams g;
        g.num_facilities = static_cast<int>(parts[0]);
        g.num_clients = static_cast<int>(parts[1]);
        g.grid_size = static_cast<int>(parts[2]);
        g.f_min = parts[3];
        g.f_max = parts[4];
        config.generate = g;
      }
      config.epsilon = distfl::parse_rat(epsilon);
      config.seeds.clear();
      for (long s : parse_long_list(seeds))
        config.seeds.push_back(static_cast<uint64_t>(s));
      config.solvers = split_list(solvers);
      if (verify == "all")
        config.verifiers = {"fact1", "lemma1", "lemma2", "dualfit", "bracket"};
      else if (!verify.empty())
        config.verifiers = split_list(verify);
      config.out_path = out_path;
      config.conservative_rounds = conservative;
      config.round_cap = round_cap;
      config.trace_dir = trace_dir;
      config.solution_dir = solution_dir;
      return distfl::cmd_run(config, std::cout);
    }

    distfl::SelectStatsConfig config;
    auto parts = parse_long_list(graph_spec);
    if (parts.size() != 3) {
      std::cerr << "--graph expects F,C,E\n";
      return 2;
    }
    config.num_facilities = static_cast<int>(parts[0]);
    config.num_clients = static_cast<int>(parts[1]);
    config.edges = parts[2];
    config.trials = trials;
    config.seed = static_cast<uint64_t>(sel_seed);
    config.out_path = sel_out;
    return distfl::cmd_select_stats(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

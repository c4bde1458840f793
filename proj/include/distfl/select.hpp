#pragma once

// Global-knowledge simulator of the facility selection process: repeatedly
// draw a random value per facility, select the facilities whose draw beats
// all facilities they share a client with, and eliminate them together with
// their clients. Tracks per-iteration statistics for the shrinking-rate
// checks.

#include <cstdint>
#include <string>
#include <vector>

#include "distfl/rational.hpp"

namespace distfl {

struct ContributionGraph {
  int num_facilities = 0;
  int num_clients = 0;
  std::vector<std::pair<int, int>> edges;  // (facility, client)

  int num_nodes() const { return num_facilities + num_clients; }
};

// Indices of nodes with no incident edge; a valid graph has none.
std::vector<int> isolated_nodes(const ContributionGraph& graph);

// Facility graph: adjacency over facilities, edge iff two facilities share a
// client. Sorted, deduplicated.
std::vector<std::vector<int>> facility_graph(const ContributionGraph& graph);

struct IterationStats {
  int iteration = 0;  // 1-based
  long n_t = 0;       // nodes before removal
  long f_t = 0;
  long c_t = 0;
  long e_t = 0;
  bool heavy = false;
  long removed_clients = 0;
  long removed_edges = 0;
  long removed_facilities = 0;  // selected plus newly isolated
};

// One full elimination run; deterministic per seed. Iterates until no
// facility remains.
std::vector<IterationStats> facility_select(const ContributionGraph& graph,
                                            uint64_t seed);

struct SelectRun {
  std::vector<IterationStats> stats;
  std::vector<std::vector<int>> selected;  // facility ids per iteration
};
SelectRun facility_select_detailed(const ContributionGraph& graph, uint64_t seed);

// Edge-heavy iff e_t >= n_t * sqrt(n); compared exactly as e_t^2 >= n_t^2 * n.
bool classify_round_heavy(long e_t, long n_t, long n_original);

struct RemovalBounds {
  Rat clients_lb;        // |E|/|F|
  Rat edges_lb;          // max(|F|, |E|/|F|)
  double edges_sqrt_lb;  // sqrt(|E|)
};
RemovalBounds expected_removal_bounds(const ContributionGraph& graph);

struct ExactExpectedRemovals {
  Rat clients;  // sum_i deg(i)/(deg_F(i)+1)
  Rat edges;    // sum_i (sum_{j in N(i)} deg(j))/(deg_F(i)+1)
};
// Closed forms for the expected one-iteration removals; exact rationals.
ExactExpectedRemovals exact_expected_removals(const ContributionGraph& graph);

// Random bipartite graph with ~target_edges distinct edges and no isolated
// nodes (isolated nodes get one repair edge each). Deterministic per seed.
ContributionGraph random_contribution_graph(int num_facilities, int num_clients,
                                            long target_edges, uint64_t seed);

}  // namespace distfl

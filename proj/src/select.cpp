#include "distfl/select.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "distfl/message.hpp"
#include "distfl/rng.hpp"

namespace distfl {

namespace {

struct Adjacency {
  std::vector<std::vector<int>> fac_clients;
  std::vector<std::vector<int>> client_facs;
};

Adjacency build_adjacency(const ContributionGraph& g) {
  Adjacency adj;
  adj.fac_clients.resize(g.num_facilities);
  adj.client_facs.resize(g.num_clients);
  for (const auto& [f, c] : g.edges) {
    if (f < 0 || f >= g.num_facilities || c < 0 || c >= g.num_clients)
      throw std::invalid_argument("edge endpoint out of range");
    adj.fac_clients[f].push_back(c);
    adj.client_facs[c].push_back(f);
  }
  return adj;
}

}  // namespace

std::vector<int> isolated_nodes(const ContributionGraph& graph) {
  Adjacency adj = build_adjacency(graph);
  std::vector<int> out;
  for (int i = 0; i < graph.num_facilities; ++i)
    if (adj.fac_clients[i].empty()) out.push_back(i);
  for (int j = 0; j < graph.num_clients; ++j)
    if (adj.client_facs[j].empty()) out.push_back(graph.num_facilities + j);
  return out;
}

std::vector<std::vector<int>> facility_graph(const ContributionGraph& graph) {
  Adjacency adj = build_adjacency(graph);
  std::vector<std::set<int>> nbr(graph.num_facilities);
  for (int j = 0; j < graph.num_clients; ++j)
    for (int a : adj.client_facs[j])
      for (int b : adj.client_facs[j])
        if (a != b) nbr[a].insert(b);
  std::vector<std::vector<int>> out(graph.num_facilities);
  for (int i = 0; i < graph.num_facilities; ++i)
    out[i].assign(nbr[i].begin(), nbr[i].end());
  return out;
}

SelectRun facility_select_detailed(const ContributionGraph& graph, uint64_t seed) {
  if (!isolated_nodes(graph).empty())
    throw std::invalid_argument("contribution graph has isolated nodes");

  Adjacency adj = build_adjacency(graph);
  const int nf = graph.num_facilities;
  const int nc = graph.num_clients;
  const long n_original = graph.num_nodes();
  const int draw_bits = MessageWidths::for_nodes(graph.num_nodes()).draw_bits;

  std::vector<SplitMix64> streams;
  streams.reserve(nf);
  for (int i = 0; i < nf; ++i) streams.push_back(node_stream(seed, 2, i));

  std::vector<bool> fac_alive(nf, true), client_alive(nc, true);
  std::vector<long> fac_deg(nf, 0), client_deg(nc, 0);
  long alive_f = nf, alive_c = nc, alive_e = 0;
  for (int i = 0; i < nf; ++i) fac_deg[i] = static_cast<long>(adj.fac_clients[i].size());
  for (int j = 0; j < nc; ++j) client_deg[j] = static_cast<long>(adj.client_facs[j].size());
  for (long d : fac_deg) alive_e += d;

  using DrawKey = std::pair<uint64_t, int>;
  SelectRun run;

  for (int iteration = 1; alive_f > 0; ++iteration) {
    IterationStats stats;
    stats.iteration = iteration;
    stats.f_t = alive_f;
    stats.c_t = alive_c;
    stats.e_t = alive_e;
    stats.n_t = alive_f + alive_c;
    stats.heavy = classify_round_heavy(alive_e, stats.n_t, n_original);

    std::vector<DrawKey> draw(nf, {0, -1});
    for (int i = 0; i < nf; ++i)
      if (fac_alive[i]) draw[i] = {streams[i].bits(draw_bits), i};

    // relay maximum per client, then a facility is selected iff it holds the
    // maximum at each of its clients; that is exactly "beats every facility
    // sharing a client with it"
    std::vector<DrawKey> client_max(nc, {0, -1});
    for (int j = 0; j < nc; ++j) {
      if (!client_alive[j]) continue;
      for (int i : adj.client_facs[j])
        if (fac_alive[i] && draw[i] > client_max[j]) client_max[j] = draw[i];
    }
    std::vector<int> selected;
    for (int i = 0; i < nf; ++i) {
      if (!fac_alive[i]) continue;
      bool is_max = true;
      for (int j : adj.fac_clients[i]) {
        if (!client_alive[j]) continue;
        if (client_max[j] != draw[i]) {
          is_max = false;
          break;
        }
      }
      if (is_max) selected.push_back(i);
    }

    // eliminate selected facilities, their clients, and all incident edges
    std::vector<int> doomed_clients;
    std::vector<char> is_selected(nf, 0);
    for (int i : selected) {
      is_selected[i] = 1;
      fac_alive[i] = false;
      --alive_f;
      ++stats.removed_facilities;
      for (int j : adj.fac_clients[i])
        if (client_alive[j]) {
          client_alive[j] = false;
          doomed_clients.push_back(j);
        }
    }
    for (int j : doomed_clients) {
      --alive_c;
      ++stats.removed_clients;
      for (int i : adj.client_facs[j])
        if (fac_alive[i] || is_selected[i]) {
          ++stats.removed_edges;
          --alive_e;
          if (fac_alive[i] && --fac_deg[i] == 0) {
            // client removal isolated this facility; drop it as well
            fac_alive[i] = false;
            --alive_f;
            ++stats.removed_facilities;
          }
        }
    }

    run.stats.push_back(stats);
    run.selected.push_back(std::move(selected));
  }
  return run;
}

std::vector<IterationStats> facility_select(const ContributionGraph& graph,
                                            uint64_t seed) {
  return facility_select_detailed(graph, seed).stats;
}

bool classify_round_heavy(long e_t, long n_t, long n_original) {
  const unsigned __int128 lhs =
      static_cast<unsigned __int128>(e_t) * static_cast<unsigned __int128>(e_t);
  const unsigned __int128 rhs = static_cast<unsigned __int128>(n_t) *
                                static_cast<unsigned __int128>(n_t) *
                                static_cast<unsigned __int128>(n_original);
  return lhs >= rhs;
}

RemovalBounds expected_removal_bounds(const ContributionGraph& graph) {
  if (graph.num_facilities == 0)
    throw std::invalid_argument("bounds need at least one facility");
  RemovalBounds b;
  const long e = static_cast<long>(graph.edges.size());
  b.clients_lb = Rat(e, graph.num_facilities);
  b.edges_lb = std::max(Rat(graph.num_facilities), b.clients_lb);
  b.edges_sqrt_lb = std::sqrt(static_cast<double>(e));
  return b;
}

ExactExpectedRemovals exact_expected_removals(const ContributionGraph& graph) {
  Adjacency adj = build_adjacency(graph);
  auto gf = facility_graph(graph);
  ExactExpectedRemovals out;
  out.clients = 0;
  out.edges = 0;
  for (int i = 0; i < graph.num_facilities; ++i) {
    const long deg_f_plus_1 = static_cast<long>(gf[i].size()) + 1;
    out.clients += Rat(static_cast<long>(adj.fac_clients[i].size()), deg_f_plus_1);
    long edge_mass = 0;
    for (int j : adj.fac_clients[i])
      edge_mass += static_cast<long>(adj.client_facs[j].size());
    out.edges += Rat(edge_mass, deg_f_plus_1);
  }
  return out;
}

ContributionGraph random_contribution_graph(int num_facilities, int num_clients,
                                            long target_edges, uint64_t seed) {
  if (num_facilities < 1 || num_clients < 1)
    throw std::invalid_argument("graph needs both sides nonempty");
  const long max_edges = static_cast<long>(num_facilities) * num_clients;
  if (target_edges > max_edges)
    throw std::invalid_argument("more edges requested than the biclique has");

  SplitMix64 rng(seed ^ 0x1f3d5b79a2c4e6f8ULL);
  std::set<std::pair<int, int>> edges;
  while (static_cast<long>(edges.size()) < target_edges)
    edges.insert({static_cast<int>(rng.below(num_facilities)),
                  static_cast<int>(rng.below(num_clients))});

  std::vector<long> fac_deg(num_facilities, 0), client_deg(num_clients, 0);
  for (const auto& [f, c] : edges) {
    ++fac_deg[f];
    ++client_deg[c];
  }
  for (int i = 0; i < num_facilities; ++i)
    if (fac_deg[i] == 0) {
      const int c = static_cast<int>(rng.below(num_clients));
      edges.insert({i, c});
      ++client_deg[c];
    }
  for (int j = 0; j < num_clients; ++j)
    if (client_deg[j] == 0) edges.insert({static_cast<int>(rng.below(num_facilities)), j});

  ContributionGraph g;
  g.num_facilities = num_facilities;
  g.num_clients = num_clients;
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

}  // namespace distfl

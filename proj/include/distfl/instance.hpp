#pragma once

// Problem instances: bipartite metric facility location with exact rational
// costs, normalized so the smallest non-zero cost is exactly 1.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "distfl/rational.hpp"

namespace distfl {

struct Instance {
  std::vector<Rat> opening_cost;                 // f_i, indexed by facility id
  std::vector<std::vector<Rat>> connection_cost; // [facility][client]
  int bit_width = 0;                             // B: costs fit in B bits as unit multiples

  int num_facilities() const { return static_cast<int>(opening_cost.size()); }
  int num_clients() const {
    return connection_cost.empty() ? 0 : static_cast<int>(connection_cost[0].size());
  }
  int num_nodes() const { return num_facilities() + num_clients(); }

  bool operator==(const Instance& other) const = default;
};

struct Solution {
  std::set<int> open;           // open facility ids
  std::vector<int> assignment;  // client -> facility id, -1 = unassigned

  bool operator==(const Solution& other) const = default;
};

enum class ViolationKind {
  EmptySide,          // no facilities or no clients
  NegativeCost,
  NotNormalized,      // smallest non-zero cost != 1
  MetricViolation,    // quadrilateral inequality broken
  BitWidthExceeded,
};

struct Violation {
  ViolationKind kind;
  std::vector<int> where;  // witnessing indices, meaning depends on kind
  std::string detail;
};

std::string to_string(const Violation& v);

// Returns every violated instance invariant; empty means valid.
std::vector<Violation> validate_instance(const Instance& inst);

// Divides all costs by the smallest non-zero cost. Throws on all-zero input.
Instance normalize(const Instance& inst);

// Default message/cost bit budget for an instance with n nodes.
int default_bit_width(int num_nodes);

struct GenParams {
  int num_facilities = 1;
  int num_clients = 1;
  int grid_size = 1;        // coordinates are drawn from [0, grid_size)^2
  long f_min = 0;
  long f_max = 0;
  uint64_t seed = 0;
};

// Seeded generator: integer grid placements, ceil(Euclidean) connection costs
// (ceiling preserves the quadrilateral inequality), uniform opening costs,
// then normalized. Deterministic in its arguments. Client positions avoid
// facility positions whenever the grid is large enough; coincident
// facility/client points would produce zero-cost edges, which break the
// discrete-phase payment analysis (see oracles verifiers).
Instance generate_instance(const GenParams& params);

// Exact objective value. Throws if the solution violates its invariants
// against the instance.
Rat solution_cost(const Solution& sol, const Instance& inst);

// Line-oriented instance files:
//   FL v1 <numF> <numC> <bit_width>
//   F <id> <f_i>
//   C <id> <c_i1> <c_i2> ...
// with costs as exact "p/q" or integer tokens. Loading validates all
// invariants and throws on any violation.
Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);

// Solution files: "OPEN <id> ..." then one "ASSIGN <client> <facility>" line
// per client.
Solution read_solution(const std::string& path, const Instance& inst);
void write_solution(const Solution& sol, const std::string& path);

}  // namespace distfl

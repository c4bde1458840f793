#include "distfl/instance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "distfl/rng.hpp"

namespace distfl {

namespace {

// Iterate all costs (opening + connection) of an instance.
template <typename Fn>
void for_each_cost(const Instance& inst, Fn fn) {
  for (int i = 0; i < inst.num_facilities(); ++i) fn(inst.opening_cost[i]);
  for (const auto& row : inst.connection_cost)
    for (const Rat& c : row) fn(c);
}

// The cost unit is 1/lcm(denominators); with it every cost is an integer
// multiple k of the unit, and k must fit in bit_width bits.
BigInt cost_unit_denominator(const Instance& inst) {
  BigInt l = 1;
  for_each_cost(inst, [&](const Rat& c) {
    l = boost::multiprecision::lcm(l, denominator(c));
  });
  return l;
}

}  // namespace

std::string to_string(const Violation& v) {
  std::ostringstream os;
  switch (v.kind) {
    case ViolationKind::EmptySide: os << "empty-side"; break;
    case ViolationKind::NegativeCost: os << "negative-cost"; break;
    case ViolationKind::NotNormalized: os << "not-normalized"; break;
    case ViolationKind::MetricViolation: os << "metric-violation"; break;
    case ViolationKind::BitWidthExceeded: os << "bit-width-exceeded"; break;
  }
  os << " at(";
  for (size_t i = 0; i < v.where.size(); ++i) os << (i ? "," : "") << v.where[i];
  os << ")";
  if (!v.detail.empty()) os << " " << v.detail;
  return os.str();
}

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  const int nf = inst.num_facilities();
  const int nc = inst.num_clients();
  if (nf == 0 || nc == 0) {
    out.push_back({ViolationKind::EmptySide, {}, "need >=1 facility and >=1 client"});
    return out;
  }
  for (const auto& row : inst.connection_cost)
    if (static_cast<int>(row.size()) != nc) {
      out.push_back({ViolationKind::EmptySide, {}, "ragged cost matrix"});
      return out;
    }

  for (int i = 0; i < nf; ++i)
    if (inst.opening_cost[i] < 0)
      out.push_back({ViolationKind::NegativeCost, {i}, "opening cost"});
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nc; ++j)
      if (inst.connection_cost[i][j] < 0)
        out.push_back({ViolationKind::NegativeCost, {i, j}, "connection cost"});
  if (!out.empty()) return out;  // remaining checks assume nonnegative costs

  // smallest non-zero cost must equal exactly 1
  Rat min_nonzero = -1;
  for_each_cost(inst, [&](const Rat& c) {
    if (c > 0 && (min_nonzero < 0 || c < min_nonzero)) min_nonzero = c;
  });
  if (min_nonzero < 0) {
    out.push_back({ViolationKind::NotNormalized, {}, "all costs are zero"});
  } else if (min_nonzero != 1) {
    out.push_back({ViolationKind::NotNormalized, {},
                   "smallest non-zero cost is " + format_rat(min_nonzero)});
  }

  // bipartite quadrilateral inequality: c_ij <= c_ij' + c_i'j' + c_i'j
  for (int i = 0; i < nf; ++i)
    for (int i2 = 0; i2 < nf; ++i2)
      for (int j = 0; j < nc; ++j)
        for (int j2 = 0; j2 < nc; ++j2) {
          if (i == i2 && j == j2) continue;
          const Rat rhs = inst.connection_cost[i][j2] +
                          inst.connection_cost[i2][j2] +
                          inst.connection_cost[i2][j];
          if (inst.connection_cost[i][j] > rhs)
            out.push_back({ViolationKind::MetricViolation,
                           {i, j, i2, j2},
                           format_rat(inst.connection_cost[i][j]) + " > " +
                               format_rat(rhs)});
        }

  if (inst.bit_width <= 0) {
    out.push_back({ViolationKind::BitWidthExceeded, {}, "bit_width must be positive"});
    return out;
  }
  const BigInt unit_den = cost_unit_denominator(inst);
  const BigInt limit = BigInt(1) << inst.bit_width;
  for (int i = 0; i < nf; ++i) {
    BigInt k = numerator(inst.opening_cost[i]) *
               (unit_den / denominator(inst.opening_cost[i]));
    if (k >= limit)
      out.push_back({ViolationKind::BitWidthExceeded, {i}, "opening cost"});
  }
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nc; ++j) {
      const Rat& c = inst.connection_cost[i][j];
      BigInt k = numerator(c) * (unit_den / denominator(c));
      if (k >= limit)
        out.push_back({ViolationKind::BitWidthExceeded, {i, j}, "connection cost"});
    }
  return out;
}

Instance normalize(const Instance& inst) {
  Rat min_nonzero = -1;
  for_each_cost(inst, [&](const Rat& c) {
    if (c > 0 && (min_nonzero < 0 || c < min_nonzero)) min_nonzero = c;
  });
  if (min_nonzero <= 0)
    throw std::runtime_error("degenerate instance: all costs are zero");
  Instance out = inst;
  for (auto& f : out.opening_cost) f /= min_nonzero;
  for (auto& row : out.connection_cost)
    for (auto& c : row) c /= min_nonzero;
  return out;
}

int default_bit_width(int num_nodes) {
  int l = 0;
  while ((1 << l) < num_nodes) ++l;  // ceil(log2)
  return 4 * l + 16;
}

Instance generate_instance(const GenParams& p) {
  if (p.num_facilities < 1 || p.num_clients < 1 || p.grid_size < 1 ||
      p.f_min < 0 || p.f_max < p.f_min)
    throw std::invalid_argument("bad generator parameters");

  SplitMix64 rng(p.seed ^ 0x5bf0f1d78f0c1e2bULL);
  const uint64_t g = static_cast<uint64_t>(p.grid_size);

  std::vector<std::pair<uint64_t, uint64_t>> fpos(p.num_facilities);
  std::set<std::pair<uint64_t, uint64_t>> fset;
  for (auto& pos : fpos) {
    pos = {rng.below(g), rng.below(g)};
    fset.insert(pos);
  }
  std::vector<std::pair<uint64_t, uint64_t>> cpos(p.num_clients);
  for (auto& pos : cpos) {
    pos = {rng.below(g), rng.below(g)};
    // re-draw coincident facility/client points when the grid allows it
    for (int attempt = 0; attempt < 64 && fset.count(pos); ++attempt)
      pos = {rng.below(g), rng.below(g)};
  }

  Instance inst;
  inst.opening_cost.resize(p.num_facilities);
  for (auto& f : inst.opening_cost) {
    const uint64_t span = static_cast<uint64_t>(p.f_max - p.f_min) + 1;
    f = Rat(BigInt(p.f_min + static_cast<long>(rng.below(span))));
  }
  inst.connection_cost.assign(p.num_facilities, std::vector<Rat>(p.num_clients));
  for (int i = 0; i < p.num_facilities; ++i)
    for (int j = 0; j < p.num_clients; ++j) {
      const uint64_t dx = fpos[i].first > cpos[j].first
                              ? fpos[i].first - cpos[j].first
                              : cpos[j].first - fpos[i].first;
      const uint64_t dy = fpos[i].second > cpos[j].second
                              ? fpos[i].second - cpos[j].second
                              : cpos[j].second - fpos[i].second;
      const uint64_t d2 = dx * dx + dy * dy;
      uint64_t r = isqrt_u64(d2);
      if (r * r < d2) ++r;  // ceil(sqrt)
      inst.connection_cost[i][j] = Rat(BigInt(r));
    }

  inst = normalize(inst);  // throws on the all-zero degenerate case
  inst.bit_width = default_bit_width(inst.num_nodes());
  return inst;
}

Rat solution_cost(const Solution& sol, const Instance& inst) {
  if (static_cast<int>(sol.assignment.size()) != inst.num_clients())
    throw std::runtime_error("solution assigns wrong number of clients");
  Rat total = 0;
  for (int i : sol.open) {
    if (i < 0 || i >= inst.num_facilities())
      throw std::runtime_error("open set references unknown facility");
    total += inst.opening_cost[i];
  }
  for (int j = 0; j < inst.num_clients(); ++j) {
    const int i = sol.assignment[j];
    if (i < 0)
      throw std::runtime_error("client " + std::to_string(j) + " unassigned");
    if (!sol.open.count(i))
      throw std::runtime_error("client " + std::to_string(j) +
                               " assigned to closed facility " + std::to_string(i));
    total += inst.connection_cost[i][j];
  }
  return total;
}

namespace {

Rat parse_cost_token(const std::string& tok, const std::string& context) {
  Rat v;
  try {
    v = parse_rat(tok);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("instance file: " + context + ": " + e.what());
  }
  return v;
}

}  // namespace

Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  std::string word, version;
  int nf = 0, nc = 0, bits = 0;
  if (!(in >> word >> version >> nf >> nc >> bits) || word != "FL" || version != "v1")
    throw std::runtime_error("instance file: bad header in " + path);
  if (nf < 1 || nc < 1)
    throw std::runtime_error("instance file: need >=1 facility and client");

  Instance inst;
  inst.bit_width = bits;
  inst.opening_cost.resize(nf);
  inst.connection_cost.assign(nf, std::vector<Rat>(nc));
  for (int i = 0; i < nf; ++i) {
    int id;
    std::string tok;
    if (!(in >> word >> id >> tok) || word != "F" || id != i)
      throw std::runtime_error("instance file: expected 'F " + std::to_string(i) + " <cost>'");
    inst.opening_cost[i] = parse_cost_token(tok, "facility " + std::to_string(i));
  }
  for (int i = 0; i < nf; ++i) {
    int id;
    if (!(in >> word >> id) || word != "C" || id != i)
      throw std::runtime_error("instance file: expected 'C " + std::to_string(i) + " ...'");
    for (int j = 0; j < nc; ++j) {
      std::string tok;
      if (!(in >> tok))
        throw std::runtime_error("instance file: truncated cost row " + std::to_string(i));
      inst.connection_cost[i][j] =
          parse_cost_token(tok, "cost (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }

  auto violations = validate_instance(inst);
  if (!violations.empty()) {
    std::string msg = "instance file " + path + " violates invariants:";
    for (const auto& v : violations) msg += "\n  " + to_string(v);
    throw std::runtime_error(msg);
  }
  return inst;
}

void write_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path);
  out << "FL v1 " << inst.num_facilities() << " " << inst.num_clients() << " "
      << inst.bit_width << "\n";
  for (int i = 0; i < inst.num_facilities(); ++i)
    out << "F " << i << " " << format_rat(inst.opening_cost[i]) << "\n";
  for (int i = 0; i < inst.num_facilities(); ++i) {
    out << "C " << i;
    for (int j = 0; j < inst.num_clients(); ++j)
      out << " " << format_rat(inst.connection_cost[i][j]);
    out << "\n";
  }
}

Solution read_solution(const std::string& path, const Instance& inst) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solution file " + path);
  Solution sol;
  sol.assignment.assign(inst.num_clients(), -1);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "OPEN") {
      int id;
      while (ls >> id) sol.open.insert(id);
    } else if (word == "ASSIGN") {
      int j, i;
      if (!(ls >> j >> i) || j < 0 || j >= inst.num_clients())
        throw std::runtime_error("solution file: bad ASSIGN line '" + line + "'");
      sol.assignment[j] = i;
    } else {
      throw std::runtime_error("solution file: unknown record '" + word + "'");
    }
  }
  return sol;
}

void write_solution(const Solution& sol, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write solution file " + path);
  out << "OPEN";
  for (int i : sol.open) out << " " << i;
  out << "\n";
  for (size_t j = 0; j < sol.assignment.size(); ++j)
    out << "ASSIGN " << j << " " << sol.assignment[j] << "\n";
}

}  // namespace distfl

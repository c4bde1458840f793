#include "distfl/oracles.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace distfl {

namespace {

// Smallest t >= now at which the summed contributions of the given clients
// reach target: sum_j max(t - c_j, 0) >= target. The sum is piecewise linear
// and nondecreasing in t, with breakpoints at the c_j.
std::optional<Rat> payment_event_time(const std::vector<Rat>& costs,
                                      const Rat& target, const Rat& now) {
  if (target <= 0) return now;  // zero opening cost is covered immediately
  if (costs.empty()) return std::nullopt;
  std::vector<Rat> sorted = costs;
  std::sort(sorted.begin(), sorted.end());
  Rat prefix = 0;  // sum of the k cheapest costs
  for (size_t k = 1; k <= sorted.size(); ++k) {
    prefix += sorted[k - 1];
    // on [sorted[k-1], next breakpoint) the sum is k*t - prefix
    Rat t = (target + prefix) / static_cast<long>(k);
    if (t < sorted[k - 1]) t = sorted[k - 1];
    if (t < now) t = now;
    const bool below_next = k == sorted.size() || t <= sorted[k];
    if (below_next) {
      // verify t actually pays (t may sit at a breakpoint below target when
      // target > 0 and the segment is empty)
      Rat paid = Rat(static_cast<long>(k)) * t - prefix;
      if (paid >= target) return t;
    }
  }
  return std::nullopt;  // unreachable: the last segment always pays
}

}  // namespace

GreedyResult greedy_fl_sequential(const Instance& inst) {
  const int nf = inst.num_facilities();
  const int nc = inst.num_clients();
  GreedyResult result;
  result.alpha.assign(nc, Rat(0));
  result.solution.assignment.assign(nc, -1);

  std::vector<bool> open(nf, false), connected(nc, false);
  Rat now = 0;
  int remaining = nc;

  auto connect = [&](int j, int i) {
    connected[j] = true;
    result.solution.assignment[j] = i;
    result.alpha[j] = now;
    --remaining;
  };

  // a client joining an already-open facility picks the cheapest one, ties by id
  auto cheapest_open_within = [&](int j, const Rat& budget) -> std::optional<int> {
    std::optional<int> best;
    for (int i = 0; i < nf; ++i) {
      if (!open[i] || inst.connection_cost[i][j] > budget) continue;
      if (!best || inst.connection_cost[i][j] < inst.connection_cost[*best][j])
        best = i;
    }
    return best;
  };

  while (remaining > 0) {
    // next connection event: an unconnected client reaching an open facility
    std::optional<Rat> next_event;
    auto consider = [&](const Rat& t) {
      if (!next_event || t < *next_event) next_event = t;
    };
    for (int j = 0; j < nc; ++j) {
      if (connected[j]) continue;
      for (int i = 0; i < nf; ++i)
        if (open[i]) consider(std::max(inst.connection_cost[i][j], now));
    }
    // next payment event per closed facility
    for (int i = 0; i < nf; ++i) {
      if (open[i]) continue;
      std::vector<Rat> costs;
      for (int j = 0; j < nc; ++j)
        if (!connected[j]) costs.push_back(inst.connection_cost[i][j]);
      if (auto t = payment_event_time(costs, inst.opening_cost[i], now))
        consider(*t);
    }
    if (!next_event)
      throw std::logic_error("sequential solver stalled with unconnected clients");
    now = *next_event;

    // connections to already-open facilities happen first
    for (int j = 0; j < nc; ++j) {
      if (connected[j]) continue;
      if (auto i = cheapest_open_within(j, now)) connect(j, *i);
    }
    // then openings, in id order with re-evaluation: a facility whose
    // contributors were just taken by a tied competitor is no longer paid
    for (int i = 0; i < nf; ++i) {
      if (open[i]) continue;
      Rat paid = 0;
      for (int j = 0; j < nc; ++j)
        if (!connected[j]) paid += contribution(now, inst.connection_cost[i][j]);
      if (paid >= inst.opening_cost[i]) {
        open[i] = true;
        for (int j = 0; j < nc; ++j)
          if (!connected[j] && now >= inst.connection_cost[i][j]) connect(j, i);
      }
    }
  }

  for (int i = 0; i < nf; ++i)
    if (open[i]) result.solution.open.insert(i);
  return result;
}

Solution brute_force_opt(const Instance& inst) {
  const int nf = inst.num_facilities();
  const int nc = inst.num_clients();
  if (nf > 20)
    throw std::invalid_argument("brute force limited to 20 facilities, got " +
                                std::to_string(nf));

  std::optional<Rat> best_cost;
  Solution best;
  for (uint32_t mask = 1; mask < (uint32_t{1} << nf); ++mask) {
    Solution sol;
    Rat cost = 0;
    for (int i = 0; i < nf; ++i)
      if (mask & (uint32_t{1} << i)) {
        sol.open.insert(i);
        cost += inst.opening_cost[i];
      }
    sol.assignment.resize(nc);
    for (int j = 0; j < nc; ++j) {
      int pick = -1;
      for (int i : sol.open)
        if (pick < 0 || inst.connection_cost[i][j] < inst.connection_cost[pick][j])
          pick = i;
      sol.assignment[j] = pick;
      cost += inst.connection_cost[pick][j];
    }
    const bool better =
        !best_cost || cost < *best_cost ||
        (cost == *best_cost &&
         std::lexicographical_compare(sol.open.begin(), sol.open.end(),
                                      best.open.begin(), best.open.end()));
    if (better) {
      best_cost = cost;
      best = std::move(sol);
    }
  }
  return best;
}

Rat dual_scaling_factor(const Rat& epsilon) {
  return Rat(1861, 1000) * (1 + epsilon) * (1 + epsilon);
}

Rat DualAssignment::beta_star(int facility, int client, const Instance& inst) const {
  return contribution(alpha_star(client), inst.connection_cost[facility][client]);
}

DualAssignment scaled_duals(const Trace& trace, const Rat& epsilon) {
  DualAssignment duals;
  duals.gamma = dual_scaling_factor(epsilon);
  duals.alpha.reserve(trace.num_clients);
  for (int j = 0; j < trace.num_clients; ++j)
    duals.alpha.push_back(trace.alpha_final(j));
  return duals;
}

std::vector<VerifierViolation> verify_lemma1(const Trace& trace,
                                             const Instance& inst,
                                             const Rat& epsilon) {
  std::vector<VerifierViolation> out;
  std::vector<Rat> alpha(trace.num_clients);
  for (int j = 0; j < trace.num_clients; ++j) alpha[j] = trace.alpha_final(j);
  for (int j = 0; j < trace.num_clients; ++j)
    for (int j2 = 0; j2 < trace.num_clients; ++j2) {
      if (j == j2) continue;
      for (int i = 0; i < trace.num_facilities; ++i) {
        const Rat rhs = alpha[j2] + inst.connection_cost[i][j2] +
                        inst.connection_cost[i][j];
        if (alpha[j] > rhs * (1 + epsilon))
          out.push_back({"lemma1",
                         "client=" + std::to_string(j) + ",client2=" +
                             std::to_string(j2) + ",facility=" + std::to_string(i),
                         format_rat(alpha[j] / (1 + epsilon)), format_rat(rhs)});
      }
    }
  return out;
}

std::vector<VerifierViolation> verify_lemma2(const Trace& trace,
                                             const Instance& inst,
                                             const Rat& epsilon) {
  std::vector<VerifierViolation> out;
  std::vector<int> order(trace.num_clients);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Rat> alpha(trace.num_clients);
  for (int j = 0; j < trace.num_clients; ++j) alpha[j] = trace.alpha_final(j);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return alpha[a] < alpha[b]; });

  const Rat growth = 1 + epsilon;
  for (int i = 0; i < trace.num_facilities; ++i) {
    const Rat bound = growth * inst.opening_cost[i];
    for (size_t a = 0; a < order.size(); ++a) {
      const int j = order[a];
      Rat sum = 0;
      for (size_t b = a; b < order.size(); ++b) {
        const int l = order[b];
        sum += contribution(alpha[j], growth * inst.connection_cost[i][l]);
      }
      if (sum > bound)
        out.push_back({"lemma2",
                       "facility=" + std::to_string(i) +
                           ",client=" + std::to_string(j),
                       format_rat(sum), format_rat(bound)});
    }
  }
  return out;
}

std::vector<VerifierViolation> verify_dual_fitting_scaled(const Trace& trace,
                                                          const Instance& inst,
                                                          const Rat& gamma) {
  DualAssignment duals;
  duals.gamma = gamma;
  for (int j = 0; j < trace.num_clients; ++j)
    duals.alpha.push_back(trace.alpha_final(j));

  std::vector<VerifierViolation> out;
  for (int i = 0; i < trace.num_facilities; ++i) {
    Rat sum = 0;
    for (int j = 0; j < trace.num_clients; ++j)
      sum += duals.beta_star(i, j, inst);
    if (sum > inst.opening_cost[i])
      out.push_back({"dualfit", "facility=" + std::to_string(i),
                     format_rat(sum), format_rat(inst.opening_cost[i])});
  }
  return out;
}

std::vector<VerifierViolation> verify_dual_fitting(const Trace& trace,
                                                   const Instance& inst,
                                                   const Rat& epsilon) {
  return verify_dual_fitting_scaled(trace, inst, dual_scaling_factor(epsilon));
}

Solution solution_from_trace(const Trace& trace) {
  Solution sol;
  sol.assignment = trace.final_assignment;
  if (!trace.phases.empty()) {
    const auto& status = trace.phases.back().fac_status_at_end;
    for (int i = 0; i < trace.num_facilities; ++i)
      if (status[i] == FacilityStatus::Open) sol.open.insert(i);
  }
  return sol;
}

BracketReport verify_cost_bracket(const Trace& trace, const Instance& inst,
                                  const Rat& epsilon) {
  BracketReport report;
  report.cost = solution_cost(solution_from_trace(trace), inst);
  Rat total = 0;
  for (int j = 0; j < trace.num_clients; ++j) total += trace.alpha_final(j);
  report.upper = total;
  report.lower = total / (1 + epsilon);
  report.pass = report.lower <= report.cost && report.cost <= report.upper;
  return report;
}

}  // namespace distfl

#pragma once

// Reference solvers and trace verifiers. The sequential solver replays the
// continuous unit-rate payment process exactly (event-driven over rational
// event times); the brute-force solver enumerates facility subsets. The
// verifiers check, on a finished trace, every guarantee the distributed
// algorithm is supposed to maintain.

#include <vector>

#include "distfl/distributed.hpp"
#include "distfl/instance.hpp"
#include "distfl/trace.hpp"

namespace distfl {

struct GreedyResult {
  Solution solution;
  std::vector<Rat> alpha;  // freeze time of each client
};

// Event-driven simulation of simultaneously raising all unconnected alphas at
// unit rate: a client connects the moment its alpha covers the connection
// cost to an open facility; a facility opens the moment the unconnected
// contributions cover its opening cost. Simultaneous events are processed
// sequentially with re-evaluation (clients first, then facilities in id
// order), so a facility whose payment collapses when a tied competitor takes
// its contributors stays closed.
GreedyResult greedy_fl_sequential(const Instance& inst);

// Exact optimum by enumerating all nonempty facility subsets; each client
// takes its cheapest open facility. Cost ties pick the lexicographically
// smallest open set. Refuses more than 20 facilities.
Solution brute_force_opt(const Instance& inst);

// Scaling factor applied to the duals: 1861/1000 * (1+eps)^2.
Rat dual_scaling_factor(const Rat& epsilon);

// The duals a run produced, scaled into feasibility territory.
struct DualAssignment {
  std::vector<Rat> alpha;  // final dual value per client
  Rat gamma = 1;

  Rat alpha_star(int client) const { return alpha.at(client) / gamma; }
  Rat beta_star(int facility, int client, const Instance& inst) const;
};

DualAssignment scaled_duals(const Trace& trace, const Rat& epsilon);

// Growth bound per client pair and facility:
// alpha_j/(1+eps) <= alpha_j' + c_ij' + c_ij for all triples.
std::vector<VerifierViolation> verify_lemma1(const Trace& trace,
                                             const Instance& inst,
                                             const Rat& epsilon);

// Overpayment bound per facility: with clients sorted by final alpha,
// sum_{l>=j} max(alpha_j - (1+eps) c_il, 0) <= (1+eps) f_i for every j.
// Clients connected by preconnect contribute no payment but stay in the
// sorted list; the bound quantifies over all clients.
std::vector<VerifierViolation> verify_lemma2(const Trace& trace,
                                             const Instance& inst,
                                             const Rat& epsilon);

// Feasibility of the scaled duals: sum_j max(alpha_j/gamma - c_ij, 0) <= f_i
// for every facility, gamma = dual_scaling_factor(eps) unless overridden
// (the override exists for sanity-inversion tests).
std::vector<VerifierViolation> verify_dual_fitting(const Trace& trace,
                                                   const Instance& inst,
                                                   const Rat& epsilon);
std::vector<VerifierViolation> verify_dual_fitting_scaled(const Trace& trace,
                                                          const Instance& inst,
                                                          const Rat& gamma);

struct BracketReport {
  bool pass = false;
  Rat cost;
  Rat lower;  // sum(alpha)/(1+eps)
  Rat upper;  // sum(alpha)
};

// Exact check that the final solution cost lies in
// [sum(alpha)/(1+eps), sum(alpha)].
BracketReport verify_cost_bracket(const Trace& trace, const Instance& inst,
                                  const Rat& epsilon);

// The open set and assignment a trace ended with.
Solution solution_from_trace(const Trace& trace);

}  // namespace distfl

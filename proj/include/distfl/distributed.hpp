#pragma once

// Client and facility node programs for the distributed greedy solver: the
// phase loop (announce alphas, payment check, randomized selection loop,
// geometric alpha growth) plus the trace recorder and phase-settlement
// verifier.

#include <optional>
#include <string>
#include <vector>

#include "distfl/congest.hpp"
#include "distfl/instance.hpp"
#include "distfl/trace.hpp"

namespace distfl {

Rat contribution(const Rat& alpha, const Rat& connection_cost);

// Payment check for a closed facility: becomes currently-paid when the summed
// contribution of not-connected clients covers the opening cost AND at least
// one not-connected client has alpha >= c. The second condition keeps
// zero-cost facilities without any eligible client out of the selection loop,
// where they could never win a draw and would stall the phase.
struct AnnouncedClient {
  Rat alpha;
  ClientStatus status;
  Rat connection_cost;
};
FacilityStatus facility_phase_check(const Rat& opening_cost,
                                    const std::vector<AnnouncedClient>& received);

// Geometric growth at phase end; connected clients are frozen.
uint64_t next_alpha_exponent(ClientStatus status, uint64_t exponent);

// Cheapest already-open facility the client can afford (ties by id), or
// nullopt. Clients connect to it at phase start, paying only the connection
// cost; without this rule alphas could grow past (1+eps) times the cheapest
// open connection, which breaks the per-pair growth bound.
std::optional<int> preconnect_choice(
    const Rat& alpha, const std::vector<std::pair<int, Rat>>& open_costs);

struct DistConfig {
  Rat epsilon = Rat(1, 2);
  uint64_t seed = 0;
  long round_cap = 0;  // <=0: default_round_cap(inst, epsilon)
  int bit_budget = 0;  // <=0: bit_budget_for_nodes(n)
  bool conservative_rounds = false;
};

struct DistResult {
  Solution solution;
  Trace trace;
  int phase_count = 0;
  long round_count = 0;  // includes conservative termination-check rounds
  int max_bits = 0;
  std::vector<RoundLog> round_logs;
};

// Generous guard for non-termination bugs; a correct run stays far below it.
long default_round_cap(const Instance& inst, const Rat& epsilon);

DistResult solve_distributed(const Instance& inst, const DistConfig& config);

// The node programs, exposed so tests can run them on a raw engine.
class FacilityLocationProtocol : public Protocol {
 public:
  FacilityLocationProtocol(const Instance& inst, Rat epsilon, uint64_t seed);

  int num_clients() const override;
  int num_facilities() const override;
  void client_send(int client, Outbox& out, SplitMix64& rng) override;
  void facility_send(int facility, Outbox& out, SplitMix64& rng) override;
  void client_receive(int client, const Inbox& inbox, SplitMix64& rng) override;
  void facility_receive(int facility, const Inbox& inbox, SplitMix64& rng) override;
  RoundOutcome after_round() override;
  std::pair<int, int> round_label() const override;

  Solution solution() const;
  Trace take_trace();
  int phase_count() const { return phase_ + 1; }

 private:
  enum class Step { Announce, SelDraw, SelRelay, SelOpen, SelAck };

  struct DrawKey {
    uint64_t draw = 0;
    int id = -1;
    auto operator<=>(const DrawKey&) const = default;
  };

  struct ClientNode {
    ClientStatus status = ClientStatus::NotConnected;
    uint64_t alpha_exp = 0;
    int assigned = -1;
    std::vector<FacilityStatus> known_fac_status;
    std::optional<DrawKey> relay;  // S_j for the current iteration
  };

  struct FacilityNode {
    FacilityStatus status = FacilityStatus::Closed;
    bool this_round_opened = false;
    uint64_t draw = 0;
    std::vector<uint64_t> known_alpha_exp;
    std::vector<ClientStatus> known_client_status;
  };

  const Rat& alpha_value(uint64_t exponent);
  bool any_currently_paid() const;
  bool all_connected() const;

  const Instance& inst_;
  Rat epsilon_;
  std::vector<Rat> alpha_pow_;
  std::vector<ClientNode> clients_;
  std::vector<FacilityNode> facilities_;
  TraceBuilder trace_;
  Step step_ = Step::Announce;
  int phase_ = 0;
  int iteration_ = 0;
};

struct VerifierViolation {
  std::string verifier;
  std::string ids;
  std::string lhs;
  std::string rhs;
};

// "VIOLATION <verifier> <ids> <lhs> <rhs>"
std::string to_string(const VerifierViolation& violation);

// Phase-settlement checks at every phase end: (i) nothing left mid-payment,
// (ii) every facility opened in the phase is fully paid by the clients the
// selection loop assigned to it, (iii) no closed facility stays fully paid
// while it still has an eligible not-connected contributor.
std::vector<VerifierViolation> verify_fact1(const Trace& trace, const Instance& inst);

// Selection-loop structure: every not-connected client sees at most one newly
// opened affordable facility per iteration, and some facility opens whenever
// an eligible currently-paid facility exists.
std::vector<VerifierViolation> verify_selection_structure(const Trace& trace,
                                                          const Instance& inst);

}  // namespace distfl

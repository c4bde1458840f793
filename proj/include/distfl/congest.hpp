#pragma once

// Synchronous send-receive-compute round engine on the complete bipartite
// topology. The engine owns round counting, per-node random streams, message
// encoding with exact bit accounting, and the hard round cap. Protocols own
// all node state; their receive handlers must touch only their own node so
// results are independent of intra-round scheduling.

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "distfl/message.hpp"
#include "distfl/rng.hpp"

namespace distfl {

struct RoundLog {
  long round = 0;
  int phase = 0;
  int iteration = 0;
  long messages = 0;
  int max_bits = 0;
};

class BudgetViolation : public std::runtime_error {
 public:
  BudgetViolation(long round, bool from_client, int sender, int receiver,
                  int bits, int budget);
  long round;
};

class RoundCapExceeded : public std::runtime_error {
 public:
  explicit RoundCapExceeded(long cap);
};

// One outbox entry per neighbor; nullopt means no message on that edge this
// round (the engine only charges edges that carry a message).
struct Outbox {
  std::vector<std::optional<Payload>> to;

  void broadcast(const Payload& p) {
    for (auto& slot : to) slot = p;
  }
};

using Inbox = std::vector<std::optional<Payload>>;

struct RoundOutcome {
  bool done = false;
  // Number of global zero-cost termination checks evaluated after this round.
  // A real deployment replaces each with a two-round convergecast; the
  // conservative accounting mode charges those rounds.
  int termination_checks = 0;
};

class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual int num_clients() const = 0;
  virtual int num_facilities() const = 0;
  virtual void client_send(int client, Outbox& out, SplitMix64& rng) = 0;
  virtual void facility_send(int facility, Outbox& out, SplitMix64& rng) = 0;
  virtual void client_receive(int client, const Inbox& inbox, SplitMix64& rng) = 0;
  virtual void facility_receive(int facility, const Inbox& inbox, SplitMix64& rng) = 0;
  // Global coordination between rounds, evaluated at zero round cost.
  virtual RoundOutcome after_round() = 0;
  // (phase, iteration) label recorded in the round log.
  virtual std::pair<int, int> round_label() const = 0;
};

struct RunConfig {
  uint64_t seed = 0;
  int bit_budget = 0;       // <=0: use bit_budget_for_nodes(n)
  long round_cap = 0;       // <=0: caller must set; engine refuses to run
  bool conservative_rounds = false;
};

struct RunStats {
  long rounds = 0;           // rounds actually executed by the engine
  long charged_rounds = 0;   // rounds + 2*termination checks if conservative
  int max_bits = 0;
  std::vector<RoundLog> logs;
};

// Runs the protocol until after_round() reports done. Every message is
// encoded, charged against the budget, and decoded again on delivery, so the
// wire format is exercised on every edge of every round.
RunStats run_protocol(Protocol& protocol, const RunConfig& config);

// Round log CSV: "round,phase,iteration,messages,max_bits".
void write_round_log_csv(const std::vector<RoundLog>& logs, const std::string& path);

}  // namespace distfl

#include "distfl/congest.hpp"

#include <fstream>
#include <string>

namespace distfl {

BudgetViolation::BudgetViolation(long round_, bool from_client, int sender,
                                 int receiver, int bits, int budget)
    : std::runtime_error("message budget violated at round " +
                         std::to_string(round_) + " on edge " +
                         (from_client ? "client " : "facility ") +
                         std::to_string(sender) + " -> " +
                         (from_client ? "facility " : "client ") +
                         std::to_string(receiver) + ": " + std::to_string(bits) +
                         " bits > budget " + std::to_string(budget)),
      round(round_) {}

RoundCapExceeded::RoundCapExceeded(long cap)
    : std::runtime_error("hard round cap of " + std::to_string(cap) +
                         " rounds exceeded; the protocol did not terminate") {}

RunStats run_protocol(Protocol& protocol, const RunConfig& config) {
  const int nc = protocol.num_clients();
  const int nf = protocol.num_facilities();
  const int n = nc + nf;
  const MessageWidths widths = MessageWidths::for_nodes(n);
  const int budget =
      config.bit_budget > 0 ? config.bit_budget : bit_budget_for_nodes(n);
  if (config.round_cap <= 0)
    throw std::invalid_argument("round_cap must be positive");

  std::vector<SplitMix64> client_rng, facility_rng;
  client_rng.reserve(nc);
  facility_rng.reserve(nf);
  for (int j = 0; j < nc; ++j) client_rng.push_back(node_stream(config.seed, 0, j));
  for (int i = 0; i < nf; ++i) facility_rng.push_back(node_stream(config.seed, 1, i));

  RunStats stats;
  long checks_total = 0;

  // inboxes[facility side] indexed by sender on the other side
  std::vector<Inbox> fac_inbox(nf), client_inbox(nc);

  for (long round = 0;; ++round) {
    if (round >= config.round_cap) throw RoundCapExceeded(config.round_cap);

    for (auto& ib : fac_inbox) ib.assign(nc, std::nullopt);
    for (auto& ib : client_inbox) ib.assign(nf, std::nullopt);

    long messages = 0;
    int round_max_bits = 0;

    // send half: all outboxes are produced before anything is delivered
    auto ship = [&](const std::optional<Payload>& slot, bool from_client,
                    int sender, int receiver, Inbox& target) {
      if (!slot) return;
      const EncodedMessage wire = encode_message(*slot, widths);
      if (wire.bit_size > budget)
        throw BudgetViolation(round, from_client, sender, receiver,
                              wire.bit_size, budget);
      ++messages;
      if (wire.bit_size > round_max_bits) round_max_bits = wire.bit_size;
      target[sender] = decode_message(wire, widths);
    };

    for (int j = 0; j < nc; ++j) {
      Outbox out;
      out.to.assign(nf, std::nullopt);
      protocol.client_send(j, out, client_rng[j]);
      for (int i = 0; i < nf; ++i) ship(out.to[i], true, j, i, fac_inbox[i]);
    }
    for (int i = 0; i < nf; ++i) {
      Outbox out;
      out.to.assign(nc, std::nullopt);
      protocol.facility_send(i, out, facility_rng[i]);
      for (int j = 0; j < nc; ++j) ship(out.to[j], false, i, j, client_inbox[j]);
    }

    // receive half
    for (int i = 0; i < nf; ++i)
      protocol.facility_receive(i, fac_inbox[i], facility_rng[i]);
    for (int j = 0; j < nc; ++j)
      protocol.client_receive(j, client_inbox[j], client_rng[j]);

    const auto [phase, iteration] = protocol.round_label();
    stats.logs.push_back({round, phase, iteration, messages, round_max_bits});
    if (round_max_bits > stats.max_bits) stats.max_bits = round_max_bits;
    stats.rounds = round + 1;

    const RoundOutcome outcome = protocol.after_round();
    checks_total += outcome.termination_checks;
    if (outcome.done) break;
  }

  stats.charged_rounds =
      stats.rounds + (config.conservative_rounds ? 2 * checks_total : 0);
  return stats;
}

void write_round_log_csv(const std::vector<RoundLog>& logs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write round log " + path);
  out << "round,phase,iteration,messages,max_bits\n";
  for (const auto& log : logs)
    out << log.round << "," << log.phase << "," << log.iteration << ","
        << log.messages << "," << log.max_bits << "\n";
}

}  // namespace distfl

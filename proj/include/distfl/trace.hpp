#pragma once

// Per-phase / per-iteration execution record of a distributed run. The trace
// carries enough state snapshots for all post-hoc verifiers; its text form is
// one record per transition and round-trips losslessly through TraceBuilder.

#include <cstdint>
#include <string>
#include <vector>

#include "distfl/message.hpp"
#include "distfl/rational.hpp"

namespace distfl {

enum class TraceEventKind { Paid, Draw, Open, Close, Connect, AlphaUp };

struct TraceEvent {
  int phase = 0;
  int iteration = 0;  // 0 = announce/phase-end, selection iterations are 1-based
  bool facility_node = false;
  int node = 0;
  TraceEventKind kind{};
  uint64_t value = 0;       // draw value or new alpha exponent
  int connect_to = -1;      // facility for Connect
  bool preconnect = false;  // Connect mode

  bool operator==(const TraceEvent&) const = default;
};

struct ConnectionRecord {
  int client = -1;
  int facility = -1;
  int phase = 0;
  int iteration = 0;
  bool preconnect = false;

  bool operator==(const ConnectionRecord&) const = default;
};

struct IterationSnap {
  int phase = 0;
  int iteration = 0;
  std::vector<uint64_t> draws;                   // per facility
  std::vector<FacilityStatus> fac_status_before; // before this iteration
  std::vector<ClientStatus> client_status_before;
  std::vector<int> opened;                       // facilities opened here

  bool operator==(const IterationSnap&) const = default;
};

struct PhaseSnap {
  int phase = 0;
  std::vector<uint64_t> alpha_exp_at_start;          // per client
  std::vector<ClientStatus> client_status_at_start;  // after preconnect
  std::vector<FacilityStatus> fac_status_at_start;
  std::vector<FacilityStatus> fac_status_after_announce;
  std::vector<FacilityStatus> fac_status_at_end;
  std::vector<ClientStatus> client_status_at_end;
  std::vector<ConnectionRecord> connections;
  std::vector<IterationSnap> iterations;

  bool operator==(const PhaseSnap&) const = default;
};

struct Trace {
  int num_facilities = 0;
  int num_clients = 0;
  Rat epsilon = 1;
  uint64_t seed = 0;
  std::vector<TraceEvent> events;
  std::vector<PhaseSnap> phases;
  std::vector<ConnectionRecord> connections;
  std::vector<uint64_t> final_alpha_exp;
  std::vector<int> final_assignment;  // client -> facility or -1

  // alpha value of client j during phase p
  Rat alpha_at(int phase, int client) const;
  Rat alpha_final(int client) const;

  bool operator==(const Trace&) const = default;
};

// Replays events into snapshots. The live protocol and the file parser both
// feed this, so in-memory and re-parsed traces are structurally identical.
class TraceBuilder {
 public:
  TraceBuilder(int num_facilities, int num_clients, Rat epsilon, uint64_t seed);

  void add(const TraceEvent& event);
  Trace finish();

 private:
  void ensure_phase(int phase);
  void ensure_iteration(int phase, int iteration);
  void close_phase();

  Trace trace_;
  std::vector<uint64_t> alpha_exp_;
  std::vector<ClientStatus> client_status_;
  std::vector<FacilityStatus> fac_status_;
  std::vector<int> assignment_;
  int current_phase_ = -1;
  int current_iteration_ = -1;
  bool announce_closed_ = false;
  bool finished_ = false;
};

// Text format:
//   TRACE v1 <numF> <numC> <epsilon> <seed>
//   <phase> <iteration> <F|C> <id> <event> [detail...]
void write_trace(const Trace& trace, const std::string& path);
Trace read_trace(const std::string& path);

std::string format_trace_event(const TraceEvent& event);

}  // namespace distfl

#include "distfl/distributed.hpp"

#include <algorithm>
#include <sstream>

namespace distfl {

Rat contribution(const Rat& alpha, const Rat& connection_cost) {
  Rat beta = alpha - connection_cost;
  if (beta < 0) return 0;
  return beta;
}

FacilityStatus facility_phase_check(const Rat& opening_cost,
                                    const std::vector<AnnouncedClient>& received) {
  Rat covered = 0;
  bool eligible = false;
  for (const auto& c : received) {
    if (c.status != ClientStatus::NotConnected) continue;
    covered += contribution(c.alpha, c.connection_cost);
    if (c.alpha >= c.connection_cost) eligible = true;
  }
  return (covered >= opening_cost && eligible) ? FacilityStatus::CurrentlyPaid
                                               : FacilityStatus::Closed;
}

uint64_t next_alpha_exponent(ClientStatus status, uint64_t exponent) {
  return status == ClientStatus::NotConnected ? exponent + 1 : exponent;
}

std::optional<int> preconnect_choice(
    const Rat& alpha, const std::vector<std::pair<int, Rat>>& open_costs) {
  std::optional<int> best;
  const Rat* best_cost = nullptr;
  for (const auto& [id, cost] : open_costs) {
    if (alpha < cost) continue;
    if (!best || cost < *best_cost || (cost == *best_cost && id < *best)) {
      best = id;
      best_cost = &cost;
    }
  }
  return best;
}

long default_round_cap(const Instance& inst, const Rat& epsilon) {
  const uint64_t n = static_cast<uint64_t>(inst.num_nodes());
  // ceil(n^(3/4)): smallest m with m^4 >= n^3
  uint64_t m = static_cast<uint64_t>(std::pow(static_cast<double>(n), 0.75));
  auto pow4 = [](uint64_t x) { return x * x * x * x; };
  while (m > 0 && pow4(m) >= n * n * n) --m;
  while (pow4(m + 1) < n * n * n) ++m;
  ++m;
  const Rat max_cost = Rat(BigInt(1) << inst.bit_width);
  const uint64_t levels = ceil_log(1 + epsilon, max_cost);
  return static_cast<long>(64 * m * levels * levels);
}

FacilityLocationProtocol::FacilityLocationProtocol(const Instance& inst,
                                                   Rat epsilon, uint64_t seed)
    : inst_(inst),
      epsilon_(std::move(epsilon)),
      trace_(inst.num_facilities(), inst.num_clients(), epsilon_, seed) {
  if (epsilon_ <= 0) throw std::invalid_argument("epsilon must be positive");
  alpha_pow_.push_back(Rat(1));
  clients_.resize(inst.num_clients());
  for (auto& c : clients_)
    c.known_fac_status.assign(inst.num_facilities(), FacilityStatus::Closed);
  facilities_.resize(inst.num_facilities());
  for (auto& f : facilities_) {
    f.known_alpha_exp.assign(inst.num_clients(), 0);
    f.known_client_status.assign(inst.num_clients(), ClientStatus::NotConnected);
  }
}

int FacilityLocationProtocol::num_clients() const { return inst_.num_clients(); }
int FacilityLocationProtocol::num_facilities() const { return inst_.num_facilities(); }

const Rat& FacilityLocationProtocol::alpha_value(uint64_t exponent) {
  while (alpha_pow_.size() <= exponent)
    alpha_pow_.push_back(alpha_pow_.back() * (1 + epsilon_));
  return alpha_pow_[exponent];
}

bool FacilityLocationProtocol::any_currently_paid() const {
  return std::any_of(facilities_.begin(), facilities_.end(), [](const auto& f) {
    return f.status == FacilityStatus::CurrentlyPaid;
  });
}

bool FacilityLocationProtocol::all_connected() const {
  return std::all_of(clients_.begin(), clients_.end(), [](const auto& c) {
    return c.status == ClientStatus::Connected;
  });
}

void FacilityLocationProtocol::client_send(int j, Outbox& out, SplitMix64&) {
  ClientNode& me = clients_[j];
  switch (step_) {
    case Step::Announce: {
      // preconnect: join the cheapest already-open affordable facility before
      // announcing, so payment checks see the post-preconnect status
      if (me.status == ClientStatus::NotConnected) {
        std::vector<std::pair<int, Rat>> open_costs;
        for (int i = 0; i < num_facilities(); ++i)
          if (me.known_fac_status[i] == FacilityStatus::Open)
            open_costs.emplace_back(i, inst_.connection_cost[i][j]);
        if (auto pick = preconnect_choice(alpha_value(me.alpha_exp), open_costs)) {
          me.status = ClientStatus::Connected;
          me.assigned = *pick;
          TraceEvent ev;
          ev.phase = phase_;
          ev.iteration = 0;
          ev.node = j;
          ev.kind = TraceEventKind::Connect;
          ev.connect_to = *pick;
          ev.preconnect = true;
          trace_.add(ev);
        }
      }
      out.broadcast(AlphaAnnounce{me.alpha_exp, me.status});
      break;
    }
    case Step::SelRelay: {
      MaxRelay relay;
      relay.status = me.status;
      if (me.relay) {
        relay.has_value = true;
        relay.max_draw = me.relay->draw;
        relay.owner = static_cast<uint32_t>(me.relay->id);
      }
      out.broadcast(relay);
      break;
    }
    case Step::SelAck:
      out.broadcast(StatusAck{me.status});
      break;
    default:
      break;  // facility-side rounds
  }
}

void FacilityLocationProtocol::facility_send(int i, Outbox& out, SplitMix64& rng) {
  FacilityNode& me = facilities_[i];
  switch (step_) {
    case Step::SelDraw: {
      me.draw = rng.bits(MessageWidths::for_nodes(inst_.num_nodes()).draw_bits);
      me.this_round_opened = false;
      TraceEvent ev;
      ev.phase = phase_;
      ev.iteration = iteration_;
      ev.facility_node = true;
      ev.node = i;
      ev.kind = TraceEventKind::Draw;
      ev.value = me.draw;
      trace_.add(ev);
      out.broadcast(RandomDraw{me.draw, me.status});
      break;
    }
    case Step::SelOpen:
      out.broadcast(OpenAnnounce{me.status, me.this_round_opened});
      break;
    default:
      break;
  }
}

void FacilityLocationProtocol::facility_receive(int i, const Inbox& inbox,
                                                SplitMix64&) {
  FacilityNode& me = facilities_[i];
  switch (step_) {
    case Step::Announce: {
      for (int j = 0; j < num_clients(); ++j) {
        const auto& msg = std::get<AlphaAnnounce>(*inbox[j]);
        me.known_alpha_exp[j] = msg.alpha_exponent;
        me.known_client_status[j] = msg.status;
      }
      if (me.status == FacilityStatus::Closed) {
        std::vector<AnnouncedClient> received;
        received.reserve(num_clients());
        for (int j = 0; j < num_clients(); ++j)
          received.push_back({alpha_value(me.known_alpha_exp[j]),
                              me.known_client_status[j],
                              inst_.connection_cost[i][j]});
        if (facility_phase_check(inst_.opening_cost[i], received) ==
            FacilityStatus::CurrentlyPaid) {
          me.status = FacilityStatus::CurrentlyPaid;
          TraceEvent ev;
          ev.phase = phase_;
          ev.iteration = 0;
          ev.facility_node = true;
          ev.node = i;
          ev.kind = TraceEventKind::Paid;
          trace_.add(ev);
        }
      }
      break;
    }
    case Step::SelRelay: {
      // T_i over the eligible not-connected clients; open on being the
      // maximum, which makes opened facilities strict local maxima
      std::optional<DrawKey> top;
      bool any_eligible = false;
      for (int j = 0; j < num_clients(); ++j) {
        const auto& msg = std::get<MaxRelay>(*inbox[j]);
        me.known_client_status[j] = msg.status;
        if (msg.status != ClientStatus::NotConnected) continue;
        if (alpha_value(me.known_alpha_exp[j]) < inst_.connection_cost[i][j])
          continue;
        any_eligible = true;
        if (msg.has_value) {
          DrawKey key{msg.max_draw, static_cast<int>(msg.owner)};
          if (!top || key > *top) top = key;
        }
      }
      if (me.status == FacilityStatus::CurrentlyPaid && any_eligible && top &&
          *top == DrawKey{me.draw, i}) {
        me.status = FacilityStatus::Open;
        me.this_round_opened = true;
        TraceEvent ev;
        ev.phase = phase_;
        ev.iteration = iteration_;
        ev.facility_node = true;
        ev.node = i;
        ev.kind = TraceEventKind::Open;
        trace_.add(ev);
      }
      break;
    }
    case Step::SelAck: {
      for (int j = 0; j < num_clients(); ++j)
        me.known_client_status[j] = std::get<StatusAck>(*inbox[j]).status;
      if (me.status == FacilityStatus::CurrentlyPaid) {
        Rat remaining = 0;
        bool any_eligible = false;
        for (int j = 0; j < num_clients(); ++j) {
          if (me.known_client_status[j] != ClientStatus::NotConnected) continue;
          const Rat& alpha = alpha_value(me.known_alpha_exp[j]);
          if (alpha >= inst_.connection_cost[i][j]) any_eligible = true;
          remaining += contribution(alpha, inst_.connection_cost[i][j]);
        }
        if (!any_eligible || remaining < inst_.opening_cost[i]) {
          me.status = FacilityStatus::Closed;
          TraceEvent ev;
          ev.phase = phase_;
          ev.iteration = iteration_;
          ev.facility_node = true;
          ev.node = i;
          ev.kind = TraceEventKind::Close;
          trace_.add(ev);
        }
      }
      break;
    }
    default:
      break;
  }
}

void FacilityLocationProtocol::client_receive(int j, const Inbox& inbox,
                                              SplitMix64&) {
  ClientNode& me = clients_[j];
  switch (step_) {
    case Step::SelDraw: {
      me.relay.reset();
      for (int i = 0; i < num_facilities(); ++i) {
        const auto& msg = std::get<RandomDraw>(*inbox[i]);
        me.known_fac_status[i] = msg.status;
        if (msg.status != FacilityStatus::CurrentlyPaid) continue;
        if (alpha_value(me.alpha_exp) < inst_.connection_cost[i][j]) continue;
        DrawKey key{msg.draw, i};
        if (!me.relay || key > *me.relay) me.relay = key;
      }
      break;
    }
    case Step::SelOpen: {
      std::vector<int> newly_open_affordable;
      for (int i = 0; i < num_facilities(); ++i) {
        const auto& msg = std::get<OpenAnnounce>(*inbox[i]);
        me.known_fac_status[i] = msg.status;
        if (msg.status == FacilityStatus::Open && msg.this_round_opened &&
            alpha_value(me.alpha_exp) >= inst_.connection_cost[i][j])
          newly_open_affordable.push_back(i);
      }
      if (me.status == ClientStatus::NotConnected &&
          !newly_open_affordable.empty()) {
        if (newly_open_affordable.size() > 1)
          throw std::logic_error(
              "selection invariant broken: client " + std::to_string(j) +
              " sees " + std::to_string(newly_open_affordable.size()) +
              " newly opened affordable facilities");
        me.status = ClientStatus::Connected;
        me.assigned = newly_open_affordable.front();
        TraceEvent ev;
        ev.phase = phase_;
        ev.iteration = iteration_;
        ev.node = j;
        ev.kind = TraceEventKind::Connect;
        ev.connect_to = me.assigned;
        trace_.add(ev);
      }
      break;
    }
    default:
      break;
  }
}

RoundOutcome FacilityLocationProtocol::after_round() {
  switch (step_) {
    case Step::Announce:
    case Step::SelAck: {
      // loop condition "no currently-paid facility left", evaluated globally
      RoundOutcome outcome;
      outcome.termination_checks = 1;
      if (any_currently_paid()) {
        ++iteration_;
        step_ = Step::SelDraw;
        return outcome;
      }
      // phase ends; second global check: all clients connected
      outcome.termination_checks = 2;
      if (all_connected()) {
        outcome.done = true;
        return outcome;
      }
      for (int j = 0; j < num_clients(); ++j) {
        ClientNode& c = clients_[j];
        if (c.status != ClientStatus::NotConnected) continue;
        c.alpha_exp = next_alpha_exponent(c.status, c.alpha_exp);
        TraceEvent ev;
        ev.phase = phase_;
        ev.iteration = 0;
        ev.node = j;
        ev.kind = TraceEventKind::AlphaUp;
        ev.value = c.alpha_exp;
        trace_.add(ev);
      }
      ++phase_;
      iteration_ = 0;
      step_ = Step::Announce;
      return outcome;
    }
    case Step::SelDraw:
      step_ = Step::SelRelay;
      return {};
    case Step::SelRelay:
      step_ = Step::SelOpen;
      return {};
    case Step::SelOpen:
      step_ = Step::SelAck;
      return {};
  }
  return {};
}

std::pair<int, int> FacilityLocationProtocol::round_label() const {
  return {phase_, step_ == Step::Announce ? 0 : iteration_};
}

Solution FacilityLocationProtocol::solution() const {
  Solution sol;
  for (int i = 0; i < num_facilities(); ++i)
    if (facilities_[i].status == FacilityStatus::Open) sol.open.insert(i);
  for (const auto& c : clients_) sol.assignment.push_back(c.assigned);
  return sol;
}

Trace FacilityLocationProtocol::take_trace() { return trace_.finish(); }

DistResult solve_distributed(const Instance& inst, const DistConfig& config) {
  {
    auto violations = validate_instance(inst);
    if (!violations.empty())
      throw std::invalid_argument("instance invalid: " + to_string(violations[0]));
  }
  FacilityLocationProtocol protocol(inst, config.epsilon, config.seed);
  RunConfig rc;
  rc.seed = config.seed;
  rc.bit_budget = config.bit_budget;
  rc.round_cap = config.round_cap > 0 ? config.round_cap
                                      : default_round_cap(inst, config.epsilon);
  rc.conservative_rounds = config.conservative_rounds;
  RunStats stats = run_protocol(protocol, rc);

  DistResult result;
  result.solution = protocol.solution();
  result.phase_count = protocol.phase_count();
  result.round_count = stats.charged_rounds;
  result.max_bits = stats.max_bits;
  result.round_logs = std::move(stats.logs);
  result.trace = protocol.take_trace();
  return result;
}

std::string to_string(const VerifierViolation& v) {
  return "VIOLATION " + v.verifier + " " + v.ids + " " + v.lhs + " " + v.rhs;
}

namespace {

std::string phase_fac_ids(int phase, int facility) {
  std::ostringstream os;
  os << "phase=" << phase << ",facility=" << facility;
  return os.str();
}

}  // namespace

std::vector<VerifierViolation> verify_fact1(const Trace& trace,
                                            const Instance& inst) {
  std::vector<VerifierViolation> out;
  for (const PhaseSnap& snap : trace.phases) {
    // (i) the selection loop must settle every currently-paid facility
    for (int i = 0; i < trace.num_facilities; ++i)
      if (snap.fac_status_at_end[i] == FacilityStatus::CurrentlyPaid)
        out.push_back({"fact1", phase_fac_ids(snap.phase, i) + ",check=i",
                       "currently-paid", "settled"});

    // (ii) opened facilities are paid for by their selection-loop clients
    for (const IterationSnap& iter : snap.iterations)
      for (int i : iter.opened) {
        Rat paid = 0;
        for (const ConnectionRecord& conn : snap.connections)
          if (conn.facility == i && !conn.preconnect)
            paid += contribution(trace.alpha_at(snap.phase, conn.client),
                                 inst.connection_cost[i][conn.client]);
        if (paid < inst.opening_cost[i])
          out.push_back({"fact1", phase_fac_ids(snap.phase, i) + ",check=ii",
                         format_rat(paid), format_rat(inst.opening_cost[i])});
      }

    // (iii) closed facilities are not fully paid by remaining eligible clients
    for (int i = 0; i < trace.num_facilities; ++i) {
      if (snap.fac_status_at_end[i] != FacilityStatus::Closed) continue;
      Rat covered = 0;
      bool eligible = false;
      for (int j = 0; j < trace.num_clients; ++j) {
        if (snap.client_status_at_end[j] != ClientStatus::NotConnected) continue;
        const Rat alpha = trace.alpha_at(snap.phase, j);
        covered += contribution(alpha, inst.connection_cost[i][j]);
        if (alpha >= inst.connection_cost[i][j]) eligible = true;
      }
      if (eligible && covered >= inst.opening_cost[i])
        out.push_back({"fact1", phase_fac_ids(snap.phase, i) + ",check=iii",
                       format_rat(covered), format_rat(inst.opening_cost[i])});
    }
  }
  return out;
}

std::vector<VerifierViolation> verify_selection_structure(const Trace& trace,
                                                          const Instance& inst) {
  std::vector<VerifierViolation> out;
  for (const PhaseSnap& snap : trace.phases) {
    for (const IterationSnap& iter : snap.iterations) {
      for (int j = 0; j < trace.num_clients; ++j) {
        if (iter.client_status_before[j] != ClientStatus::NotConnected) continue;
        int affordable_openings = 0;
        for (int i : iter.opened)
          if (trace.alpha_at(snap.phase, j) >= inst.connection_cost[i][j])
            ++affordable_openings;
        if (affordable_openings > 1)
          out.push_back({"selection",
                         "phase=" + std::to_string(snap.phase) +
                             ",iteration=" + std::to_string(iter.iteration) +
                             ",client=" + std::to_string(j),
                         std::to_string(affordable_openings), "1"});
      }
      bool eligible_paid_exists = false;
      for (int i = 0; i < trace.num_facilities && !eligible_paid_exists; ++i) {
        if (iter.fac_status_before[i] != FacilityStatus::CurrentlyPaid) continue;
        for (int j = 0; j < trace.num_clients; ++j)
          if (iter.client_status_before[j] == ClientStatus::NotConnected &&
              trace.alpha_at(snap.phase, j) >= inst.connection_cost[i][j]) {
            eligible_paid_exists = true;
            break;
          }
      }
      if (eligible_paid_exists && iter.opened.empty())
        out.push_back({"selection",
                       "phase=" + std::to_string(snap.phase) + ",iteration=" +
                           std::to_string(iter.iteration) + ",client=-",
                       "0", ">=1 opening"});
    }
  }
  return out;
}

}  // namespace distfl

#include "distfl/trace.hpp"

#include <fstream>
#include <sstream>

namespace distfl {

Rat Trace::alpha_at(int phase, int client) const {
  return rat_pow(1 + epsilon, phases.at(phase).alpha_exp_at_start.at(client));
}

Rat Trace::alpha_final(int client) const {
  return rat_pow(1 + epsilon, final_alpha_exp.at(client));
}

TraceBuilder::TraceBuilder(int num_facilities, int num_clients, Rat epsilon,
                           uint64_t seed) {
  trace_.num_facilities = num_facilities;
  trace_.num_clients = num_clients;
  trace_.epsilon = std::move(epsilon);
  trace_.seed = seed;
  alpha_exp_.assign(num_clients, 0);
  client_status_.assign(num_clients, ClientStatus::NotConnected);
  fac_status_.assign(num_facilities, FacilityStatus::Closed);
  assignment_.assign(num_clients, -1);
}

void TraceBuilder::close_phase() {
  if (current_phase_ < 0) return;
  PhaseSnap& snap = trace_.phases.back();
  if (!announce_closed_) {
    snap.fac_status_after_announce = fac_status_;
    announce_closed_ = true;
  }
  snap.fac_status_at_end = fac_status_;
  snap.client_status_at_end = client_status_;
}

void TraceBuilder::ensure_phase(int phase) {
  if (phase == current_phase_) return;
  if (phase != current_phase_ + 1)
    throw std::runtime_error("trace events out of phase order");
  close_phase();
  current_phase_ = phase;
  current_iteration_ = 0;
  announce_closed_ = false;
  PhaseSnap snap;
  snap.phase = phase;
  snap.alpha_exp_at_start = alpha_exp_;
  snap.client_status_at_start = client_status_;
  snap.fac_status_at_start = fac_status_;
  trace_.phases.push_back(std::move(snap));
}

void TraceBuilder::ensure_iteration(int phase, int iteration) {
  ensure_phase(phase);
  PhaseSnap& snap = trace_.phases.back();
  if (!announce_closed_) {
    snap.fac_status_after_announce = fac_status_;
    announce_closed_ = true;
  }
  if (iteration == current_iteration_) return;
  if (iteration != current_iteration_ + 1)
    throw std::runtime_error("trace events out of iteration order");
  current_iteration_ = iteration;
  IterationSnap iter;
  iter.phase = phase;
  iter.iteration = iteration;
  iter.draws.assign(trace_.num_facilities, 0);
  iter.fac_status_before = fac_status_;
  iter.client_status_before = client_status_;
  snap.iterations.push_back(std::move(iter));
}

void TraceBuilder::add(const TraceEvent& ev) {
  if (finished_) throw std::runtime_error("trace builder already finished");
  trace_.events.push_back(ev);
  switch (ev.kind) {
    case TraceEventKind::Paid:
      ensure_phase(ev.phase);
      fac_status_.at(ev.node) = FacilityStatus::CurrentlyPaid;
      break;
    case TraceEventKind::Draw:
      ensure_iteration(ev.phase, ev.iteration);
      trace_.phases.back().iterations.back().draws.at(ev.node) = ev.value;
      break;
    case TraceEventKind::Open:
      ensure_iteration(ev.phase, ev.iteration);
      fac_status_.at(ev.node) = FacilityStatus::Open;
      trace_.phases.back().iterations.back().opened.push_back(ev.node);
      break;
    case TraceEventKind::Close:
      ensure_iteration(ev.phase, ev.iteration);
      fac_status_.at(ev.node) = FacilityStatus::Closed;
      break;
    case TraceEventKind::Connect: {
      if (ev.iteration == 0)
        ensure_phase(ev.phase);
      else
        ensure_iteration(ev.phase, ev.iteration);
      client_status_.at(ev.node) = ClientStatus::Connected;
      assignment_.at(ev.node) = ev.connect_to;
      ConnectionRecord rec{ev.node, ev.connect_to, ev.phase, ev.iteration,
                           ev.preconnect};
      trace_.phases.back().connections.push_back(rec);
      trace_.connections.push_back(rec);
      // preconnect decisions precede the announce processing; they must not
      // leak into the phase-start snapshot of earlier phases but do belong to
      // this one (the snapshot is taken post-preconnect by construction)
      if (ev.preconnect)
        trace_.phases.back().client_status_at_start.at(ev.node) =
            ClientStatus::Connected;
      break;
    }
    case TraceEventKind::AlphaUp:
      ensure_phase(ev.phase);
      alpha_exp_.at(ev.node) = ev.value;
      break;
  }
}

Trace TraceBuilder::finish() {
  close_phase();
  trace_.final_alpha_exp = alpha_exp_;
  trace_.final_assignment = assignment_;
  finished_ = true;
  return std::move(trace_);
}

std::string format_trace_event(const TraceEvent& ev) {
  std::ostringstream os;
  os << ev.phase << " " << ev.iteration << " " << (ev.facility_node ? "F" : "C")
     << " " << ev.node << " ";
  switch (ev.kind) {
    case TraceEventKind::Paid: os << "paid"; break;
    case TraceEventKind::Draw: os << "draw " << ev.value; break;
    case TraceEventKind::Open: os << "open"; break;
    case TraceEventKind::Close: os << "close"; break;
    case TraceEventKind::Connect:
      os << "connect " << ev.connect_to << " " << (ev.preconnect ? "pre" : "sel");
      break;
    case TraceEventKind::AlphaUp: os << "alphaup " << ev.value; break;
  }
  return os.str();
}

void write_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file " + path);
  out << "TRACE v1 " << trace.num_facilities << " " << trace.num_clients << " "
      << format_rat(trace.epsilon) << " " << trace.seed << "\n";
  for (const auto& ev : trace.events) out << format_trace_event(ev) << "\n";
}

Trace read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file " + path);
  std::string word, version, eps_tok;
  int nf = 0, nc = 0;
  uint64_t seed = 0;
  if (!(in >> word >> version >> nf >> nc >> eps_tok >> seed) ||
      word != "TRACE" || version != "v1")
    throw std::runtime_error("trace file: bad header in " + path);
  TraceBuilder builder(nf, nc, parse_rat(eps_tok), seed);

  std::string line;
  std::getline(in, line);  // rest of header line
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    TraceEvent ev;
    std::string kind_tok, node_tok;
    if (!(ls >> ev.phase >> ev.iteration >> node_tok >> ev.node >> kind_tok))
      throw std::runtime_error("trace file: bad record '" + line + "'");
    ev.facility_node = node_tok == "F";
    if (kind_tok == "paid") {
      ev.kind = TraceEventKind::Paid;
    } else if (kind_tok == "draw") {
      ev.kind = TraceEventKind::Draw;
      ls >> ev.value;
    } else if (kind_tok == "open") {
      ev.kind = TraceEventKind::Open;
    } else if (kind_tok == "close") {
      ev.kind = TraceEventKind::Close;
    } else if (kind_tok == "connect") {
      ev.kind = TraceEventKind::Connect;
      std::string mode;
      ls >> ev.connect_to >> mode;
      ev.preconnect = mode == "pre";
    } else if (kind_tok == "alphaup") {
      ev.kind = TraceEventKind::AlphaUp;
      ls >> ev.value;
    } else {
      throw std::runtime_error("trace file: unknown event '" + kind_tok + "'");
    }
    builder.add(ev);
  }
  return builder.finish();
}

}  // namespace distfl

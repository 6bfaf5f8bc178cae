#include "hiddentime/engine.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>

#include "hiddentime/error.hpp"

namespace hiddentime {

namespace {

std::string id(NodeId n) { return std::to_string(n.value); }
std::string id(RibId r) { return std::to_string(r.value); }

// Scout-marked ribs seen from each node. `inbound` carry queries toward the
// node (the node sent scouts over them); `outbound` lead toward the source.
struct QueryRoutes {
  std::vector<std::vector<RibId>> inbound;
  std::vector<std::vector<RibId>> outbound;

  QueryRoutes(const Lattice& lattice, const std::vector<RibState>& ribs)
      : inbound(lattice.node_count()), outbound(lattice.node_count()) {
    for (std::uint32_t r = 0; r < ribs.size(); ++r) {
      if (ribs[r].mark == RibMark::Void) continue;
      const NodeId from = ribs[r].from;
      const NodeId to = lattice.rib(RibId{r}).other(from);
      inbound[from.value].push_back(RibId{r});
      outbound[to.value].push_back(RibId{r});
    }
  }
};

enum class Signal { Query, Null, Refuse, Confirm };

std::string_view signal_name(Signal s) {
  switch (s) {
    case Signal::Query: return "query";
    case Signal::Null: return "null";
    case Signal::Refuse: return "refuse";
    case Signal::Confirm: return "confirm";
  }
  return "?";
}

struct Message {
  Signal signal;
  RibId rib;
  NodeId to;
  Query query;
};

struct Received {
  RibId rib;
  Query query;
};

struct NodeProgress {
  std::size_t pending = 0;
  bool fired = false;
  std::optional<RibId> kept;
  std::vector<Received> received;
};

bool has_live_outbound(const QueryRoutes& routes, const std::vector<RibState>& ribs, NodeId node) {
  for (RibId r : routes.outbound[node.value]) {
    if (ribs[r.value].mark != RibMark::Void) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(RibMark mark) {
  switch (mark) {
    case RibMark::Void: return "void";
    case RibMark::Scout: return "scout";
    case RibMark::Query: return "query";
    case RibMark::Confirmed: return "confirmed";
  }
  return "?";
}

std::vector<RibState> initial_rib_states(const ScoutField& field) {
  std::vector<RibState> ribs(field.rib_from.size());
  for (std::size_t r = 0; r < ribs.size(); ++r) {
    if (field.rib_from[r]) ribs[r] = RibState{RibMark::Scout, *field.rib_from[r], NodeId{}};
  }
  return ribs;
}

std::vector<QueryMessage> emit_queries(const Lattice& lattice, const ScoutField& field,
                                       std::vector<RibState>& ribs, double dark_threshold) {
  std::vector<QueryMessage> out;
  bool any_bright = false;
  for (const DetectorRecord& record : field.records) {
    if (!record.closed()) {
      throw Error(ErrorCode::ProtocolOrder,
                  "detector " + id(record.detector()) + " emits before closing");
    }
    const NodeId det = record.detector();
    const bool bright = record.intensity() > dark_threshold;
    any_bright = any_bright || bright;
    for (RibId r : lattice.incident(det)) {
      RibState& state = ribs[r.value];
      if (state.mark != RibMark::Scout || state.from == det) continue;
      if (bright) {
        state.mark = RibMark::Query;
        state.detector = det;
        out.push_back({r, det, Query{det, record.intensity(), state.from}});
      } else {
        state.mark = RibMark::Void;
      }
    }
  }
  if (!any_bright) {
    throw Error(ErrorCode::DarkTrial, "every detector intensity is <= " +
                                          format_double(dark_threshold) + "; nothing to select");
  }
  return out;
}

std::vector<RibId> refuse(const Lattice& lattice, std::vector<RibState>& ribs, RibId rib,
                          NodeId loss_point) {
  const QueryRoutes routes(lattice, ribs);
  std::vector<RibId> voided;
  NodeId at = loss_point;
  std::optional<RibId> next = rib;
  while (next) {
    RibState& state = ribs[next->value];
    if (state.mark == RibMark::Void) break;
    state.mark = RibMark::Void;
    voided.push_back(*next);
    at = lattice.rib(*next).other(at);
    next.reset();
    if (has_live_outbound(routes, ribs, at)) break;
    // The node has lost every route toward the source: its surviving inbound
    // query ribs go too. Walking one rib at a time mirrors the engine, where
    // each node keeps at most one.
    std::vector<RibId> live;
    for (RibId in : routes.inbound[at.value]) {
      if (ribs[in.value].mark == RibMark::Query) live.push_back(in);
    }
    for (std::size_t i = 1; i < live.size(); ++i) {
      const auto more = refuse(lattice, ribs, live[i], at);
      voided.insert(voided.end(), more.begin(), more.end());
    }
    if (!live.empty()) next = live.front();
  }
  return voided;
}

BackpropResult backpropagate(const Lattice& lattice, std::vector<RibState>& ribs,
                             std::vector<QueryMessage> initial,
                             LotteryMode mode, RandomStream& rng, TrialLog* log,
                             std::uint64_t tick_offset) {
  // Ribs already voided (dark detectors) are excluded from the barriers.
  const QueryRoutes routes(lattice, ribs);

  std::vector<NodeProgress> nodes(lattice.node_count());
  for (std::size_t n = 0; n < nodes.size(); ++n) nodes[n].pending = routes.inbound[n].size();

  BackpropResult result;
  std::uint64_t tick = tick_offset;
  std::vector<Message> in_flight;
  std::vector<NodeId> ready;

  for (const QueryMessage& q : initial) {
    in_flight.push_back({Signal::Query, q.rib, lattice.rib(q.rib).other(q.sender), q.query});
    nodes[q.sender.value].fired = true;
    if (log) {
      log->event(tick, "query",
                 "rib=" + id(q.rib) + " detector=" + id(q.query.detector) +
                     " weight=" + format_double(q.query.weight));
    }
  }
  for (NodeId d : lattice.detectors()) nodes[d.value].fired = true;
  for (std::uint32_t n = 0; n < nodes.size(); ++n) {
    if (!nodes[n].fired && nodes[n].pending == 0 && !routes.outbound[n].empty()) {
      ready.push_back(NodeId{n});
    }
  }

  std::optional<NodeId> winner;
  bool detected = false;

  auto send = [&](Signal signal, RibId rib, NodeId from, const Query& q,
                  std::vector<Message>& queue) {
    queue.push_back({signal, rib, lattice.rib(rib).other(from), q});
  };

  auto fire = [&](NodeId at, std::vector<Message>& queue) {
    NodeProgress& node = nodes[at.value];
    node.fired = true;
    if (node.received.empty()) {
      if (at == lattice.source()) {
        throw Error(ErrorCode::Deadlock, "no query reached the source");
      }
      for (RibId r : routes.outbound[at.value]) send(Signal::Null, r, at, Query{}, queue);
      return;
    }

    // Copies of one detector's query merge; the merged weight is the largest copy.
    std::map<NodeId, std::pair<double, std::vector<RibId>>> merged;
    for (const Received& rcv : node.received) {
      auto& slot = merged[rcv.query.detector];
      slot.first = std::max(slot.first, rcv.query.weight);
      slot.second.push_back(rcv.rib);
    }
    std::vector<Query> competitors;
    for (const auto& [det, entry] : merged) competitors.push_back(Query{det, entry.first, at});
    const LotteryResult lot = lottery_select(competitors, mode, rng);
    result.degenerate_lottery = result.degenerate_lottery || lot.degenerate;

    const auto& carriers = merged.at(lot.winner.detector).second;
    node.kept = *std::min_element(carriers.begin(), carriers.end());
    if (log) {
      std::string fields = "rib=" + id(*node.kept) + " node=" + id(at) +
                           " winner=" + id(lot.winner.detector) +
                           " weight=" + format_double(lot.winner.weight) + " competitors=";
      for (std::size_t i = 0; i < competitors.size(); ++i) {
        if (i) fields += ',';
        fields += id(competitors[i].detector) + ':' + format_double(competitors[i].weight);
      }
      if (lot.degenerate) fields += " degenerate=1";
      log->event(tick, "lottery", fields);
    }

    for (const Received& rcv : node.received) {
      if (rcv.rib == *node.kept) continue;
      ribs[rcv.rib.value].mark = RibMark::Void;
      send(Signal::Refuse, rcv.rib, at, Query{}, queue);
    }

    if (at == lattice.source()) {
      winner = lot.winner.detector;
      result.surviving_path.push_back(at);
      ribs[node.kept->value].mark = RibMark::Confirmed;
      send(Signal::Confirm, *node.kept, at, lot.winner, queue);
      return;
    }
    for (RibId r : routes.outbound[at.value]) {
      RibState& state = ribs[r.value];
      state.mark = RibMark::Query;
      state.detector = lot.winner.detector;
      Query forwarded = lot.winner;
      forwarded.at = state.from;
      send(Signal::Query, r, at, forwarded, queue);
    }
  };

  std::vector<Message> outgoing;
  std::sort(ready.begin(), ready.end());
  for (NodeId n : ready) fire(n, in_flight);

  while (!in_flight.empty()) {
    ++tick;
    std::sort(in_flight.begin(), in_flight.end(), [](const Message& a, const Message& b) {
      return std::tie(a.to, a.rib) < std::tie(b.to, b.rib);
    });
    outgoing.clear();
    ready.clear();
    for (const Message& msg : in_flight) {
      if (log) {
        std::string fields = "rib=" + id(msg.rib) + " to=" + id(msg.to);
        if (msg.signal == Signal::Query || msg.signal == Signal::Confirm) {
          fields += " detector=" + id(msg.query.detector);
        }
        if (msg.signal == Signal::Query) fields += " weight=" + format_double(msg.query.weight);
        log->event(tick, signal_name(msg.signal), fields);
      }
      NodeProgress& node = nodes[msg.to.value];
      switch (msg.signal) {
        case Signal::Query:
          node.received.push_back({msg.rib, msg.query});
          if (--node.pending == 0) ready.push_back(msg.to);
          break;
        case Signal::Null:
          ribs[msg.rib.value].mark = RibMark::Void;
          if (--node.pending == 0) ready.push_back(msg.to);
          break;
        case Signal::Refuse:
          if (!has_live_outbound(routes, ribs, msg.to) && node.kept &&
              ribs[node.kept->value].mark == RibMark::Query) {
            ribs[node.kept->value].mark = RibMark::Void;
            send(Signal::Refuse, *node.kept, msg.to, Query{}, outgoing);
          }
          break;
        case Signal::Confirm:
          result.surviving_path.push_back(msg.to);
          if (msg.to == *winner) {
            detected = true;
            if (log) log->event(tick, "detect", "rib=- detector=" + id(msg.to));
          } else {
            const RibId next = *node.kept;
            ribs[next.value].mark = RibMark::Confirmed;
            send(Signal::Confirm, next, msg.to, msg.query, outgoing);
          }
          break;
      }
    }
    std::sort(ready.begin(), ready.end());
    for (NodeId n : ready) {
      if (!nodes[n.value].fired) fire(n, outgoing);
    }
    in_flight.swap(outgoing);
  }

  if (!winner || !detected) {
    for (std::uint32_t n = 0; n < nodes.size(); ++n) {
      if (!nodes[n].fired && !routes.outbound[n].empty()) {
        throw Error(ErrorCode::Deadlock, "node " + std::to_string(n) + " still waits on " +
                                             std::to_string(nodes[n].pending) + " inbound ribs");
      }
    }
    throw Error(ErrorCode::Deadlock, "query phase ended without a confirmed detector");
  }
  result.winner = *winner;
  result.ticks = tick - tick_offset;
  return result;
}

TrialRunner::TrialRunner(const Lattice& lattice, EngineOptions options)
    : lattice_(&lattice),
      options_(options),
      scouts_(propagate_scouts(lattice, options.admissibility, options.path_budget)) {}

TrialOutcome TrialRunner::run(std::uint64_t master_seed, std::uint64_t trial_index,
                              TrialLog* log) const {
  ScoutField traced;
  const ScoutField* field = &scouts_;
  if (log) {
    traced = propagate_scouts(*lattice_, options_.admissibility, options_.path_budget, log,
                              options_.same_source_tolerance);
    field = &traced;
  }

  std::vector<RibState> ribs = initial_rib_states(*field);
  RandomStream rng(master_seed, trial_index);
  auto queries = emit_queries(*lattice_, *field, ribs, options_.dark_threshold);
  BackpropResult bp =
      backpropagate(*lattice_, ribs, std::move(queries), options_.mode, rng, log, field->ticks);

  TrialOutcome outcome;
  outcome.winner = bp.winner;
  outcome.surviving_path = std::move(bp.surviving_path);
  outcome.hidden_ticks = field->ticks + bp.ticks;
  for (const DetectorRecord& record : field->records) {
    outcome.intensities.emplace_back(record.detector(), record.intensity());
  }
  outcome.master_seed = master_seed;
  outcome.trial_index = trial_index;
  outcome.degenerate_lottery = bp.degenerate_lottery;
  outcome.final_ribs = std::move(ribs);
  return outcome;
}

TrialOutcome run_trial(const Lattice& lattice, const EngineOptions& options,
                       std::uint64_t master_seed, std::uint64_t trial_index, TrialLog* log) {
  return TrialRunner(lattice, options).run(master_seed, trial_index, log);
}

}  // namespace hiddentime

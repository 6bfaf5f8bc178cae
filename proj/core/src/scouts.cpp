#include "hiddentime/scouts.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hiddentime/error.hpp"

namespace hiddentime {

namespace {

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

// Fronts share path prefixes through parent links.
struct PathStep {
  NodeId node;
  std::uint32_t parent;
};

struct Front {
  std::uint32_t step;
  Phase phase;
  double length;
  std::uint32_t hops;
};

bool on_path(const std::vector<PathStep>& arena, std::uint32_t step, NodeId node) {
  for (std::uint32_t s = step; s != kNoParent; s = arena[s].parent) {
    if (arena[s].node == node) return true;
  }
  return false;
}

}  // namespace

std::size_t ScoutField::detector_index(NodeId detector) const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].detector() == detector) return i;
  }
  throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(detector.value) +
                                              " is not a detector");
}

ScoutField propagate_scouts(const Lattice& lattice, const Admissibility& admissibility,
                            std::uint64_t path_budget, TrialLog* log,
                            double same_source_tolerance) {
  ScoutField field;
  const auto detectors = lattice.detectors();
  for (NodeId d : detectors) field.records.emplace_back(d);
  field.arrivals.resize(detectors.size());
  field.rib_from.assign(lattice.rib_count(), std::nullopt);
  std::vector<std::uint64_t> rib_tick(lattice.rib_count(), 0);

  std::vector<std::size_t> detector_slot(lattice.node_count(), 0);
  for (std::size_t i = 0; i < detectors.size(); ++i) detector_slot[detectors[i].value] = i;

  const bool forward = std::holds_alternative<ForwardDag>(admissibility);
  const std::uint32_t max_hops = forward ? 0 : std::get<MaxHops>(admissibility).max_hops;
  const auto dist = forward ? lattice.hop_distances()
                            : std::vector<std::optional<std::uint32_t>>{};

  std::vector<PathStep> arena{{lattice.source(), kNoParent}};
  std::vector<Front> current{{0, Phase{}, 0.0, 0}};
  std::vector<Front> next;
  std::uint64_t tick = 0;

  while (!current.empty()) {
    ++tick;
    next.clear();
    for (const Front& front : current) {
      const NodeId at = arena[front.step].node;
      for (RibId r : lattice.incident(at)) {
        const Rib& rib = lattice.rib(r);
        const NodeId to = rib.other(at);
        if (forward) {
          if (!dist[to.value] || *dist[to.value] != *dist[at.value] + 1) continue;
        } else if (front.hops >= max_hops || on_path(arena, front.step, to)) {
          continue;
        }

        auto& from = field.rib_from[r.value];
        if (!from) {
          from = at;
          rib_tick[r.value] = tick;
        } else if (rib_tick[r.value] == tick && *from != at) {
          from = std::min(*from, at);
        }

        if (++field.fronts > path_budget) {
          throw Error(ErrorCode::PathBudgetExceeded,
                      "more than " + std::to_string(path_budget) + " scout fronts (" +
                          std::to_string(field.fronts) + " so far at tick " +
                          std::to_string(tick) + ")");
        }
        const Front moved{0, next_phase(front.phase, rib.length, lattice.wavelength()),
                          front.length + rib.length, front.hops + 1};
        field.ticks = std::max<std::uint64_t>(field.ticks, moved.hops);
        if (log) {
          log->event(tick, "scout",
                     "rib=" + std::to_string(r.value) + " from=" + std::to_string(at.value) +
                         " to=" + std::to_string(to.value) +
                         " phase=" + format_double(moved.phase.radians()));
        }

        const NodeKind kind = lattice.node(to).kind;
        if (kind == NodeKind::Detector) {
          const std::size_t slot = detector_slot[to.value];
          auto& seen = field.arrivals[slot];
          if (log) {
            const bool same =
                !seen.empty() && classify_arrival(seen.back().phase, moved.phase,
                                                  same_source_tolerance) == ArrivalClass::SameSource;
            log->event(tick, "arrive",
                       "rib=" + std::to_string(r.value) + " detector=" + std::to_string(to.value) +
                           " phase=" + format_double(moved.phase.radians()) +
                           " source=" + (same ? "same" : "new"));
          }
          field.records[slot].add_arrival(moved.phase);
          seen.push_back({moved.phase, moved.length, moved.hops});
        } else if (kind == NodeKind::Void) {
          arena.push_back({to, front.step});
          Front f = moved;
          f.step = static_cast<std::uint32_t>(arena.size() - 1);
          next.push_back(f);
        }
      }
    }
    current.swap(next);
  }

  for (auto& record : field.records) {
    record.close();
    if (log) {
      const Amplitude a = record.amplitude();
      log->event(field.ticks, "close",
                 "rib=- detector=" + std::to_string(record.detector().value) +
                     " re=" + format_double(a.re) + " im=" + format_double(a.im) +
                     " intensity=" + format_double(record.intensity()));
    }
  }
  return field;
}

}  // namespace hiddentime

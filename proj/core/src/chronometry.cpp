#include "hiddentime/chronometry.hpp"

#include <cmath>
#include <deque>
#include <optional>
#include <string>

#include "hiddentime/error.hpp"
#include "hiddentime/lattice.hpp"

namespace hiddentime {

namespace {

// Hops from every node to `target` (plain BFS; the chain has no branches that
// matter, but this keeps the clock independent of node numbering).
std::vector<std::optional<std::uint64_t>> hops_to(const Lattice& lattice, NodeId target) {
  std::vector<std::optional<std::uint64_t>> dist(lattice.node_count());
  std::deque<NodeId> frontier{target};
  dist[target.value] = 0;
  while (!frontier.empty()) {
    const NodeId at = frontier.front();
    frontier.pop_front();
    for (RibId r : lattice.incident(at)) {
      const NodeId next = lattice.rib(r).other(at);
      if (!dist[next.value]) {
        dist[next.value] = *dist[at.value] + 1;
        frontier.push_back(next);
      }
    }
  }
  return dist;
}

}  // namespace

ClockReading queue_clock_count(const ClockScenario& s) {
  if (s.source_distance < 1 || s.laser_distance < 1 || s.laser_cadence < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "clock distances and cadence must all be >= 1");
  }
  const Lattice chain = build_clock_chain(s.source_distance, s.laser_distance);
  const NodeId detector = chain.detectors().front();
  NodeId laser;
  for (const Node& n : chain.nodes()) {
    if (n.kind == NodeKind::LaserEmitter) laser = n.id;
  }
  const auto dist = hops_to(chain, detector);

  // Each in-flight scout is its remaining distance to the detector.
  std::uint64_t source_scout = *dist[chain.source().value];
  std::vector<std::uint64_t> laser_scouts{*dist[laser.value]};

  ClockReading reading;
  for (std::uint64_t tick = 1;; ++tick) {
    std::vector<std::uint64_t> still_flying;
    for (std::uint64_t remaining : laser_scouts) {
      if (remaining == 1) {
        reading.queue.push_back(tick);
      } else {
        still_flying.push_back(remaining - 1);
      }
    }
    laser_scouts.swap(still_flying);
    if (--source_scout == 0) {
      reading.source_arrival_tick = tick;
      break;
    }
    if (tick % static_cast<std::uint64_t>(s.laser_cadence) == 0) {
      laser_scouts.push_back(*dist[laser.value]);
    }
  }
  reading.laser_count = reading.queue.size();
  return reading;
}

double dilation_time(double proper_time, double velocity) {
  if (!(std::isfinite(proper_time) && proper_time > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "proper time must be positive");
  }
  if (!(velocity >= 0.0 && velocity < 1.0)) {
    throw Error(ErrorCode::InvalidVelocity,
                "velocity " + std::to_string(velocity) + " is outside [0, 1)");
  }
  return proper_time / std::sqrt(1.0 - velocity * velocity);
}

}  // namespace hiddentime

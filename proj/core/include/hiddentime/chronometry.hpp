#pragma once

#include <cstdint>
#include <vector>

namespace hiddentime {

/// Single-atom clock: a detector that counts laser scouts while the source
/// scout is in flight. Distances are in hops, cadence in hidden ticks.
struct ClockScenario {
  int source_distance = 1;
  int laser_distance = 1;
  int laser_cadence = 1;
};

struct ClockReading {
  std::uint64_t laser_count = 0;          ///< laser scouts queued at the detector
  std::uint64_t source_arrival_tick = 0;  ///< tick the source scout reached it
  std::vector<std::uint64_t> queue;       ///< arrival tick of each counted laser scout
};

/// Runs the chain lattice tick by tick. The laser fires at tick 0 together
/// with the source and every `laser_cadence` ticks after; laser scouts that
/// arrive in (0, source_arrival_tick] are counted.
ClockReading queue_clock_count(const ClockScenario& scenario);

/// Time observed in the rest frame for proper time `proper_time` of a clock
/// moving at `velocity` (units of c): the t solving c^2 t^2 = v^2 t^2 + c^2 tau^2.
double dilation_time(double proper_time, double velocity);

}  // namespace hiddentime

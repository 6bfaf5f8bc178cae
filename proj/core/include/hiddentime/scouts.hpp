#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "hiddentime/detector.hpp"
#include "hiddentime/lattice.hpp"
#include "hiddentime/phase.hpp"
#include "hiddentime/trace.hpp"

namespace hiddentime {

/// Scouts only cross ribs that raise the hop distance from the source by one.
struct ForwardDag {};

/// Scouts follow every simple path of at most `max_hops` ribs.
struct MaxHops {
  std::uint32_t max_hops = 0;
};

using Admissibility = std::variant<ForwardDag, MaxHops>;

inline constexpr std::uint64_t kDefaultPathBudget = std::uint64_t{1} << 22;
inline constexpr double kDefaultSameSourceTolerance = 0.1;

struct ScoutArrival {
  Phase phase;
  double path_length = 0.0;
  std::uint32_t hops = 0;
};

/// Everything the forward wavefront leaves behind. Deterministic in the
/// lattice and admissibility rule, so one field can serve many trials.
struct ScoutField {
  std::vector<DetectorRecord> records;               ///< aligned with Lattice::detectors()
  std::vector<std::vector<ScoutArrival>> arrivals;   ///< aligned with Lattice::detectors()
  /// Scout direction per rib: the endpoint the first scout left from.
  std::vector<std::optional<NodeId>> rib_from;
  std::uint64_t ticks = 0;
  std::uint64_t fronts = 0;

  std::size_t detector_index(NodeId detector) const;
};

/// Advance one scout per admissible path, one rib per tick, until the
/// wavefront is exhausted; then close every detector record. With a log,
/// each arrival is tagged same/new source against the detector's previous
/// arrival using `same_source_tolerance`.
ScoutField propagate_scouts(const Lattice& lattice, const Admissibility& admissibility,
                            std::uint64_t path_budget = kDefaultPathBudget,
                            TrialLog* log = nullptr,
                            double same_source_tolerance = kDefaultSameSourceTolerance);

}  // namespace hiddentime

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hiddentime/detector.hpp"
#include "hiddentime/lattice.hpp"
#include "hiddentime/phase.hpp"
#include "hiddentime/scouts.hpp"

namespace hiddentime::oracle {

// Brute-force reference. Shares only the lattice with the engine: paths are
// found by plain recursion over its own hop layering, phases come from total
// path lengths rather than per-rib accumulation.

struct PathRecord {
  std::vector<NodeId> nodes;  ///< source first, detector last
  double total_length = 0.0;
  Phase phase;
};

/// Every admissible source->detector path, in lexicographic node-id order.
std::vector<PathRecord> enumerate_paths(const Lattice& lattice, NodeId detector,
                                        const Admissibility& admissibility,
                                        std::uint64_t path_budget = kDefaultPathBudget);

/// Sum of unit phasors (cos phi, sin phi); zero for an empty list.
Amplitude detector_amplitude(std::span<const PathRecord> paths);

using AmplitudeMap = std::vector<std::pair<NodeId, Amplitude>>;

/// Amplitude for every detector of the lattice, ascending id.
AmplitudeMap detector_amplitudes(const Lattice& lattice, const Admissibility& admissibility,
                                 std::uint64_t path_budget = kDefaultPathBudget);

struct BornDistribution {
  std::vector<std::pair<NodeId, double>> entries;  ///< ascending detector id
  double total_intensity = 0.0;

  double probability(NodeId detector) const;
};

/// P_i = |A_i|^2 / sum_j |A_j|^2. Intensities at or below `dark_threshold`
/// count as exactly zero. Throws DarkConfiguration when nothing is left.
BornDistribution born_distribution(std::span<const std::pair<NodeId, Amplitude>> amplitudes,
                                   double dark_threshold = 0.0);

}  // namespace hiddentime::oracle

#pragma once

// Test-only helpers: randomized lattices, merge-tree shapes and an exact
// lottery-outcome enumerator. None of this reaches into the engine.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hiddentime/lattice.hpp"
#include "hiddentime/lottery.hpp"

namespace hiddentime::testing {

struct RandomLatticeOptions {
  std::size_t max_nodes = 200;
  int max_detectors = 5;
  std::uint64_t max_paths = 200000;  ///< total admissible paths over all detectors
};

/// Jittered grid with random rib deletions and diagonals, random source and
/// detectors, random wavelength. Retries until the lattice is valid and its
/// forward path count stays under `max_paths`.
Lattice random_lattice(std::mt19937_64& rng, const RandomLatticeOptions& options = {});

/// Number of forward-layered source->detector paths, by dynamic programming.
std::uint64_t forward_path_count(const Lattice& lattice);

/// Canonical merge-tree shapes: root "S(...)", leaves "L", merge nodes "(...)"
/// with at least two children. All shapes with `leaves` leaves.
std::vector<std::string> merge_tree_shapes(int leaves);

/// Parent array (node 0 = source) for a canonical shape string.
std::vector<int> parents_from_shape(const std::string& shape);

/// Number of merge nodes (interior non-root nodes) in a shape.
int merge_node_count(const std::string& shape);

/// Exact probability that each leaf wins, obtained by walking every sequence
/// of lottery outcomes bottom-up. `leaf_intensities` follows leaf order.
std::vector<double> exact_selection(const std::vector<int>& parent,
                                    const std::vector<double>& leaf_intensities, LotteryMode mode);

}  // namespace hiddentime::testing

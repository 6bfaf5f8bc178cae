#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hiddentime/engine.hpp"
#include "hiddentime/lattice.hpp"
#include "hiddentime/oracle.hpp"

namespace hiddentime {

/// Discrete distribution keyed by detector, ascending id.
using Distribution = std::vector<std::pair<NodeId, double>>;

/// Half the L1 distance. Both arguments need the same support and must sum
/// to 1 within 1e-9.
double tv_distance(const Distribution& p, const Distribution& q);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  bool underpowered = false;  ///< some expected count below 5
};

/// Pearson statistic of `counts` (aligned with `reference`) against
/// `trials * reference`. Zero-probability cells are left out of the sum and the
/// degrees of freedom unless they were observed, which makes the statistic infinite.
ChiSquareResult chi_square(std::span<const std::uint64_t> counts, const Distribution& reference,
                           std::uint64_t trials);

/// Upper critical value: P(X <= value) = percentile for X ~ chi^2(dof).
double chi_square_critical(int dof, double percentile);

struct EnsembleOptions {
  EngineOptions engine;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  unsigned jobs = 1;
};

struct EnsembleResult {
  std::string lattice_id;
  LotteryMode mode = LotteryMode::Aggregate;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  std::vector<NodeId> detectors;
  std::vector<std::uint64_t> counts;
  Distribution empirical;
  oracle::BornDistribution reference;
  double tv_distance = 0.0;
  ChiSquareResult chi_square;
  std::uint64_t degenerate_trials = 0;

  friend bool operator==(const EnsembleResult&, const EnsembleResult&);
};

/// Runs trials 0..trials-1 on `jobs` threads. Every trial owns its random
/// stream, so the result does not depend on `jobs`.
EnsembleResult run_ensemble(const Lattice& lattice, const EnsembleOptions& options,
                            std::string lattice_id = {});

struct InterferenceProfile {
  std::vector<NodeId> detectors;  ///< screen order
  std::vector<double> positions;
  std::vector<double> oracle_intensity;
  std::vector<double> empirical;
  EnsembleResult ensemble;
};

/// Oracle intensities and engine frequencies along the screen, ordered by
/// screen coordinate (y).
InterferenceProfile interference_profile(const Lattice& slit_lattice, const EnsembleOptions& options,
                                         std::string lattice_id = "double-slit");

/// Indices i with values[i] strictly below both neighbours.
std::vector<std::size_t> interior_minima(std::span<const double> values);

// Artifact writers. Output is byte-stable for identical inputs.
void write_ensemble_csv(std::ostream& out, const EnsembleResult& result);
void write_profile_csv(std::ostream& out, const InterferenceProfile& profile);
std::string ensemble_summary_json(const EnsembleResult& result, double chi_square_percentile = 0.99);

}  // namespace hiddentime

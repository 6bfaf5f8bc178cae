#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hiddentime/detector.hpp"
#include "hiddentime/lattice.hpp"
#include "hiddentime/lottery.hpp"
#include "hiddentime/random.hpp"
#include "hiddentime/scouts.hpp"
#include "hiddentime/trace.hpp"

namespace hiddentime {

inline constexpr double kDefaultDarkThreshold = 1e-12;

struct EngineOptions {
  Admissibility admissibility = ForwardDag{};
  LotteryMode mode = LotteryMode::Aggregate;
  double dark_threshold = kDefaultDarkThreshold;
  std::uint64_t path_budget = kDefaultPathBudget;
  double same_source_tolerance = kDefaultSameSourceTolerance;  ///< trace tagging only
};

enum class RibMark { Void, Scout, Query, Confirmed };

std::string_view to_string(RibMark mark);

/// Per-trial marking of one rib. `from` is the endpoint nearer the source in
/// scout direction; queries travel the other way. `detector` names the query
/// currently carried (Query) or confirmed (Confirmed).
struct RibState {
  RibMark mark = RibMark::Void;
  NodeId from;
  NodeId detector;
  friend bool operator==(const RibState&, const RibState&) = default;
};

std::vector<RibState> initial_rib_states(const ScoutField& field);

/// A query travelling from `sender` toward the source over `rib`.
struct QueryMessage {
  RibId rib;
  NodeId sender;
  Query query;
};

/// Queries every bright detector sends back over its scout-marked ribs. Ribs
/// of dark detectors (intensity <= dark_threshold) are voided in `ribs`.
/// Throws DarkTrial when no detector is bright.
std::vector<QueryMessage> emit_queries(const Lattice& lattice, const ScoutField& field,
                                       std::vector<RibState>& ribs, double dark_threshold);

/// Voids `rib` (a losing query route that reached `loss_point`) and walks the
/// refusal toward the detectors: a node whose source-side ribs are now all
/// void drops its own surviving inbound rib as well. Returns the ribs voided.
std::vector<RibId> refuse(const Lattice& lattice, std::vector<RibState>& ribs, RibId rib,
                          NodeId loss_point);

struct BackpropResult {
  NodeId winner;
  std::vector<NodeId> surviving_path;  ///< source first, winner last
  std::uint64_t ticks = 0;             ///< hidden ticks spent after the scout phase
  bool degenerate_lottery = false;
};

/// Reverse phase: barrier-synchronised lotteries at every node, refusals, and
/// the final confirmation from the source. Consumes `initial` and mutates `ribs`.
BackpropResult backpropagate(const Lattice& lattice, std::vector<RibState>& ribs,
                             std::vector<QueryMessage> initial,
                             LotteryMode mode, RandomStream& rng, TrialLog* log = nullptr,
                             std::uint64_t tick_offset = 0);

struct TrialOutcome {
  NodeId winner;
  std::vector<NodeId> surviving_path;
  std::uint64_t hidden_ticks = 0;
  std::vector<std::pair<NodeId, double>> intensities;  ///< ascending detector id
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
  bool degenerate_lottery = false;
  std::vector<RibState> final_ribs;

  friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

/// Runs trials against one lattice. The scout phase does not depend on the
/// random stream, so it is computed once at construction.
class TrialRunner {
 public:
  TrialRunner(const Lattice& lattice, EngineOptions options);

  TrialOutcome run(std::uint64_t master_seed, std::uint64_t trial_index,
                   TrialLog* log = nullptr) const;

  const Lattice& lattice() const { return *lattice_; }
  const EngineOptions& options() const { return options_; }
  const ScoutField& scouts() const { return scouts_; }

 private:
  const Lattice* lattice_;
  EngineOptions options_;
  ScoutField scouts_;
};

TrialOutcome run_trial(const Lattice& lattice, const EngineOptions& options,
                       std::uint64_t master_seed, std::uint64_t trial_index,
                       TrialLog* log = nullptr);

}  // namespace hiddentime

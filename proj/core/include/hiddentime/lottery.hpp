#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hiddentime/lattice.hpp"
#include "hiddentime/random.hpp"

namespace hiddentime {

/// How a lottery winner's weight composes upstream.
enum class LotteryMode {
  Naive,      ///< the winner carries its own detector intensity
  Aggregate,  ///< the winner carries the summed weight of every competitor
};

std::string_view to_string(LotteryMode mode);
LotteryMode parse_lottery_mode(std::string_view text);

struct Query {
  NodeId detector;
  double weight = 0.0;
  NodeId at;
  friend bool operator==(const Query&, const Query&) = default;
};

struct LotteryResult {
  std::size_t winner_index = 0;
  Query winner;  ///< weight already updated for `mode`
  std::vector<std::size_t> losers;
  bool degenerate = false;  ///< every weight was zero; drawn uniformly
};

/// Draw one competitor with probability weight_i / sum(weights).
LotteryResult lottery_select(std::span<const Query> competitors, LotteryMode mode,
                             RandomStream& rng);

}  // namespace hiddentime

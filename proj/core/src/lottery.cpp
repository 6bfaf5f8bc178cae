#include "hiddentime/lottery.hpp"

#include <cmath>
#include <string>

#include "hiddentime/error.hpp"

namespace hiddentime {

std::string_view to_string(LotteryMode mode) {
  return mode == LotteryMode::Naive ? "naive" : "aggregate";
}

LotteryMode parse_lottery_mode(std::string_view text) {
  if (text == "naive") return LotteryMode::Naive;
  if (text == "aggregate") return LotteryMode::Aggregate;
  throw Error(ErrorCode::InvalidArgument, "unknown lottery mode `" + std::string(text) + "`");
}

LotteryResult lottery_select(std::span<const Query> competitors, LotteryMode mode,
                             RandomStream& rng) {
  if (competitors.empty()) throw Error(ErrorCode::InvalidArgument, "lottery without competitors");
  double total = 0.0;
  for (const Query& q : competitors) {
    if (!(std::isfinite(q.weight) && q.weight >= 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "lottery weight must be finite and >= 0");
    }
    total += q.weight;
  }

  LotteryResult result;
  const double u = rng.uniform();
  if (total == 0.0) {
    result.degenerate = true;
    result.winner_index = static_cast<std::size_t>(u * static_cast<double>(competitors.size()));
  } else {
    const double target = u * total;
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    bool found = false;
    for (std::size_t i = 0; i < competitors.size(); ++i) {
      if (competitors[i].weight == 0.0) continue;
      last_positive = i;
      cumulative += competitors[i].weight;
      if (target < cumulative) {
        result.winner_index = i;
        found = true;
        break;
      }
    }
    // Rounding can leave target == cumulative at the very end.
    if (!found) result.winner_index = last_positive;
  }

  result.winner = competitors[result.winner_index];
  if (mode == LotteryMode::Aggregate) result.winner.weight = total;
  for (std::size_t i = 0; i < competitors.size(); ++i) {
    if (i != result.winner_index) result.losers.push_back(i);
  }
  return result;
}

}  // namespace hiddentime

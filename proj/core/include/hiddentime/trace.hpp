#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hiddentime {

/// Line-oriented protocol trace, one event per line:
///
///   <tick> <kind> rib=<id> <field>=<value> ...
///
/// kinds: scout, arrive, close, query, null, lottery, refuse, confirm, detect.
class TrialLog {
 public:
  void event(std::uint64_t tick, std::string_view kind, std::string_view fields);

  const std::vector<std::string>& lines() const { return lines_; }
  std::string str() const;

 private:
  std::vector<std::string> lines_;
};

/// Shortest round-trip decimal form of `v`.
std::string format_double(double v);

}  // namespace hiddentime

#include "hiddentime/trace.hpp"

#include <charconv>

namespace hiddentime {

void TrialLog::event(std::uint64_t tick, std::string_view kind, std::string_view fields) {
  std::string line = std::to_string(tick);
  line += ' ';
  line += kind;
  if (!fields.empty()) {
    line += ' ';
    line += fields;
  }
  lines_.push_back(std::move(line));
}

std::string TrialLog::str() const {
  std::string out;
  for (const auto& line : lines_) {
    out += line;
    out += '\n';
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace hiddentime

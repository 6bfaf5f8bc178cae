#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hiddentime/lottery.hpp"

namespace hiddentime::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitThresholdFailure = 2,
};

/// Environment variable consulted for the default output directory.
inline constexpr const char* kOutputDirEnv = "HIDDENTIME_OUT";

struct RunConfig {
  std::string scenario = "star";
  LotteryMode mode = LotteryMode::Aggregate;
  double wavelength = 1.0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
  std::string topology;
  std::string out_dir;
  bool trace = false;

  // Gates. An unset tv threshold means the scenario default (none for grid
  // and custom, whose query routes need not be trees).
  std::optional<double> tv_threshold;
  double chi_percentile = 0.99;
  double eps_same = 0.1;
  double eps_intensity = 1e-12;
  std::uint32_t max_hops = 0;  ///< 0 keeps forward layering

  // star / grid
  int detectors = 3;
  int arm_hops = 2;
  std::vector<double> intensities;  ///< star; empty means 1, ..., 1, 2
  int width = 3;
  int height = 3;

  // two-path
  double length_a = 2.0;
  double length_b = 2.0;
  int hops = 2;

  // double-slit
  int slits = 2;
  int slit_separation = 6;

  // clock
  int distance = 10;
  int laser_distance = 1;
  int cadence = 1;

  // dilation
  std::vector<double> velocities;  ///< empty means 0, 0.6, 0.8
  double tau = 1.0;
};

struct ParseResult {
  std::optional<RunConfig> config;  ///< empty when parsing ended the program
  int exit_code = kExitOk;
};

/// Reads flags and an optional YAML `--config` file. Flags override file values.
ParseResult parse_command_line(int argc, const char* const* argv, std::ostream& out,
                               std::ostream& err);

/// Validates `config`, runs the scenario, writes its artifacts and returns
/// the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hiddentime::cli

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "hiddentime/cli/run.hpp"
#include "hiddentime/error.hpp"

namespace hiddentime::cli {

namespace {

// Config files use the topology documents' YAML: a flat mapping from flag
// name (without dashes) to a scalar or a list.
class YamlConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    YAML::Emitter emitter;
    emitter << YAML::BeginMap;
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      std::vector<std::string> values = opt->reduced_results();
      if (values.empty() && default_also && !opt->get_default_str().empty()) {
        values = {opt->get_default_str()};
      }
      if (values.empty()) continue;
      emitter << YAML::Key << opt->get_lnames().front() << YAML::Value;
      if (values.size() == 1) {
        emitter << values.front();
      } else {
        emitter << YAML::Flow << values;
      }
    }
    emitter << YAML::EndMap;
    return std::string(emitter.c_str()) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    YAML::Node root;
    try {
      root = YAML::Load(input);
    } catch (const YAML::Exception& e) {
      throw CLI::ConfigError(std::string("config file: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    if (root.IsNull()) return items;
    if (!root.IsMap()) throw CLI::ConfigError("config file: top level must be a mapping");
    for (const auto& entry : root) {
      CLI::ConfigItem item;
      item.name = entry.first.as<std::string>();
      const YAML::Node& value = entry.second;
      if (value.IsSequence()) {
        for (const auto& v : value) item.inputs.push_back(v.as<std::string>());
      } else if (value.IsScalar()) {
        item.inputs.push_back(value.as<std::string>());
      } else {
        throw CLI::ConfigError("config file: `" + item.name + "` must be a scalar or a list");
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

}  // namespace

ParseResult parse_command_line(int argc, const char* const* argv, std::ostream& out,
                               std::ostream& err) {
  RunConfig c;
  CLI::App app{"Hidden-time protocol simulator: scout wavefronts, query lotteries and "
               "Monte-Carlo comparison against path-sum Born probabilities.",
               "hiddentime"};
  app.config_formatter(std::make_shared<YamlConfig>());
  app.set_config("--config", "", "YAML file with flag values (keys are flag names); flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.option_defaults()->always_capture_default();
  app.get_formatter()->column_width(34);

  const std::vector<std::string> scenarios{"star",  "two-path", "double-slit", "grid",
                                           "clock", "dilation", "custom"};
  app.add_option("--scenario", c.scenario, "Scenario to run")
      ->check(CLI::IsMember(scenarios));
  std::string mode(to_string(c.mode));
  app.add_option("--mode", mode, "Lottery weight rule")
      ->check(CLI::IsMember({"naive", "aggregate"}));
  app.add_option("--lambda", c.wavelength, "Wavelength")->check(CLI::PositiveNumber);
  app.add_option("--trials", c.trials, "Monte-Carlo trials")->check(CLI::Range(1ULL, 1ULL << 40));
  app.add_option("--seed", c.seed, "Master seed");
  app.add_option("--jobs", c.jobs, "Worker threads; results do not depend on it")
      ->check(CLI::Range(1u, 1024u));
  app.add_option("--topology", c.topology, "Topology document for --scenario custom");
  app.add_option("--out", c.out_dir,
                 std::string("Output directory (default: $") + kOutputDirEnv +
                     ", else ./hiddentime-out)");
  app.add_flag("--trace", c.trace, "Write trace.log for trial 0");
  app.add_option("--tv-threshold", c.tv_threshold,
                 "Fail (exit 2) above this TV distance; defaults: star/two-path 0.01, "
                 "double-slit 0.02, grid/custom not gated")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--chi-percentile", c.chi_percentile,
                 "Chi-square critical percentile for gated scenarios")
      ->check(CLI::Range(0.5, 0.999999));
  app.add_option("--eps-same", c.eps_same, "Same-source phase tolerance (trace tagging)")
      ->check(CLI::Range(0.0, 3.14159));
  app.add_option("--eps-intensity", c.eps_intensity,
                 "Detectors at or below this intensity stay silent")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-hops", c.max_hops,
                 "Admit every simple path up to this many ribs (0: forward layering)");

  app.add_option("--detectors", c.detectors, "star: arms; grid: screen detectors")
      ->check(CLI::Range(1, 1000));
  app.add_option("--arm-hops", c.arm_hops, "star: ribs per arm")->check(CLI::Range(1, 1000));
  app.add_option("--intensities", c.intensities, "star: per-arm intensities (default 1,...,1,2)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  app.add_option("--width", c.width, "grid: columns")->check(CLI::Range(2, 100));
  app.add_option("--height", c.height, "grid: rows")->check(CLI::Range(1, 100));
  app.add_option("--length-a", c.length_a, "two-path: first path length")
      ->check(CLI::PositiveNumber);
  app.add_option("--length-b", c.length_b, "two-path: second path length")
      ->check(CLI::PositiveNumber);
  app.add_option("--hops", c.hops, "two-path: ribs per path")->check(CLI::Range(1, 1000));
  app.add_option("--slits", c.slits, "double-slit: open slits (1 or 2)")->check(CLI::Range(1, 2));
  app.add_option("--slit-separation", c.slit_separation, "double-slit: rows between slits")
      ->check(CLI::Range(1, 40));
  app.add_option("--distance", c.distance, "clock: source distance in hops (table runs 1..d)")
      ->check(CLI::Range(1, 100000));
  app.add_option("--laser-distance", c.laser_distance, "clock: laser distance in hops")
      ->check(CLI::Range(1, 100000));
  app.add_option("--cadence", c.cadence, "clock: ticks between laser emissions")
      ->check(CLI::Range(1, 100000));
  app.add_option("--v", c.velocities, "dilation: velocities in units of c (default 0,0.6,0.8)")
      ->delimiter(',');
  app.add_option("--tau", c.tau, "dilation: proper time")->check(CLI::PositiveNumber);

  app.footer(std::string("Exit codes: 0 ok, 1 configuration error, 2 threshold failure.\n"
                         "Artifacts: ensemble.csv, summary.json, profile.csv, clock.csv, "
                         "dilation.csv, trace.log."));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return {std::nullopt, kExitOk};
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return {std::nullopt, kExitOk};
  } catch (const CLI::ParseError& e) {
    err << "hiddentime: " << e.what() << "\n";
    return {std::nullopt, kExitConfigError};
  }
  c.mode = parse_lottery_mode(mode);
  if (c.out_dir.empty()) {
    const char* env = std::getenv(kOutputDirEnv);
    c.out_dir = env && *env ? env : "hiddentime-out";
  }
  return {c, kExitOk};
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const ParseResult parsed = parse_command_line(argc, argv, out, err);
  if (!parsed.config) return parsed.exit_code;
  return run(*parsed.config, out, err);
}

}  // namespace hiddentime::cli

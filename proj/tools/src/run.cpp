#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hiddentime/chronometry.hpp"
#include "hiddentime/cli/run.hpp"
#include "hiddentime/error.hpp"
#include "hiddentime/experiments.hpp"
#include "json.hpp"

namespace hiddentime::cli {

namespace {

namespace fs = std::filesystem;

struct Gate {
  std::optional<double> tv;
  bool chi_square = false;
};

Gate default_gate(const RunConfig& c) {
  Gate g;
  if (c.scenario == "star" || c.scenario == "two-path") {
    g.tv = 0.01;
    g.chi_square = true;
  } else if (c.scenario == "double-slit") {
    g.tv = 0.02;
    g.chi_square = true;
  }
  if (c.tv_threshold) {
    g.tv = c.tv_threshold;
    g.chi_square = true;
  }
  return g;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  f << text;
}

std::vector<double> star_intensities(const RunConfig& c) {
  if (!c.intensities.empty()) return c.intensities;
  std::vector<double> v(static_cast<std::size_t>(c.detectors), 1.0);
  if (v.size() > 1) v.back() = 2.0;
  return v;
}

Lattice scenario_lattice(const RunConfig& c) {
  if (c.scenario == "star") {
    const auto intensities = star_intensities(c);
    return build_star_for_intensities(intensities, c.arm_hops, c.wavelength);
  }
  if (c.scenario == "two-path") return build_two_path(c.length_a, c.length_b, c.hops, c.wavelength);
  if (c.scenario == "double-slit") {
    SlitGridSpec spec = double_slit_spec(c.slit_separation, c.slits);
    spec.wavelength = c.wavelength;
    return build_slit_grid(spec);
  }
  if (c.scenario == "grid") {
    if (c.detectors > c.height) {
      throw Error(ErrorCode::InvalidArgument, "grid: more detectors than rows");
    }
    GridSpec spec;
    spec.width = c.width;
    spec.height = c.height;
    spec.wavelength = c.wavelength;
    spec.source = {0, c.height / 2};
    const int first = (c.height - c.detectors) / 2;
    for (int i = 0; i < c.detectors; ++i) spec.detectors.push_back({c.width - 1, first + i});
    return build_grid(spec);
  }
  return load_topology_file(c.topology);
}

void validate(const RunConfig& c) {
  if (c.scenario == "custom") {
    if (c.topology.empty()) {
      throw Error(ErrorCode::InvalidArgument, "--scenario custom needs --topology");
    }
    if (!fs::is_regular_file(c.topology)) {
      throw Error(ErrorCode::InvalidArgument, "topology file not found: " + c.topology);
    }
  }
  if (c.scenario == "star" && !c.intensities.empty() &&
      c.intensities.size() != static_cast<std::size_t>(c.detectors)) {
    throw Error(ErrorCode::InvalidArgument, "--intensities needs one value per detector");
  }
  for (double v : c.velocities) {
    if (!(v >= 0.0 && v < 1.0)) {
      throw Error(ErrorCode::InvalidVelocity, "velocity " + format_double(v) + " outside [0, 1)");
    }
  }
}

int run_ensemble_scenario(const RunConfig& c, const fs::path& out_dir, std::ostream& out) {
  const Lattice lattice = scenario_lattice(c);
  EnsembleOptions opts;
  opts.engine.mode = c.mode;
  opts.engine.dark_threshold = c.eps_intensity;
  opts.engine.same_source_tolerance = c.eps_same;
  if (c.max_hops > 0) opts.engine.admissibility = MaxHops{c.max_hops};
  opts.trials = c.trials;
  opts.master_seed = c.seed;
  opts.jobs = c.jobs;

  EnsembleResult result;
  std::optional<InterferenceProfile> profile;
  if (c.scenario == "double-slit") {
    profile = interference_profile(lattice, opts, c.scenario);
    result = profile->ensemble;
  } else {
    result = run_ensemble(lattice, opts, c.scenario);
  }

  const Gate gate = default_gate(c);
  const double critical = chi_square_critical(result.chi_square.dof, c.chi_percentile);
  bool passed = true;
  if (gate.tv && result.tv_distance > *gate.tv) passed = false;
  if (gate.chi_square && !result.chi_square.underpowered && result.chi_square.dof > 0 &&
      result.chi_square.statistic > critical) {
    passed = false;
  }

  std::ostringstream csv;
  write_ensemble_csv(csv, result);
  write_file(out_dir / "ensemble.csv", csv.str());

  auto summary = nlohmann::ordered_json::parse(ensemble_summary_json(result, c.chi_percentile));
  summary["tv_threshold"] = gate.tv ? nlohmann::ordered_json(*gate.tv) : nlohmann::ordered_json();
  summary["gated"] = gate.tv.has_value();
  summary["passed"] = passed;
  if (profile) {
    std::ostringstream p;
    write_profile_csv(p, *profile);
    write_file(out_dir / "profile.csv", p.str());
    summary["interior_minima"] = interior_minima(profile->oracle_intensity).size();
  }
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");

  if (c.trace) {
    TrialLog log;
    TrialRunner(lattice, opts.engine).run(c.seed, 0, &log);
    write_file(out_dir / "trace.log", log.str());
  }

  out << c.scenario << ": " << result.trials << " trials, " << result.detectors.size()
      << " detectors, tv=" << format_double(result.tv_distance)
      << ", chi2=" << format_double(result.chi_square.statistic) << " (dof "
      << result.chi_square.dof << ", critical " << format_double(critical) << ")";
  if (result.chi_square.underpowered) out << ", underpowered";
  if (gate.tv) {
    out << (passed ? ", PASS" : ", FAIL") << " at tv <= " << format_double(*gate.tv) << "\n";
  } else {
    out << ", not gated\n";
  }
  return passed ? kExitOk : kExitThresholdFailure;
}

int run_clock(const RunConfig& c, const fs::path& out_dir, std::ostream& out) {
  std::ostringstream csv;
  csv << "source_distance,laser_distance,cadence,laser_count\n";
  std::uint64_t last = 0;
  for (int d = 1; d <= c.distance; ++d) {
    last = queue_clock_count(ClockScenario{d, c.laser_distance, c.cadence}).laser_count;
    csv << d << ',' << c.laser_distance << ',' << c.cadence << ',' << last << '\n';
  }
  write_file(out_dir / "clock.csv", csv.str());
  out << "clock: d_S=" << c.distance << " d_L=" << c.laser_distance << " m=" << c.cadence
      << " -> " << last << " laser scouts\n";
  return kExitOk;
}

int run_dilation(const RunConfig& c, const fs::path& out_dir, std::ostream& out) {
  const std::vector<double> velocities =
      c.velocities.empty() ? std::vector<double>{0.0, 0.6, 0.8} : c.velocities;
  std::ostringstream csv;
  csv << "velocity,time\n";
  for (double v : velocities) {
    const double t = dilation_time(c.tau, v);
    csv << format_double(v) << ',' << format_double(t) << '\n';
    out << "dilation: v=" << format_double(v) << " tau=" << format_double(c.tau)
        << " -> t=" << format_double(t) << "\n";
  }
  write_file(out_dir / "dilation.csv", csv.str());
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const fs::path out_dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
      throw Error(ErrorCode::InvalidArgument,
                  "cannot create output directory " + out_dir.string() + ": " + ec.message());
    }
    if (config.scenario == "clock") return run_clock(config, out_dir, out);
    if (config.scenario == "dilation") return run_dilation(config, out_dir, out);
    return run_ensemble_scenario(config, out_dir, out);
  } catch (const std::exception& e) {
    err << "hiddentime: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace hiddentime::cli

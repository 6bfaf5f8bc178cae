// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "hiddentime/chronometry.hpp"
#include "hiddentime/cli/run.hpp"
#include "hiddentime/error.hpp"
#include "hiddentime/experiments.hpp"
#include "test_support.hpp"

using namespace hiddentime;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

// --- 1 -----------------------------------------------------------------------
Verdict two_path() {
  const double in_phase = propagate_scouts(build_two_path(2.0, 2.0, 2), ForwardDag{}).records[0].intensity();
  const double opposed = propagate_scouts(build_two_path(2.0, 2.5, 2), ForwardDag{}).records[0].intensity();
  return {std::abs(in_phase - 4.0) <= 1e-9 && opposed <= 1e-18,
          "I(2.0,2.0)=" + fmt(in_phase, 12) + " I(2.0,2.5)=" + fmt(opposed, 3)};
}

// --- 2 -----------------------------------------------------------------------
Verdict engine_oracle() {
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  std::size_t detectors = 0;
  std::size_t largest = 0;
  for (int i = 0; i < 20; ++i) {
    const Lattice l = testing::random_lattice(rng, {.max_nodes = 200});
    largest = std::max(largest, l.node_count());
    const ScoutField field = propagate_scouts(l, ForwardDag{});
    const auto oracle_amps = oracle::detector_amplitudes(l, ForwardDag{});
    for (std::size_t d = 0; d < oracle_amps.size(); ++d) {
      const Amplitude e = field.records[d].amplitude();
      const Amplitude o = oracle_amps[d].second;
      worst = std::max({worst, std::abs(e.re - o.re), std::abs(e.im - o.im)});
      if (field.arrivals[d].size() != oracle::enumerate_paths(l, oracle_amps[d].first, ForwardDag{}).size()) {
        return {false, "path count mismatch on lattice " + std::to_string(i)};
      }
      ++detectors;
    }
  }
  return {worst <= 1e-9, "20 lattices (<= " + std::to_string(largest) + " nodes), " +
                             std::to_string(detectors) + " detectors, max |diff|=" + fmt(worst, 3)};
}

// --- 3 -----------------------------------------------------------------------
Verdict star_born() {
  const double intensities[] = {1.0, 1.0, 2.0};
  const Lattice l = build_star_for_intensities(intensities);
  EnsembleOptions opts;
  opts.trials = 200000;
  opts.master_seed = 42;
  opts.jobs = 4;
  const EnsembleResult r = run_ensemble(l, opts, "star");
  const double expected[] = {0.25, 0.25, 0.5};
  double worst = 0.0;
  std::string freqs;
  for (std::size_t i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(r.empirical[i].second - expected[i]));
    freqs += (i ? "," : "") + fmt(r.empirical[i].second);
  }
  const double critical = chi_square_critical(r.chi_square.dof, 0.99);
  return {worst <= 0.005 && r.chi_square.dof == 2 && r.chi_square.statistic < critical,
          "freq=(" + freqs + ") max dev=" + fmt(worst, 3) + " chi2=" + fmt(r.chi_square.statistic) +
              " < " + fmt(critical)};
}

// --- 4 -----------------------------------------------------------------------
Verdict tree_merge() {
  const double palette[] = {1.0, 2.0, 0.5, 3.0};
  double exact_worst = 0.0;
  double mc_worst = 0.0;
  double naive_worst = 0.0;
  std::string naive_shape;
  int instances = 0;
  for (int leaves = 1; leaves <= 4; ++leaves) {
    for (const std::string& shape : testing::merge_tree_shapes(leaves)) {
      if (testing::merge_node_count(shape) > 3) continue;
      ++instances;
      MergeTreeSpec spec;
      spec.parent = testing::parents_from_shape(shape);
      for (int k = 0; k < leaves; ++k) spec.leaf_intensities.push_back(palette[(k + instances) % 4]);
      double total = 0.0;
      for (double v : spec.leaf_intensities) total += v;

      const auto aggregate = testing::exact_selection(spec.parent, spec.leaf_intensities, LotteryMode::Aggregate);
      const auto naive = testing::exact_selection(spec.parent, spec.leaf_intensities, LotteryMode::Naive);
      double naive_tv = 0.0;
      for (std::size_t i = 0; i < aggregate.size(); ++i) {
        const double born = spec.leaf_intensities[i] / total;
        exact_worst = std::max(exact_worst, std::abs(aggregate[i] - born));
        naive_tv += 0.5 * std::abs(naive[i] - born);
      }
      if (naive_tv > naive_worst) {
        naive_worst = naive_tv;
        naive_shape = shape;
      }

      const Lattice l = build_merge_tree(spec);
      EnsembleOptions opts;
      opts.trials = 100000;
      opts.master_seed = 7 + static_cast<std::uint64_t>(instances);
      opts.jobs = 4;
      const EnsembleResult r = run_ensemble(l, opts, shape);
      for (std::size_t i = 0; i < r.reference.entries.size(); ++i) {
        const double born = spec.leaf_intensities[i] / total;
        if (std::abs(r.reference.entries[i].second - born) > 1e-9) {
          return {false, shape + ": lattice intensities do not match the requested leaves"};
        }
      }
      mc_worst = std::max(mc_worst, r.tv_distance);
    }
  }
  return {exact_worst <= 1e-12 && mc_worst <= 0.01,
          std::to_string(instances) + " trees, exact max dev=" + fmt(exact_worst, 3) +
              ", MC max tv=" + fmt(mc_worst, 3) + "; naive (reported) max tv=" + fmt(naive_worst, 3) +
              " on " + naive_shape};
}

// --- 5 -----------------------------------------------------------------------
Verdict double_slit() {
  EnsembleOptions opts;
  opts.trials = 100000;
  opts.master_seed = 42;
  opts.jobs = 4;
  const InterferenceProfile two = interference_profile(build_slit_grid(double_slit_spec(6, 2)), opts);
  const auto minima = interior_minima(two.oracle_intensity);

  const auto one_amps = oracle::detector_amplitudes(build_slit_grid(double_slit_spec(6, 1)), ForwardDag{});
  std::vector<double> one;
  for (const auto& [d, a] : one_amps) one.push_back(a.norm2());
  const double peak = *std::max_element(one.begin(), one.end());
  std::size_t deep = 0;
  for (std::size_t i : interior_minima(one)) deep += one[i] < 0.1 * peak;

  return {!minima.empty() && deep == 0 && two.ensemble.tv_distance <= 0.02,
          "two slits: " + std::to_string(minima.size()) + " interior minima; one slit: " +
              std::to_string(deep) + " below 10% of peak; tv=" + fmt(two.ensemble.tv_distance, 3)};
}

// --- 6 -----------------------------------------------------------------------
// Independent check of the confirmed ribs: they must form one simple path
// from the source to the winner, and nothing else may stay marked.
std::string polyline_problem(const Lattice& l, const TrialOutcome& out) {
  std::map<std::uint32_t, std::vector<std::uint32_t>> adj;
  for (std::uint32_t r = 0; r < out.final_ribs.size(); ++r) {
    if (out.final_ribs[r].mark == RibMark::Confirmed) {
      adj[l.rib(RibId{r}).a.value].push_back(l.rib(RibId{r}).b.value);
      adj[l.rib(RibId{r}).b.value].push_back(l.rib(RibId{r}).a.value);
    } else if (out.final_ribs[r].mark != RibMark::Void) {
      return "rib " + std::to_string(r) + " left " + std::string(to_string(out.final_ribs[r].mark));
    }
  }
  std::uint32_t at = l.source().value;
  std::set<std::uint32_t> seen{at};
  std::size_t used = 0;
  std::uint32_t prev = UINT32_MAX;
  while (at != out.winner.value) {
    const auto& next = adj[at];
    const std::size_t expected = at == l.source().value ? 1 : 2;
    if (next.size() != expected) return "node " + std::to_string(at) + " has confirmed degree " + std::to_string(next.size());
    const std::uint32_t step = next[0] != prev ? next[0] : next[1];
    prev = at;
    at = step;
    ++used;
    if (!seen.insert(at).second) return "confirmed ribs revisit node " + std::to_string(at);
  }
  if (adj[at].size() != 1) return "winner has confirmed degree " + std::to_string(adj[at].size());
  std::size_t confirmed = 0;
  for (const auto& [n, v] : adj) confirmed += v.size();
  if (confirmed != 2 * used) return "confirmed ribs off the path";
  if (out.surviving_path.size() != used + 1) return "surviving_path disagrees with confirmed ribs";
  return {};
}

Verdict winner_path() {
  std::mt19937_64 rng(6);
  int trials = 0;
  int lattices = 0;
  std::set<std::size_t> sizes;
  while (trials < 1000) {
    const Lattice l = testing::random_lattice(rng, {.max_nodes = 150, .max_paths = 50000});
    EngineOptions opts;
    opts.mode = lattices % 2 ? LotteryMode::Naive : LotteryMode::Aggregate;
    const TrialRunner runner(l, opts);
    ++lattices;
    for (std::uint64_t t = 0; t < 10 && trials < 1000; ++t) {
      TrialOutcome out;
      try {
        out = runner.run(rng(), t);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::DarkTrial) break;
        throw;
      }
      ++trials;
      if (const std::string problem = polyline_problem(l, out); !problem.empty()) {
        return {false, "trial " + std::to_string(trials) + ": " + problem};
      }
    }
  }
  return {true, std::to_string(trials) + " trials over " + std::to_string(lattices) +
                    " lattices, every trial leaves one simple source-winner path"};
}

// --- 7 -----------------------------------------------------------------------
Verdict queue_clock() {
  std::string got;
  bool ok = true;
  const int distances[] = {5, 10, 20};
  const std::uint64_t halves[] = {3, 5, 10};
  for (int i = 0; i < 3; ++i) {
    const auto m1 = queue_clock_count({distances[i], 1, 1}).laser_count;
    const auto m2 = queue_clock_count({distances[i], 1, 2}).laser_count;
    ok = ok && m1 == static_cast<std::uint64_t>(distances[i]) && m2 == halves[i];
    got += (i ? " " : "") + std::to_string(distances[i]) + "->" + std::to_string(m1) + "/" + std::to_string(m2);
  }
  return {ok, "d_S->count m=1/m=2: " + got};
}

// --- 8 -----------------------------------------------------------------------
Verdict dilation() {
  const double a = dilation_time(1.0, 0.0);
  const double b = dilation_time(1.0, 0.6);
  const double c = dilation_time(2.0, 0.8);
  bool ok = std::abs(a - 1.0) <= 1e-12 && std::abs(b - 1.25) <= 1e-12 && std::abs(c - 10.0 / 3.0) <= 1e-12;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double v = 0.99 * i / 99.0;
    worst = std::max(worst, std::abs(dilation_time(1.0, v) * std::sqrt(1.0 - v * v) - 1.0));
  }
  ok = ok && worst <= 1e-12;
  return {ok, "t=" + fmt(a, 15) + ", " + fmt(b, 15) + ", " + fmt(c, 15) + "; sweep max |t*sqrt(1-v^2)-tau|=" + fmt(worst, 3)};
}

// --- 9 -----------------------------------------------------------------------
std::map<std::string, std::string> artifacts(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ifstream f(entry.path(), std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    out[entry.path().filename().string()] = s.str();
  }
  return out;
}

Verdict parallel_invariance() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "hiddentime_acceptance";
  fs::remove_all(root);
  std::size_t files = 0;
  for (const char* scenario : {"star", "double-slit", "grid"}) {
    std::map<std::string, std::string> previous;
    for (unsigned jobs : {1u, 8u}) {
      cli::RunConfig c;
      c.scenario = scenario;
      c.trials = 50000;
      c.seed = 1234;
      c.jobs = jobs;
      c.trace = true;
      c.out_dir = (root / (std::string(scenario) + "-" + std::to_string(jobs))).string();
      std::ostringstream out;
      std::ostringstream err;
      const int code = cli::run(c, out, err);
      if (code == cli::kExitConfigError) return {false, std::string(scenario) + ": " + err.str()};
      auto current = artifacts(c.out_dir);
      if (jobs == 8 && current != previous) {
        return {false, std::string(scenario) + ": artifacts differ between --jobs 1 and --jobs 8"};
      }
      files += jobs == 8 ? current.size() : 0;
      previous = std::move(current);
    }
  }
  fs::remove_all(root);
  return {true, std::to_string(files) + " artifact files byte-identical at --jobs 1 and --jobs 8"};
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;  // 0: no runtime bound
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "two-path interference", 1.0, two_path},
      {2, "engine-oracle amplitude equivalence", 10.0, engine_oracle},
      {3, "star Born frequencies", 30.0, star_born},
      {4, "aggregate tree Born exactness", 0.0, tree_merge},
      {5, "double-slit fringes", 60.0, double_slit},
      {6, "winner-path invariant", 0.0, winner_path},
      {7, "queue-clock linearity", 0.0, queue_clock},
      {8, "dilation", 0.0, dilation},
      {9, "determinism and parallel invariance", 0.0, parallel_invariance},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      v.pass = false;
      v.detail += " [over " + fmt(c.budget_seconds) + " s budget]";
    }
    failed += !v.pass;
    std::printf("%s %d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.number, c.name, v.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}

#include "hiddentime/experiments.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>

#include "hiddentime/error.hpp"
#include "json.hpp"

namespace hiddentime {

namespace {

constexpr double kSumTolerance = 1e-9;

double total(const Distribution& d) {
  double s = 0.0;
  for (const auto& e : d) s += e.second;
  return s;
}

struct TrialFailure {
  std::uint64_t trial = std::numeric_limits<std::uint64_t>::max();
  std::exception_ptr error;
};

}  // namespace

double tv_distance(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::SupportMismatch, "distributions have different support sizes");
  }
  if (std::abs(total(p) - 1.0) > kSumTolerance || std::abs(total(q) - 1.0) > kSumTolerance) {
    throw Error(ErrorCode::InvalidArgument, "distributions must sum to 1");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].first != q[i].first) {
      throw Error(ErrorCode::SupportMismatch,
                  "detector " + std::to_string(p[i].first.value) + " vs " +
                      std::to_string(q[i].first.value));
    }
    sum += std::abs(p[i].second - q[i].second);
  }
  return 0.5 * sum;
}

ChiSquareResult chi_square(std::span<const std::uint64_t> counts, const Distribution& reference,
                           std::uint64_t trials) {
  if (counts.size() != reference.size()) {
    throw Error(ErrorCode::SupportMismatch, "counts and reference differ in size");
  }
  ChiSquareResult result;
  int support = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = static_cast<double>(trials) * reference[i].second;
    const double observed = static_cast<double>(counts[i]);
    if (reference[i].second <= 0.0) {
      if (counts[i] > 0) result.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    ++support;
    if (expected < 5.0) result.underpowered = true;
    result.statistic += (observed - expected) * (observed - expected) / expected;
  }
  result.dof = std::max(0, support - 1);
  return result;
}

double chi_square_critical(int dof, double percentile) {
  if (dof < 1) return 0.0;
  if (!(percentile > 0.0 && percentile < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "percentile must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), percentile);
}

bool operator==(const EnsembleResult& a, const EnsembleResult& b) {
  return a.lattice_id == b.lattice_id && a.mode == b.mode && a.trials == b.trials &&
         a.master_seed == b.master_seed && a.detectors == b.detectors && a.counts == b.counts &&
         a.empirical == b.empirical && a.reference.entries == b.reference.entries &&
         a.reference.total_intensity == b.reference.total_intensity &&
         a.tv_distance == b.tv_distance && a.chi_square.statistic == b.chi_square.statistic &&
         a.chi_square.dof == b.chi_square.dof &&
         a.chi_square.underpowered == b.chi_square.underpowered &&
         a.degenerate_trials == b.degenerate_trials;
}

EnsembleResult run_ensemble(const Lattice& lattice, const EnsembleOptions& options,
                            std::string lattice_id) {
  if (options.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  const TrialRunner runner(lattice, options.engine);
  const auto detectors = lattice.detectors();
  std::vector<std::size_t> slot(lattice.node_count(), 0);
  for (std::size_t i = 0; i < detectors.size(); ++i) slot[detectors[i].value] = i;

  const unsigned jobs = std::max(1u, options.jobs);
  std::vector<std::vector<std::uint64_t>> counts(jobs,
                                                 std::vector<std::uint64_t>(detectors.size(), 0));
  std::vector<std::uint64_t> degenerate(jobs, 0);
  std::vector<TrialFailure> failures(jobs);

  auto work = [&](unsigned job) {
    const std::uint64_t begin = options.trials * job / jobs;
    const std::uint64_t end = options.trials * (job + 1) / jobs;
    for (std::uint64_t t = begin; t < end; ++t) {
      try {
        const TrialOutcome outcome = runner.run(options.master_seed, t);
        ++counts[job][slot[outcome.winner.value]];
        if (outcome.degenerate_lottery) ++degenerate[job];
      } catch (...) {
        failures[job] = {t, std::current_exception()};
        return;
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(work, j);
    for (auto& th : threads) th.join();
  }

  const auto first_failure = std::min_element(
      failures.begin(), failures.end(),
      [](const TrialFailure& a, const TrialFailure& b) { return a.trial < b.trial; });
  if (first_failure->error) {
    try {
      std::rethrow_exception(first_failure->error);
    } catch (const Error& e) {
      throw Error(e.code(), "trial " + std::to_string(first_failure->trial) + ": " + e.what());
    }
  }

  EnsembleResult result;
  result.lattice_id = std::move(lattice_id);
  result.mode = options.engine.mode;
  result.trials = options.trials;
  result.master_seed = options.master_seed;
  result.detectors.assign(detectors.begin(), detectors.end());
  result.counts.assign(detectors.size(), 0);
  for (unsigned j = 0; j < jobs; ++j) {
    for (std::size_t i = 0; i < detectors.size(); ++i) result.counts[i] += counts[j][i];
    result.degenerate_trials += degenerate[j];
  }
  for (std::size_t i = 0; i < detectors.size(); ++i) {
    result.empirical.emplace_back(detectors[i], static_cast<double>(result.counts[i]) /
                                                    static_cast<double>(options.trials));
  }

  const auto amplitudes = oracle::detector_amplitudes(lattice, options.engine.admissibility,
                                                      options.engine.path_budget);
  result.reference = oracle::born_distribution(amplitudes, options.engine.dark_threshold);
  result.tv_distance = tv_distance(result.empirical, result.reference.entries);
  result.chi_square = chi_square(result.counts, result.reference.entries, options.trials);
  return result;
}

InterferenceProfile interference_profile(const Lattice& slit_lattice,
                                         const EnsembleOptions& options, std::string lattice_id) {
  InterferenceProfile profile;
  profile.ensemble = run_ensemble(slit_lattice, options, std::move(lattice_id));
  const auto amplitudes = oracle::detector_amplitudes(slit_lattice, options.engine.admissibility,
                                                      options.engine.path_budget);

  std::vector<std::size_t> order(amplitudes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return slit_lattice.node(amplitudes[a].first).position.y <
           slit_lattice.node(amplitudes[b].first).position.y;
  });
  for (std::size_t i : order) {
    const NodeId d = amplitudes[i].first;
    profile.detectors.push_back(d);
    profile.positions.push_back(slit_lattice.node(d).position.y);
    profile.oracle_intensity.push_back(amplitudes[i].second.norm2());
    profile.empirical.push_back(profile.ensemble.empirical[i].second);
  }
  return profile;
}

std::vector<std::size_t> interior_minima(std::span<const double> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] < values[i - 1] && values[i] < values[i + 1]) out.push_back(i);
  }
  return out;
}

void write_ensemble_csv(std::ostream& out, const EnsembleResult& r) {
  out << "detector_id,count,empirical,born,abs_error\n";
  for (std::size_t i = 0; i < r.detectors.size(); ++i) {
    const double born = r.reference.entries[i].second;
    const double empirical = r.empirical[i].second;
    out << r.detectors[i].value << ',' << r.counts[i] << ',' << format_double(empirical) << ','
        << format_double(born) << ',' << format_double(std::abs(empirical - born)) << '\n';
  }
}

void write_profile_csv(std::ostream& out, const InterferenceProfile& p) {
  out << "screen_index,position,oracle_intensity,empirical_frequency\n";
  for (std::size_t i = 0; i < p.detectors.size(); ++i) {
    out << i << ',' << format_double(p.positions[i]) << ',' << format_double(p.oracle_intensity[i])
        << ',' << format_double(p.empirical[i]) << '\n';
  }
}

std::string ensemble_summary_json(const EnsembleResult& r, double chi_square_percentile) {
  nlohmann::ordered_json j;
  j["lattice"] = r.lattice_id;
  j["mode"] = std::string(to_string(r.mode));
  j["trials"] = r.trials;
  j["seed"] = r.master_seed;
  j["detectors"] = r.detectors.size();
  j["tv_distance"] = r.tv_distance;
  if (std::isfinite(r.chi_square.statistic)) {
    j["chi_square"] = r.chi_square.statistic;
  } else {
    j["chi_square"] = "inf";
  }
  j["dof"] = r.chi_square.dof;
  j["chi_square_percentile"] = chi_square_percentile;
  j["chi_square_critical"] = chi_square_critical(r.chi_square.dof, chi_square_percentile);
  j["underpowered"] = r.chi_square.underpowered;
  j["degenerate_trials"] = r.degenerate_trials;
  return j.dump(2) + "\n";
}

}  // namespace hiddentime

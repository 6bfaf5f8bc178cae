#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hiddentime/error.hpp"
#include "hiddentime/oracle.hpp"
#include "hiddentime/scouts.hpp"
#include "test_support.hpp"

namespace hiddentime {
namespace {

constexpr double kPi = std::numbers::pi;

oracle::PathRecord with_phase(double radians) {
  oracle::PathRecord p;
  p.phase = Phase::from_radians(radians);
  return p;
}

std::vector<std::pair<NodeId, Amplitude>> amps_for(std::initializer_list<double> intensities) {
  std::vector<std::pair<NodeId, Amplitude>> out;
  std::uint32_t id = 1;
  for (double i : intensities) out.push_back({NodeId{id++}, Amplitude{std::sqrt(i), 0.0}});
  return out;
}

TEST(EnumeratePaths, TwoPath) {
  const Lattice l = build_two_path(2.0, 2.5, 3);
  const auto paths = oracle::enumerate_paths(l, l.detectors()[0], ForwardDag{});
  ASSERT_EQ(paths.size(), 2u);
  std::vector<double> lengths{paths[0].total_length, paths[1].total_length};
  std::sort(lengths.begin(), lengths.end());
  EXPECT_NEAR(lengths[0], 2.0, 1e-9);
  EXPECT_NEAR(lengths[1], 2.5, 1e-9);
  for (const auto& p : paths) {
    EXPECT_EQ(p.nodes.front(), l.source());
    EXPECT_EQ(p.nodes.back(), l.detectors()[0]);
  }
}

TEST(EnumeratePaths, OnePerStarArm) {
  const double lengths[] = {1.0, 0.7, 1.3, 0.2};
  const Lattice l = build_star(4, 3, lengths);
  for (NodeId d : l.detectors()) {
    EXPECT_EQ(oracle::enumerate_paths(l, d, ForwardDag{}).size(), 1u);
  }
}

TEST(EnumeratePaths, GridCornerToCorner) {
  GridSpec spec;
  spec.detectors = {{2, 2}};
  const Lattice l = build_grid(spec);
  const auto paths = oracle::enumerate_paths(l, l.detectors()[0], ForwardDag{});
  EXPECT_EQ(paths.size(), 6u);
  for (std::size_t i = 1; i < paths.size(); ++i) {
    EXPECT_TRUE(std::lexicographical_compare(paths[i - 1].nodes.begin(), paths[i - 1].nodes.end(),
                                             paths[i].nodes.begin(), paths[i].nodes.end()));
  }
}

TEST(EnumeratePaths, BudgetExceeded) {
  GridSpec spec;
  spec.detectors = {{2, 2}};
  const Lattice l = build_grid(spec);
  try {
    oracle::enumerate_paths(l, l.detectors()[0], ForwardDag{}, 3);
    FAIL() << "budget ignored";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PathBudgetExceeded);
  }
}

TEST(EnumeratePaths, MatchesDynamicProgrammingCount) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    const Lattice l = testing::random_lattice(rng, {.max_nodes = 100, .max_paths = 30000});
    std::uint64_t total = 0;
    for (NodeId d : l.detectors()) total += oracle::enumerate_paths(l, d, ForwardDag{}).size();
    EXPECT_EQ(total, testing::forward_path_count(l));
  }
}

TEST(DetectorAmplitude, Examples) {
  const std::vector<oracle::PathRecord> a{with_phase(0), with_phase(0)};
  EXPECT_NEAR(oracle::detector_amplitude(a).re, 2.0, 1e-12);
  EXPECT_NEAR(oracle::detector_amplitude(a).im, 0.0, 1e-12);
  const std::vector<oracle::PathRecord> b{with_phase(0), with_phase(kPi)};
  EXPECT_NEAR(oracle::detector_amplitude(b).re, 0.0, 1e-12);
  EXPECT_NEAR(oracle::detector_amplitude(b).im, 0.0, 1e-12);
  const std::vector<oracle::PathRecord> c{with_phase(0), with_phase(kPi / 2)};
  EXPECT_NEAR(oracle::detector_amplitude(c).re, 1.0, 1e-12);
  EXPECT_NEAR(oracle::detector_amplitude(c).im, 1.0, 1e-12);
  EXPECT_EQ(oracle::detector_amplitude({}).norm2(), 0.0);
}

TEST(BornDistribution, Examples) {
  const auto a = oracle::born_distribution(amps_for({1.0, 3.0}));
  EXPECT_NEAR(a.entries[0].second, 0.25, 1e-12);
  EXPECT_NEAR(a.entries[1].second, 0.75, 1e-12);
  EXPECT_NEAR(a.total_intensity, 4.0, 1e-12);

  const auto b = oracle::born_distribution(amps_for({0.0, 5.0}));
  EXPECT_EQ(b.entries[0].second, 0.0);
  EXPECT_NEAR(b.entries[1].second, 1.0, 1e-12);
  EXPECT_NEAR(b.probability(NodeId{2}), 1.0, 1e-12);

  const auto c = oracle::born_distribution(amps_for({0.3}));
  EXPECT_NEAR(c.entries[0].second, 1.0, 1e-12);
}

TEST(BornDistribution, AllDark) {
  try {
    oracle::born_distribution(amps_for({0.0, 0.0}));
    FAIL() << "dark configuration accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DarkConfiguration);
  }
  EXPECT_THROW(oracle::born_distribution(amps_for({1e-13}), 1e-12), Error);
}

// Relabelling node ids leaves every detector's intensity unchanged.
TEST(Oracle, InvariantUnderNodePermutation) {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 8; ++i) {
    const Lattice l = testing::random_lattice(rng, {.max_nodes = 90, .max_paths = 20000});
    std::vector<std::uint32_t> perm(l.node_count());
    for (std::uint32_t k = 0; k < perm.size(); ++k) perm[k] = k;
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<Node> nodes;
    for (const Node& n : l.nodes()) nodes.push_back(Node{NodeId{perm[n.id.value]}, n.position, n.kind});
    std::vector<Rib> ribs;
    for (const Rib& r : l.ribs()) ribs.push_back(Rib{NodeId{perm[r.a.value]}, NodeId{perm[r.b.value]}, r.length});
    const Lattice shuffled = Lattice::create(nodes, ribs, l.wavelength());

    const auto before = oracle::detector_amplitudes(l, ForwardDag{});
    const auto after = oracle::detector_amplitudes(shuffled, ForwardDag{});
    for (const auto& [d, amp] : before) {
      const auto it = std::find_if(after.begin(), after.end(), [&](const auto& e) {
        return e.first.value == perm[d.value];
      });
      ASSERT_NE(it, after.end());
      EXPECT_NEAR(it->second.norm2(), amp.norm2(), 1e-9);
    }
  }
}

TEST(Oracle, SlitProfileSymmetric) {
  const Lattice l = build_slit_grid(double_slit_spec(6, 2));
  const auto amps = oracle::detector_amplitudes(l, ForwardDag{});
  // Screen detectors are created bottom to top and mirror about the centre.
  for (std::size_t i = 0; i < amps.size(); ++i) {
    EXPECT_NEAR(amps[i].second.norm2(), amps[amps.size() - 1 - i].second.norm2(), 1e-9);
  }
}

TEST(Oracle, IntensityBoundedByPathCountSquared) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    const Lattice l = testing::random_lattice(rng, {.max_nodes = 100, .max_paths = 20000});
    for (NodeId d : l.detectors()) {
      const auto paths = oracle::enumerate_paths(l, d, ForwardDag{});
      const double n = static_cast<double>(paths.size());
      EXPECT_LE(oracle::detector_amplitude(paths).norm2(), n * n + 1e-9);
    }
  }
}

}  // namespace
}  // namespace hiddentime

#include <gtest/gtest.h>

#include <random>

#include "hiddentime/error.hpp"
#include "hiddentime/lattice.hpp"
#include "test_support.hpp"

namespace hiddentime {
namespace {

ErrorCode load_error(std::string_view doc) {
  try {
    load_topology(doc);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "document accepted:\n" << doc;
  return ErrorCode::InvalidArgument;
}

constexpr std::string_view kChain = R"(wavelength: 1.0
nodes:
  - {id: 0, kind: source, position: [0, 0]}
  - {id: 1, kind: void, position: [1, 0]}
  - {id: 2, kind: detector, position: [2, 0]}
ribs:
  - {endpoints: [0, 1], length: 1.0}
  - {endpoints: [1, 2]}
)";

TEST(LoadTopology, ThreeNodeChain) {
  const Lattice l = load_topology(kChain);
  EXPECT_EQ(l.node_count(), 3u);
  EXPECT_EQ(l.rib_count(), 2u);
  EXPECT_EQ(l.detectors().size(), 1u);
  EXPECT_DOUBLE_EQ(l.rib(RibId{1}).length, 1.0);
  EXPECT_EQ(l.dimension(), 2);
}

TEST(LoadTopology, Diagnostics) {
  EXPECT_EQ(load_error(R"(wavelength: 1
nodes:
  - {id: 0, kind: source, position: [0, 0]}
  - {id: 1, kind: detector, position: [1, 0]}
ribs:
  - {endpoints: [0, 5]}
)"),
            ErrorCode::DanglingEndpoint);
  EXPECT_EQ(load_error(R"(nodes:
  - {id: 0, kind: source, position: [0, 0]}
  - {id: 1, kind: detector, position: [1, 0]}
ribs:
  - {endpoints: [0, 1]}
)"),
            ErrorCode::MissingWavelength);
  EXPECT_EQ(load_error(R"(wavelength: 1
nodes:
  - {id: 0, kind: source, position: [0, 0]}
  - {id: 0, kind: detector, position: [1, 0]}
ribs: []
)"),
            ErrorCode::DuplicateNodeId);
  EXPECT_EQ(load_error(R"(wavelength: 1
nodes:
  - {id: 0, kind: void, position: [0, 0]}
  - {id: 1, kind: detector, position: [1, 0]}
ribs:
  - {endpoints: [0, 1]}
)"),
            ErrorCode::MissingSource);
  EXPECT_EQ(load_error(R"(wavelength: 1
nodes:
  - {id: 0, kind: source, position: [0, 0]}
  - {id: 1, kind: detector, position: [1, 0]}
  - {id: 2, kind: detector, position: [3, 0]}
ribs:
  - {endpoints: [0, 1]}
)"),
            ErrorCode::DisconnectedDetector);
  EXPECT_EQ(load_error(R"(wavelength: 1
nodes:
  - {id: 0, kind: photon, position: [0, 0]}
)"),
            ErrorCode::MalformedDocument);
  EXPECT_EQ(load_error("wavelength: [1, 2\n"), ErrorCode::MalformedDocument);
}

void expect_round_trip(const Lattice& l) {
  const std::string text = serialize_topology(l);
  const Lattice back = load_topology(text);
  EXPECT_TRUE(back == l) << text;
  EXPECT_EQ(serialize_topology(back), text);
}

TEST(SerializeTopology, BuildersRoundTrip) {
  const double lengths[] = {1.0, 0.5, 2.0};
  expect_round_trip(build_star(3, 2, lengths));
  expect_round_trip(build_two_path(2.0, 2.5, 3));
  GridSpec grid;
  grid.width = 4;
  grid.detectors = {{3, 2}, {3, 0}};
  expect_round_trip(build_grid(grid));
  expect_round_trip(build_slit_grid(double_slit_spec()));
  const double intensities[] = {1.0, 1.0, 2.0};
  expect_round_trip(build_star_for_intensities(intensities));
  MergeTreeSpec tree;
  tree.parent = {-1, 0, 1, 1, 0};
  tree.leaf_intensities = {1.0, 1.0, 2.0};
  expect_round_trip(build_merge_tree(tree));
  expect_round_trip(build_clock_chain(5, 1));
}

TEST(SerializeTopology, RandomLatticesRoundTrip) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10; ++i) expect_round_trip(testing::random_lattice(rng));
}

TEST(LoadTopology, ThreeDimensional) {
  const Lattice l = load_topology(R"(wavelength: 0.5
nodes:
  - {id: 0, kind: source, position: [0, 0, 0]}
  - {id: 1, kind: detector, position: [0, 0, 2]}
ribs:
  - {endpoints: [0, 1]}
)");
  EXPECT_EQ(l.dimension(), 3);
  expect_round_trip(l);
}

}  // namespace
}  // namespace hiddentime

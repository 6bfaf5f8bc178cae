#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hiddentime {

struct NodeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct RibId {
  std::uint32_t value = 0;
  friend auto operator<=>(const RibId&, const RibId&) = default;
};

enum class NodeKind { Void, Source, Detector, LaserEmitter };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Position& a, const Position& b);

struct Node {
  NodeId id;
  Position position;
  NodeKind kind = NodeKind::Void;
};

struct Rib {
  NodeId a;
  NodeId b;
  double length = 0.0;

  NodeId other(NodeId n) const { return n == a ? b : a; }
  bool touches(NodeId n) const { return n == a || n == b; }
};

/// How strictly rib lengths are checked against endpoint positions.
enum class LengthCheck {
  Free,       ///< any positive length is accepted
  Euclidean,  ///< length must equal the endpoint distance within 1e-9
};

/// Only the source and void nodes pass signals on. Charged nodes (detectors,
/// laser emitters) absorb whatever reaches them.
inline bool relays(NodeKind kind) { return kind == NodeKind::Void || kind == NodeKind::Source; }

/// Immutable node/rib graph. Construction validates every structural invariant
/// and throws `Error` with a distinct code per violation.
class Lattice {
 public:
  static Lattice create(std::vector<Node> nodes, std::vector<Rib> ribs, double wavelength,
                        int dimension = 2, LengthCheck check = LengthCheck::Free);

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Rib> ribs() const { return ribs_; }
  const Node& node(NodeId id) const { return nodes_[id.value]; }
  const Rib& rib(RibId id) const { return ribs_[id.value]; }
  std::span<const RibId> incident(NodeId id) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t rib_count() const { return ribs_.size(); }
  double wavelength() const { return wavelength_; }
  int dimension() const { return dimension_; }
  NodeId source() const { return source_; }
  /// Detector ids in ascending order.
  std::span<const NodeId> detectors() const { return detectors_; }

  /// Hop distance from the source through relaying nodes; nullopt if unreachable.
  std::vector<std::optional<std::uint32_t>> hop_distances() const;

  friend bool operator==(const Lattice&, const Lattice&);

 private:
  Lattice() = default;

  std::vector<Node> nodes_;
  std::vector<Rib> ribs_;
  std::vector<std::uint32_t> adjacency_offsets_;
  std::vector<RibId> adjacency_;
  std::vector<NodeId> detectors_;
  NodeId source_;
  double wavelength_ = 1.0;
  int dimension_ = 2;
};

bool operator==(const Node& a, const Node& b);
bool operator==(const Rib& a, const Rib& b);

// ---------------------------------------------------------------------------
// Builders. Every builder emits Euclidean-consistent lattices and inserts void
// midpoints wherever a construction would otherwise need parallel ribs.

Lattice build_star(int num_detectors, int arm_hops, std::span<const double> arm_lengths,
                   double wavelength = 1.0);

/// One star arm: `path_lengths.size()` disjoint chains of `hops` ribs from the
/// source to the arm's detector, chain i with total length `path_lengths[i]`.
struct ArmBundle {
  int hops = 1;
  std::vector<double> path_lengths;
};

/// Chain lengths whose phasor sum has squared magnitude `intensity`. The first
/// chain has length `base_length`; the others are longer by whole wavelengths
/// plus, for the last one, the offset that sets the intensity.
ArmBundle bundle_for_intensity(double intensity, int hops, double base_length, double wavelength);

Lattice build_star_bundles(std::span<const ArmBundle> arms, double wavelength = 1.0);

/// Star whose detector intensities equal `intensities` (each > 0).
Lattice build_star_for_intensities(std::span<const double> intensities, int arm_hops = 2,
                                   double wavelength = 1.0);

Lattice build_two_path(double len_a, double len_b, int hops_per_path, double wavelength = 1.0);

struct GridCell {
  int col = 0;
  int row = 0;
  friend bool operator==(const GridCell&, const GridCell&) = default;
};

struct GridSpec {
  int width = 3;
  int height = 3;
  double spacing = 1.0;
  double wavelength = 1.0;
  GridCell source{0, 0};
  std::vector<GridCell> detectors;
};

/// 4-connected rectangular grid.
Lattice build_grid(const GridSpec& spec);

struct SlitGridSpec {
  int width = 3;          ///< columns; 0 holds the source, width-1 is the screen
  int height = 41;        ///< rows of every interior column
  int wall_column = 1;    ///< column blocked except for `open_rows`
  std::vector<int> open_rows;
  int screen_detectors = 41;  ///< detectors on the screen column, centred
  double column_spacing = 20.0;
  double row_spacing = 1.0;
  int reach = -1;  ///< max row offset of a rib between adjacent columns; -1 = unlimited
  double wavelength = 1.0;
};

/// Layered slit geometry: ribs only join adjacent columns, with Euclidean
/// lengths. Returns detectors in screen order (lowest row first).
Lattice build_slit_grid(const SlitGridSpec& spec);

/// Default double-slit: two single-row slits placed symmetrically about the
/// centre row, `separation` rows apart.
SlitGridSpec double_slit_spec(int separation = 6, int open_slits = 2);

/// Rooted merge tree: `parent[i]` is the parent of tree node i (node 0 is the
/// source, parent[0] ignored). Leaves become detectors with the given
/// intensities; interior nodes become void merge points.
struct MergeTreeSpec {
  std::vector<int> parent;
  std::vector<double> leaf_intensities;  ///< in ascending tree-node order of the leaves
  int edge_hops = 2;
  double edge_length = 1.0;
  double wavelength = 1.0;
};

Lattice build_merge_tree(const MergeTreeSpec& spec);

/// Single line: source, detector `source_hops` ribs away, laser emitter a
/// further `laser_hops` ribs beyond the detector. Unit rib length.
Lattice build_clock_chain(int source_hops, int laser_hops);

// ---------------------------------------------------------------------------
// Topology documents (YAML). Schema:
//
//   wavelength: 1.0
//   dimension: 2            # optional, 2 or 3
//   nodes:
//     - {id: 0, kind: source, position: [0, 0]}
//   ribs:
//     - {endpoints: [0, 1], length: 1.0}   # length optional
//
// kinds: void | source | detector | laser

Lattice load_topology(std::string_view document);
Lattice load_topology_file(const std::string& path);
std::string serialize_topology(const Lattice& lattice);

}  // namespace hiddentime

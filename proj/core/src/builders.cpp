#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hiddentime/error.hpp"
#include "hiddentime/lattice.hpp"

namespace hiddentime {

namespace {

constexpr double kStraightTolerance = 1e-12;

class Builder {
 public:
  NodeId add_node(Position p, NodeKind kind) {
    const NodeId id{static_cast<std::uint32_t>(nodes_.size())};
    nodes_.push_back(Node{id, p, kind});
    return id;
  }

  void add_rib(NodeId a, NodeId b) {
    ribs_.push_back(Rib{a, b, distance(nodes_[a.value].position, nodes_[b.value].position)});
  }

  const Position& position(NodeId id) const { return nodes_[id.value].position; }

  // Chain of `hops` ribs from `from` to `to` with total length `length`. A
  // chain longer than the endpoint distance is laid on a circular arc with
  // equal chords, bulging to `side` (+1 left of from->to, -1 right).
  void add_chain(NodeId from, NodeId to, int hops, double length, int side) {
    const Position p = position(from);
    const Position q = position(to);
    const double d = distance(p, q);
    if (length < d - kStraightTolerance * std::max(1.0, d)) {
      throw Error(ErrorCode::InvalidArgument, "chain length " + std::to_string(length) +
                                                  " is shorter than its span " + std::to_string(d));
    }
    const double ux = (q.x - p.x) / d;
    const double uy = (q.y - p.y) / d;

    std::vector<Position> interior;
    if (length - d <= kStraightTolerance * std::max(1.0, d)) {
      for (int k = 1; k < hops; ++k) {
        const double t = static_cast<double>(k) / hops;
        interior.push_back({p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t, 0.0});
      }
    } else {
      if (hops < 2) {
        throw Error(ErrorCode::InvalidArgument, "a curved chain needs at least two ribs");
      }
      // Half-angle beta of the arc solves sin(beta) / (n sin(beta / n)) = d / length.
      const double n = hops;
      const double ratio = d / length;
      double lo = 0.0;
      double hi = std::numbers::pi;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = std::sin(mid) / (n * std::sin(mid / n));
        (f > ratio ? lo : hi) = mid;
      }
      const double beta = 0.5 * (lo + hi);
      const double chord = length / n;
      const double radius = chord / (2.0 * std::sin(beta / n));
      const double nx = -uy * side;
      const double ny = ux * side;
      const double mx = 0.5 * (p.x + q.x);
      const double my = 0.5 * (p.y + q.y);
      const double cx = mx - nx * radius * std::cos(beta);
      const double cy = my - ny * radius * std::cos(beta);
      for (int k = 1; k < hops; ++k) {
        const double theta = -beta + k * (2.0 * beta / n);
        interior.push_back({cx + radius * (nx * std::cos(theta) + ux * std::sin(theta)),
                            cy + radius * (ny * std::cos(theta) + uy * std::sin(theta)), 0.0});
      }
    }

    NodeId prev = from;
    for (const Position& pos : interior) {
      const NodeId next = add_node(pos, NodeKind::Void);
      add_rib(prev, next);
      prev = next;
    }
    add_rib(prev, to);
  }

  // Disjoint chains between two existing nodes. The shortest chain is
  // straight when its length is unique; all others alternate sides.
  void add_bundle(NodeId from, NodeId to, int hops, std::vector<double> lengths) {
    std::sort(lengths.begin(), lengths.end());
    if (lengths.size() > 1) hops = std::max(hops, 2);
    int side = 1;
    for (double len : lengths) {
      add_chain(from, to, hops, len, side);
      side = -side;
    }
  }

  Lattice finish(double wavelength) {
    return Lattice::create(std::move(nodes_), std::move(ribs_), wavelength, 2,
                           LengthCheck::Euclidean);
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Rib> ribs_;
};

// Endpoint distance for a bundle: the shortest chain runs straight unless two
// chains tie for shortest, in which case every chain is curved.
double bundle_span(const std::vector<double>& lengths) {
  const double shortest = *std::min_element(lengths.begin(), lengths.end());
  const auto ties = std::count(lengths.begin(), lengths.end(), shortest);
  return ties > 1 ? 0.8 * shortest : shortest;
}

void require_positive(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw Error(ErrorCode::NonPositiveLength, std::string(what) + " must be positive");
  }
}

}  // namespace

Lattice build_star(int num_detectors, int arm_hops, std::span<const double> arm_lengths,
                   double wavelength) {
  if (num_detectors < 1) throw Error(ErrorCode::NoDetectors, "star needs at least one detector");
  if (arm_hops < 1) throw Error(ErrorCode::InvalidArgument, "arm_hops must be >= 1");
  if (arm_lengths.size() != static_cast<std::size_t>(num_detectors)) {
    throw Error(ErrorCode::InvalidArgument, "arm_lengths needs one entry per detector");
  }
  std::vector<ArmBundle> arms;
  for (double len : arm_lengths) {
    require_positive(len, "arm rib length");
    arms.push_back(ArmBundle{arm_hops, {len * arm_hops}});
  }
  return build_star_bundles(arms, wavelength);
}

ArmBundle bundle_for_intensity(double intensity, int hops, double base_length, double wavelength) {
  if (!(std::isfinite(intensity) && intensity > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "target intensity must be positive");
  }
  require_positive(base_length, "base length");
  ArmBundle arm{hops, {}};
  if (std::abs(intensity - 1.0) < 1e-15) {
    arm.path_lengths.push_back(base_length);
    return arm;
  }
  // k chains: k-1 in phase plus one rotated by theta gives
  // |(k-1) + e^{i theta}|^2 = (k-1)^2 + 1 + 2(k-1) cos(theta).
  const int k = std::max(2, static_cast<int>(std::ceil(std::sqrt(intensity) - 1e-12)));
  const double m = k - 1;
  const double c = std::clamp((intensity - m * m - 1.0) / (2.0 * m), -1.0, 1.0);
  const double theta = std::acos(c);
  for (int j = 0; j < k - 1; ++j) arm.path_lengths.push_back(base_length + j * wavelength);
  arm.path_lengths.push_back(base_length + m * wavelength +
                             theta / (2.0 * std::numbers::pi) * wavelength);
  return arm;
}

Lattice build_star_bundles(std::span<const ArmBundle> arms, double wavelength) {
  if (arms.empty()) throw Error(ErrorCode::NoDetectors, "star needs at least one detector");
  Builder b;
  const NodeId source = b.add_node({0.0, 0.0, 0.0}, NodeKind::Source);
  const double n = static_cast<double>(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const ArmBundle& arm = arms[i];
    if (arm.hops < 1) throw Error(ErrorCode::InvalidArgument, "arm hops must be >= 1");
    if (arm.path_lengths.empty()) throw Error(ErrorCode::InvalidArgument, "arm without paths");
    for (double len : arm.path_lengths) require_positive(len, "arm path length");
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
    const double span = bundle_span(arm.path_lengths);
    const NodeId det =
        b.add_node({span * std::cos(angle), span * std::sin(angle), 0.0}, NodeKind::Detector);
    b.add_bundle(source, det, arm.hops, arm.path_lengths);
  }
  return b.finish(wavelength);
}

Lattice build_star_for_intensities(std::span<const double> intensities, int arm_hops,
                                   double wavelength) {
  std::vector<ArmBundle> arms;
  for (double intensity : intensities) {
    arms.push_back(bundle_for_intensity(intensity, arm_hops, 2.0 * arm_hops, wavelength));
  }
  return build_star_bundles(arms, wavelength);
}

Lattice build_two_path(double len_a, double len_b, int hops_per_path, double wavelength) {
  require_positive(len_a, "len_a");
  require_positive(len_b, "len_b");
  if (hops_per_path < 1) throw Error(ErrorCode::InvalidArgument, "hops_per_path must be >= 1");
  const int hops = std::max(hops_per_path, 2);
  const double span = 0.5 * std::min(len_a, len_b);
  Builder b;
  const NodeId source = b.add_node({0.0, 0.0, 0.0}, NodeKind::Source);
  const NodeId det = b.add_node({span, 0.0, 0.0}, NodeKind::Detector);
  b.add_chain(source, det, hops, len_a, +1);
  b.add_chain(source, det, hops, len_b, -1);
  return b.finish(wavelength);
}

Lattice build_grid(const GridSpec& spec) {
  if (spec.width < 1 || spec.height < 1) throw Error(ErrorCode::InvalidArgument, "empty grid");
  require_positive(spec.spacing, "grid spacing");
  auto inside = [&](GridCell c) {
    return c.col >= 0 && c.col < spec.width && c.row >= 0 && c.row < spec.height;
  };
  if (!inside(spec.source)) throw Error(ErrorCode::InvalidArgument, "source outside grid");
  Builder b;
  std::vector<NodeId> ids;
  for (int col = 0; col < spec.width; ++col) {
    for (int row = 0; row < spec.height; ++row) {
      const GridCell cell{col, row};
      NodeKind kind = NodeKind::Void;
      if (cell == spec.source) {
        kind = NodeKind::Source;
      } else if (std::find(spec.detectors.begin(), spec.detectors.end(), cell) !=
                 spec.detectors.end()) {
        kind = NodeKind::Detector;
      }
      ids.push_back(b.add_node({col * spec.spacing, row * spec.spacing, 0.0}, kind));
    }
  }
  for (const GridCell& d : spec.detectors) {
    if (!inside(d)) throw Error(ErrorCode::InvalidArgument, "detector outside grid");
  }
  auto at = [&](int col, int row) { return ids[static_cast<std::size_t>(col * spec.height + row)]; };
  for (int col = 0; col < spec.width; ++col) {
    for (int row = 0; row < spec.height; ++row) {
      if (col + 1 < spec.width) b.add_rib(at(col, row), at(col + 1, row));
      if (row + 1 < spec.height) b.add_rib(at(col, row), at(col, row + 1));
    }
  }
  return b.finish(spec.wavelength);
}

Lattice build_slit_grid(const SlitGridSpec& spec) {
  if (spec.width < 3) throw Error(ErrorCode::InvalidArgument, "slit grid needs at least 3 columns");
  if (spec.height < 1) throw Error(ErrorCode::InvalidArgument, "slit grid needs at least one row");
  if (spec.wall_column <= 0 || spec.wall_column >= spec.width - 1) {
    throw Error(ErrorCode::InvalidArgument,
                "wall column must lie strictly between the source and screen columns");
  }
  if (spec.screen_detectors < 1) {
    throw Error(ErrorCode::NoDetectors, "slit grid needs at least one screen detector");
  }
  require_positive(spec.column_spacing, "column spacing");
  require_positive(spec.row_spacing, "row spacing");
  for (int r : spec.open_rows) {
    if (r < 0 || r >= spec.height) throw Error(ErrorCode::InvalidArgument, "open row outside grid");
  }

  const double centre = 0.5 * (spec.height - 1);
  auto y_of = [&](double row) { return (row - centre) * spec.row_spacing; };

  Builder b;
  std::vector<std::vector<std::pair<double, NodeId>>> columns(static_cast<std::size_t>(spec.width));
  columns[0].push_back({centre, b.add_node({0.0, y_of(centre), 0.0}, NodeKind::Source)});
  for (int col = 1; col < spec.width - 1; ++col) {
    for (int row = 0; row < spec.height; ++row) {
      if (col == spec.wall_column &&
          std::find(spec.open_rows.begin(), spec.open_rows.end(), row) == spec.open_rows.end()) {
        continue;
      }
      const NodeId id = b.add_node({col * spec.column_spacing, y_of(row), 0.0}, NodeKind::Void);
      columns[static_cast<std::size_t>(col)].push_back({static_cast<double>(row), id});
    }
  }
  const double screen_first = centre - 0.5 * (spec.screen_detectors - 1);
  for (int i = 0; i < spec.screen_detectors; ++i) {
    const double row = screen_first + i;
    const NodeId id =
        b.add_node({(spec.width - 1) * spec.column_spacing, y_of(row), 0.0}, NodeKind::Detector);
    columns.back().push_back({row, id});
  }
  for (std::size_t col = 0; col + 1 < columns.size(); ++col) {
    for (const auto& [row_a, a] : columns[col]) {
      for (const auto& [row_b, bnode] : columns[col + 1]) {
        if (spec.reach >= 0 && std::abs(row_a - row_b) > spec.reach + 1e-9) continue;
        b.add_rib(a, bnode);
      }
    }
  }
  return b.finish(spec.wavelength);
}

SlitGridSpec double_slit_spec(int separation, int open_slits) {
  SlitGridSpec spec;
  const int centre = spec.height / 2;
  if (open_slits >= 2) {
    spec.open_rows = {centre - separation / 2, centre + (separation - separation / 2)};
  } else if (open_slits == 1) {
    spec.open_rows = {centre};
  }
  return spec;
}

Lattice build_merge_tree(const MergeTreeSpec& spec) {
  const std::size_t n = spec.parent.size();
  if (n < 2) throw Error(ErrorCode::NoDetectors, "merge tree needs at least one leaf");
  if (spec.edge_hops < 1) throw Error(ErrorCode::InvalidArgument, "edge_hops must be >= 1");
  require_positive(spec.edge_length, "edge length");
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 1; i < n; ++i) {
    const int p = spec.parent[i];
    if (p < 0 || static_cast<std::size_t>(p) >= i) {
      throw Error(ErrorCode::InvalidArgument, "merge tree parents must precede their children");
    }
    children[static_cast<std::size_t>(p)].push_back(i);
  }
  std::vector<std::size_t> leaves;
  for (std::size_t i = 1; i < n; ++i) {
    if (children[i].empty()) leaves.push_back(i);
  }
  if (leaves.size() != spec.leaf_intensities.size()) {
    throw Error(ErrorCode::InvalidArgument, "one intensity per leaf required");
  }

  // Layout: depth along x, leaves spread evenly along y, interior nodes centred
  // over their children.
  const double step = spec.edge_length * spec.edge_hops;
  std::vector<int> depth(n, 0);
  for (std::size_t i = 1; i < n; ++i) depth[i] = depth[static_cast<std::size_t>(spec.parent[i])] + 1;
  std::vector<double> y(n, 0.0);
  for (std::size_t k = 0; k < leaves.size(); ++k) y[leaves[k]] = 2.0 * step * static_cast<double>(k);
  for (std::size_t i = n; i-- > 0;) {
    if (children[i].empty()) continue;
    double sum = 0.0;
    for (std::size_t c : children[i]) sum += y[c];
    y[i] = sum / static_cast<double>(children[i].size());
  }

  Builder b;
  std::vector<NodeId> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeKind kind = i == 0                ? NodeKind::Source
                          : children[i].empty() ? NodeKind::Detector
                                                : NodeKind::Void;
    ids[i] = b.add_node({depth[i] * step, y[i], 0.0}, kind);
  }
  std::size_t leaf_index = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const NodeId from = ids[static_cast<std::size_t>(spec.parent[i])];
    const double span = distance(b.position(from), b.position(ids[i]));
    if (children[i].empty()) {
      const ArmBundle arm = bundle_for_intensity(spec.leaf_intensities[leaf_index++],
                                                 spec.edge_hops, span, spec.wavelength);
      b.add_bundle(from, ids[i], arm.hops, arm.path_lengths);
    } else {
      b.add_chain(from, ids[i], spec.edge_hops, span, 1);
    }
  }
  return b.finish(spec.wavelength);
}

Lattice build_clock_chain(int source_hops, int laser_hops) {
  if (source_hops < 1 || laser_hops < 1) {
    throw Error(ErrorCode::InvalidArgument, "clock distances must be >= 1 hop");
  }
  Builder b;
  NodeId prev = b.add_node({0.0, 0.0, 0.0}, NodeKind::Source);
  for (int i = 1; i <= source_hops + laser_hops; ++i) {
    const NodeKind kind = i == source_hops                 ? NodeKind::Detector
                          : i == source_hops + laser_hops ? NodeKind::LaserEmitter
                                                           : NodeKind::Void;
    const NodeId next = b.add_node({static_cast<double>(i), 0.0, 0.0}, kind);
    b.add_rib(prev, next);
    prev = next;
  }
  return b.finish(1.0);
}

}  // namespace hiddentime

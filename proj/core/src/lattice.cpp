#include "hiddentime/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <string>
#include <utility>

#include "hiddentime/error.hpp"

namespace hiddentime {

namespace {

constexpr double kEuclideanTolerance = 1e-9;

bool finite(const Position& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

std::string node_str(NodeId id) { return "node " + std::to_string(id.value); }

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Void: return "void";
    case NodeKind::Source: return "source";
    case NodeKind::Detector: return "detector";
    case NodeKind::LaserEmitter: return "laser";
  }
  return "void";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  if (text == "void") return NodeKind::Void;
  if (text == "source") return NodeKind::Source;
  if (text == "detector") return NodeKind::Detector;
  if (text == "laser") return NodeKind::LaserEmitter;
  return std::nullopt;
}

double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool operator==(const Node& a, const Node& b) {
  return a.id == b.id && a.kind == b.kind && a.position.x == b.position.x &&
         a.position.y == b.position.y && a.position.z == b.position.z;
}

bool operator==(const Rib& a, const Rib& b) {
  return a.a == b.a && a.b == b.b && a.length == b.length;
}

bool operator==(const Lattice& a, const Lattice& b) {
  return a.wavelength_ == b.wavelength_ && a.dimension_ == b.dimension_ && a.nodes_ == b.nodes_ &&
         a.ribs_ == b.ribs_;
}

Lattice Lattice::create(std::vector<Node> nodes, std::vector<Rib> ribs, double wavelength,
                        int dimension, LengthCheck check) {
  if (!(std::isfinite(wavelength) && wavelength > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "wavelength must be positive and finite");
  }
  if (dimension != 2 && dimension != 3) {
    throw Error(ErrorCode::InvalidArgument, "dimension must be 2 or 3");
  }

  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0 && nodes[i].id == nodes[i - 1].id) {
      throw Error(ErrorCode::DuplicateNodeId, node_str(nodes[i].id) + " declared twice");
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id.value != i) {
      throw Error(ErrorCode::InvalidArgument,
                  "node ids must be dense from 0; missing id " + std::to_string(i));
    }
    if (!finite(nodes[i].position)) {
      throw Error(ErrorCode::InvalidArgument, node_str(nodes[i].id) + " has a non-finite position");
    }
    if (dimension == 2 && nodes[i].position.z != 0.0) {
      throw Error(ErrorCode::InvalidArgument, node_str(nodes[i].id) + " has z != 0 in a 2D lattice");
    }
  }

  Lattice lattice;
  std::size_t sources = 0;
  for (const Node& n : nodes) {
    if (n.kind == NodeKind::Source) {
      ++sources;
      lattice.source_ = n.id;
    } else if (n.kind == NodeKind::Detector) {
      lattice.detectors_.push_back(n.id);
    }
  }
  if (sources == 0) throw Error(ErrorCode::MissingSource, "lattice has no source node");
  if (sources > 1) throw Error(ErrorCode::MultipleSources, "lattice has more than one source node");
  if (lattice.detectors_.empty()) throw Error(ErrorCode::NoDetectors, "lattice has no detector node");

  const auto n = static_cast<std::uint32_t>(nodes.size());
  for (Rib& r : ribs) {
    if (r.a.value >= n || r.b.value >= n) {
      throw Error(ErrorCode::DanglingEndpoint,
                  "rib " + std::to_string(r.a.value) + "-" + std::to_string(r.b.value) +
                      " references an unknown node");
    }
    if (r.a == r.b) throw Error(ErrorCode::SelfLoop, "rib at " + node_str(r.a) + " is a self loop");
    if (!(std::isfinite(r.length) && r.length > 0.0)) {
      throw Error(ErrorCode::NonPositiveLength, "rib " + std::to_string(r.a.value) + "-" +
                                                    std::to_string(r.b.value) + " has length " +
                                                    std::to_string(r.length));
    }
    if (r.b < r.a) std::swap(r.a, r.b);
    if (check == LengthCheck::Euclidean) {
      const double d = distance(nodes[r.a.value].position, nodes[r.b.value].position);
      if (std::abs(d - r.length) > kEuclideanTolerance) {
        throw Error(ErrorCode::LengthMismatch, "rib " + std::to_string(r.a.value) + "-" +
                                                   std::to_string(r.b.value) + " length " +
                                                   std::to_string(r.length) + " vs distance " +
                                                   std::to_string(d));
      }
    }
  }
  std::sort(ribs.begin(), ribs.end(),
            [](const Rib& x, const Rib& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
  for (std::size_t i = 1; i < ribs.size(); ++i) {
    if (ribs[i].a == ribs[i - 1].a && ribs[i].b == ribs[i - 1].b) {
      throw Error(ErrorCode::DuplicateRib, "parallel ribs between " + node_str(ribs[i].a) + " and " +
                                               node_str(ribs[i].b));
    }
  }

  lattice.nodes_ = std::move(nodes);
  lattice.ribs_ = std::move(ribs);
  lattice.wavelength_ = wavelength;
  lattice.dimension_ = dimension;

  std::vector<std::uint32_t> degree(n, 0);
  for (const Rib& r : lattice.ribs_) {
    ++degree[r.a.value];
    ++degree[r.b.value];
  }
  lattice.adjacency_offsets_.assign(n + 1, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    lattice.adjacency_offsets_[i + 1] = lattice.adjacency_offsets_[i] + degree[i];
  }
  lattice.adjacency_.resize(lattice.adjacency_offsets_[n]);
  std::vector<std::uint32_t> fill(lattice.adjacency_offsets_.begin(),
                                  lattice.adjacency_offsets_.end() - 1);
  for (std::uint32_t i = 0; i < lattice.ribs_.size(); ++i) {
    const Rib& r = lattice.ribs_[i];
    lattice.adjacency_[fill[r.a.value]++] = RibId{i};
    lattice.adjacency_[fill[r.b.value]++] = RibId{i};
  }

  const auto dist = lattice.hop_distances();
  for (NodeId d : lattice.detectors_) {
    if (!dist[d.value]) {
      throw Error(ErrorCode::DisconnectedDetector,
                  "detector " + node_str(d) + " is unreachable from the source");
    }
  }
  return lattice;
}

std::span<const RibId> Lattice::incident(NodeId id) const {
  const auto begin = adjacency_offsets_[id.value];
  const auto end = adjacency_offsets_[id.value + 1];
  return std::span<const RibId>(adjacency_).subspan(begin, end - begin);
}

std::vector<std::optional<std::uint32_t>> Lattice::hop_distances() const {
  std::vector<std::optional<std::uint32_t>> dist(nodes_.size());
  std::deque<NodeId> frontier{source_};
  dist[source_.value] = 0;
  while (!frontier.empty()) {
    const NodeId at = frontier.front();
    frontier.pop_front();
    if (!relays(node(at).kind)) continue;
    for (RibId r : incident(at)) {
      const NodeId next = rib(r).other(at);
      if (!dist[next.value]) {
        dist[next.value] = *dist[at.value] + 1;
        frontier.push_back(next);
      }
    }
  }
  return dist;
}

}  // namespace hiddentime

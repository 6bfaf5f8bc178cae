#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "hiddentime/error.hpp"
#include "hiddentime/lattice.hpp"

namespace hiddentime {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw Error(ErrorCode::MalformedDocument, "cannot read " + what);
  }
}

Position read_position(const YAML::Node& node, std::uint32_t id, int& dims_seen) {
  if (!node || !node.IsSequence() || (node.size() != 2 && node.size() != 3)) {
    throw Error(ErrorCode::MalformedDocument,
                "node " + std::to_string(id) + ": position must be a list of 2 or 3 numbers");
  }
  Position p;
  p.x = scalar<double>(node[0], "position");
  p.y = scalar<double>(node[1], "position");
  if (node.size() == 3) {
    p.z = scalar<double>(node[2], "position");
    dims_seen = 3;
  }
  return p;
}

}  // namespace

Lattice load_topology(std::string_view document) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(document));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  if (!root.IsMap()) throw Error(ErrorCode::MalformedDocument, "top level must be a mapping");
  if (!root["wavelength"]) throw Error(ErrorCode::MissingWavelength, "document omits `wavelength`");
  const double wavelength = scalar<double>(root["wavelength"], "wavelength");

  const YAML::Node nodes_doc = root["nodes"];
  if (!nodes_doc || !nodes_doc.IsSequence()) {
    throw Error(ErrorCode::MalformedDocument, "`nodes` must be a list");
  }
  int dims_seen = 2;
  std::vector<Node> nodes;
  std::map<std::uint32_t, Position> positions;
  for (const YAML::Node& n : nodes_doc) {
    if (!n["id"] || !n["kind"]) {
      throw Error(ErrorCode::MalformedDocument, "every node needs `id` and `kind`");
    }
    const auto id = scalar<std::uint32_t>(n["id"], "node id");
    const auto kind_text = scalar<std::string>(n["kind"], "node kind");
    const auto kind = parse_node_kind(kind_text);
    if (!kind) throw Error(ErrorCode::MalformedDocument, "unknown node kind `" + kind_text + "`");
    const Position p = read_position(n["position"], id, dims_seen);
    if (!positions.emplace(id, p).second) {
      throw Error(ErrorCode::DuplicateNodeId, "node " + std::to_string(id) + " declared twice");
    }
    nodes.push_back(Node{NodeId{id}, p, *kind});
  }

  int dimension = dims_seen;
  if (root["dimension"]) dimension = scalar<int>(root["dimension"], "dimension");

  std::vector<Rib> ribs;
  if (const YAML::Node ribs_doc = root["ribs"]) {
    if (!ribs_doc.IsSequence()) throw Error(ErrorCode::MalformedDocument, "`ribs` must be a list");
    for (const YAML::Node& r : ribs_doc) {
      const YAML::Node ends = r["endpoints"];
      if (!ends || !ends.IsSequence() || ends.size() != 2) {
        throw Error(ErrorCode::MalformedDocument, "rib `endpoints` must be a pair of node ids");
      }
      const auto a = scalar<std::uint32_t>(ends[0], "rib endpoint");
      const auto b = scalar<std::uint32_t>(ends[1], "rib endpoint");
      const auto pa = positions.find(a);
      const auto pb = positions.find(b);
      if (pa == positions.end() || pb == positions.end()) {
        throw Error(ErrorCode::DanglingEndpoint, "rib " + std::to_string(a) + "-" +
                                                     std::to_string(b) +
                                                     " references an unknown node");
      }
      const double length = r["length"] ? scalar<double>(r["length"], "rib length")
                                        : distance(pa->second, pb->second);
      ribs.push_back(Rib{NodeId{a}, NodeId{b}, length});
    }
  }
  return Lattice::create(std::move(nodes), std::move(ribs), wavelength, dimension);
}

Lattice load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open topology file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_topology(ss.str());
}

std::string serialize_topology(const Lattice& lattice) {
  std::ostringstream out;
  out << "wavelength: " << shortest(lattice.wavelength()) << "\n";
  out << "dimension: " << lattice.dimension() << "\n";
  out << "nodes:\n";
  for (const Node& n : lattice.nodes()) {
    out << "  - {id: " << n.id.value << ", kind: " << to_string(n.kind) << ", position: ["
        << shortest(n.position.x) << ", " << shortest(n.position.y);
    if (lattice.dimension() == 3) out << ", " << shortest(n.position.z);
    out << "]}\n";
  }
  out << "ribs:";
  if (lattice.rib_count() == 0) out << " []";
  out << "\n";
  for (const Rib& r : lattice.ribs()) {
    out << "  - {endpoints: [" << r.a.value << ", " << r.b.value
        << "], length: " << shortest(r.length) << "}\n";
  }
  return out.str();
}

}  // namespace hiddentime

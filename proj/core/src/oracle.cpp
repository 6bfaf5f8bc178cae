#include "hiddentime/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hiddentime/error.hpp"

namespace hiddentime::oracle {

namespace {

constexpr std::uint64_t kUnreached = std::numeric_limits<std::uint64_t>::max();

// Hop layering by repeated relaxation over relaying nodes.
std::vector<std::uint64_t> layering(const Lattice& lattice) {
  std::vector<std::uint64_t> layer(lattice.node_count(), kUnreached);
  layer[lattice.source().value] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rib& rib : lattice.ribs()) {
      for (auto [u, v] : {std::pair{rib.a, rib.b}, std::pair{rib.b, rib.a}}) {
        if (layer[u.value] == kUnreached || !relays(lattice.node(u).kind)) continue;
        if (layer[u.value] + 1 < layer[v.value]) {
          layer[v.value] = layer[u.value] + 1;
          changed = true;
        }
      }
    }
  }
  return layer;
}

struct Neighbour {
  NodeId node;
  double length;
};

class Enumerator {
 public:
  Enumerator(const Lattice& lattice, NodeId target, const Admissibility& admissibility,
             std::uint64_t budget)
      : lattice_(lattice), target_(target), budget_(budget), neighbours_(lattice.node_count()) {
    for (const Rib& rib : lattice.ribs()) {
      neighbours_[rib.a.value].push_back({rib.b, rib.length});
      neighbours_[rib.b.value].push_back({rib.a, rib.length});
    }
    for (auto& list : neighbours_) {
      std::sort(list.begin(), list.end(),
                [](const Neighbour& x, const Neighbour& y) { return x.node < y.node; });
    }
    if (const auto* h = std::get_if<MaxHops>(&admissibility)) {
      max_hops_ = h->max_hops;
    } else {
      layer_ = layering(lattice);
    }
  }

  std::vector<PathRecord> run() {
    path_.push_back(lattice_.source());
    extend(0.0);
    return std::move(found_);
  }

 private:
  bool admissible(NodeId from, NodeId to) const {
    if (!layer_.empty()) {
      return layer_[to.value] != kUnreached && layer_[to.value] == layer_[from.value] + 1;
    }
    if (path_.size() - 1 >= max_hops_) return false;
    return std::find(path_.begin(), path_.end(), to) == path_.end();
  }

  void extend(double length) {
    const NodeId at = path_.back();
    for (const Neighbour& nb : neighbours_[at.value]) {
      if (!admissible(at, nb.node)) continue;
      if (++steps_ > budget_) {
        throw Error(ErrorCode::PathBudgetExceeded,
                    "more than " + std::to_string(budget_) + " path steps while enumerating "
                    "detector " + std::to_string(target_.value));
      }
      const double total = length + nb.length;
      const NodeKind kind = lattice_.node(nb.node).kind;
      if (nb.node == target_) {
        PathRecord record;
        record.nodes = path_;
        record.nodes.push_back(nb.node);
        record.total_length = total;
        record.phase =
            Phase::from_radians(kTwoPi * std::fmod(total / lattice_.wavelength(), 1.0));
        found_.push_back(std::move(record));
      } else if (kind == NodeKind::Void) {
        path_.push_back(nb.node);
        extend(total);
        path_.pop_back();
      }
    }
  }

  const Lattice& lattice_;
  NodeId target_;
  std::uint64_t budget_;
  std::vector<std::vector<Neighbour>> neighbours_;
  std::vector<std::uint64_t> layer_;
  std::uint64_t max_hops_ = 0;
  std::uint64_t steps_ = 0;
  std::vector<NodeId> path_;
  std::vector<PathRecord> found_;
};

}  // namespace

std::vector<PathRecord> enumerate_paths(const Lattice& lattice, NodeId detector,
                                        const Admissibility& admissibility,
                                        std::uint64_t path_budget) {
  if (detector.value >= lattice.node_count() ||
      lattice.node(detector).kind != NodeKind::Detector) {
    throw Error(ErrorCode::InvalidArgument,
                "node " + std::to_string(detector.value) + " is not a detector");
  }
  return Enumerator(lattice, detector, admissibility, path_budget).run();
}

Amplitude detector_amplitude(std::span<const PathRecord> paths) {
  Amplitude sum;
  for (const PathRecord& p : paths) {
    sum.re += std::cos(p.phase.radians());
    sum.im += std::sin(p.phase.radians());
  }
  return sum;
}

AmplitudeMap detector_amplitudes(const Lattice& lattice, const Admissibility& admissibility,
                                 std::uint64_t path_budget) {
  AmplitudeMap out;
  for (NodeId d : lattice.detectors()) {
    const auto paths = enumerate_paths(lattice, d, admissibility, path_budget);
    out.emplace_back(d, detector_amplitude(paths));
  }
  return out;
}

double BornDistribution::probability(NodeId detector) const {
  for (const auto& [id, p] : entries) {
    if (id == detector) return p;
  }
  return 0.0;
}

BornDistribution born_distribution(std::span<const std::pair<NodeId, Amplitude>> amplitudes,
                                   double dark_threshold) {
  BornDistribution dist;
  for (const auto& [id, amp] : amplitudes) {
    const double intensity = amp.norm2();
    const double counted = intensity > dark_threshold ? intensity : 0.0;
    dist.entries.emplace_back(id, counted);
    dist.total_intensity += counted;
  }
  if (!(dist.total_intensity > 0.0)) {
    throw Error(ErrorCode::DarkConfiguration, "every detector amplitude is zero");
  }
  std::sort(dist.entries.begin(), dist.entries.end());
  for (auto& entry : dist.entries) entry.second /= dist.total_intensity;
  return dist;
}

}  // namespace hiddentime::oracle

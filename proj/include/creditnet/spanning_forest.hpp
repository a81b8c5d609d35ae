#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "creditnet/error.hpp"
#include "creditnet/projection.hpp"
#include "creditnet/union_find.hpp"

namespace creditnet {

struct DistanceEdge {
  std::uint32_t a{0};
  std::uint32_t b{0};
  double distance{0.0};
};

/// Distance transform d = 1 - w / w_max over the projection's edges. The
/// heaviest edge gets d = 0 and every d lies in [0, 1).
inline std::vector<DistanceEdge> distance_transform(const ProjectedGraph& p) {
  if (p.edges().empty())
    throw InvalidArgument("distance_transform: projection has no edges");
  std::uint32_t w_max = 0;
  for (const auto& e : p.edges()) w_max = std::max(w_max, e.shared);
  std::vector<DistanceEdge> out;
  out.reserve(p.edge_count());
  for (const auto& e : p.edges())
    out.push_back({e.a, e.b,
                   1.0 - static_cast<double>(e.shared) / static_cast<double>(w_max)});
  return out;
}

struct ForestEdge {
  std::uint32_t a{0};
  std::uint32_t b{0};
  double weight{0.0};    // original shared-counterparty count
  double distance{0.0};  // 1 - w / w_max

  bool operator==(const ForestEdge&) const = default;
};

/// Greedy cycle-free backbone of a projection: per connected component a
/// spanning tree that minimizes total transformed distance (equivalently,
/// maximizes total original weight). Isolated nodes are singleton components.
class SpanningForest {
 public:
  SpanningForest() = default;
  SpanningForest(Mode mode, std::vector<std::string> node_ids,
                 std::vector<std::vector<ForestEdge>> trees,
                 std::size_t component_count)
      : mode_(mode),
        node_ids_(std::move(node_ids)),
        trees_(std::move(trees)),
        component_count_(component_count) {}

  Mode mode() const { return mode_; }
  std::size_t node_count() const { return node_ids_.size(); }
  std::size_t component_count() const { return component_count_; }

  /// Trees ordered by their smallest node index; singleton components carry
  /// no edge list here but are counted in component_count().
  const std::vector<std::vector<ForestEdge>>& trees() const { return trees_; }

  const std::string& node_id(std::size_t i) const { return node_ids_.at(i); }
  const std::vector<std::string>& node_ids() const { return node_ids_; }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& t : trees_) n += t.size();
    return n;
  }

  std::vector<ForestEdge> all_edges() const {
    std::vector<ForestEdge> out;
    out.reserve(edge_count());
    for (const auto& t : trees_) out.insert(out.end(), t.begin(), t.end());
    return out;
  }

  double total_weight() const {
    double w = 0.0;
    for (const auto& t : trees_)
      for (const auto& e : t) w += e.weight;
    return w;
  }

 private:
  Mode mode_{Mode::Bank};
  std::vector<std::string> node_ids_;
  std::vector<std::vector<ForestEdge>> trees_;
  std::size_t component_count_{0};
};

/// Kruskal construction: rank edges by ascending distance (descending weight),
/// ties broken lexicographically on (a, b), and add every edge that does not
/// close a cycle. The tie rule is part of the output contract.
inline SpanningForest minimal_spanning_forest(const ProjectedGraph& p) {
  std::vector<ProjectedEdge> order(p.edges());
  std::sort(order.begin(), order.end(),
            [](const ProjectedEdge& x, const ProjectedEdge& y) {
              if (x.shared != y.shared) return x.shared > y.shared;
              return x.a != y.a ? x.a < y.a : x.b < y.b;
            });

  std::uint32_t w_max = order.empty() ? 0 : order.front().shared;
  UnionFind uf(p.node_count());
  std::vector<ForestEdge> accepted;
  accepted.reserve(p.node_count() > 0 ? p.node_count() - 1 : 0);
  for (const auto& e : order) {
    if (uf.unite(e.a, e.b))
      accepted.push_back(
          {e.a, e.b, static_cast<double>(e.shared),
           1.0 - static_cast<double>(e.shared) / static_cast<double>(w_max)});
  }

  // Group accepted edges per component, components ordered by smallest member.
  std::map<std::size_t, std::vector<ForestEdge>> by_root;
  for (const auto& e : accepted) by_root[uf.find(e.a)].push_back(e);
  std::vector<std::pair<std::size_t, std::vector<ForestEdge>>> keyed;
  keyed.reserve(by_root.size());
  for (auto& [root, edges] : by_root) {
    std::size_t min_node = root;
    for (const auto& e : edges) min_node = std::min<std::size_t>(min_node, e.a);
    keyed.emplace_back(min_node, std::move(edges));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::vector<ForestEdge>> trees;
  trees.reserve(keyed.size());
  for (auto& [min_node, edges] : keyed) {
    std::sort(edges.begin(), edges.end(),
              [](const ForestEdge& x, const ForestEdge& y) {
                return x.a != y.a ? x.a < y.a : x.b < y.b;
              });
    trees.push_back(std::move(edges));
  }
  return SpanningForest(p.mode(), p.node_ids(), std::move(trees), uf.set_count());
}

/// Degree of each node counting only forest edges.
inline std::vector<std::size_t> tree_degrees(const SpanningForest& f) {
  std::vector<std::size_t> deg(f.node_count(), 0);
  for (const auto& tree : f.trees()) {
    for (const auto& e : tree) {
      ++deg[e.a];
      ++deg[e.b];
    }
  }
  return deg;
}

struct HubEntry {
  std::size_t node{0};
  std::size_t degree{0};
};

/// Top-k forest nodes by tree degree (degree descending, index ascending).
inline std::vector<HubEntry> hubs(const SpanningForest& f, std::size_t top_k) {
  auto deg = tree_degrees(f);
  std::vector<HubEntry> entries;
  entries.reserve(deg.size());
  for (std::size_t i = 0; i < deg.size(); ++i) entries.push_back({i, deg[i]});
  std::sort(entries.begin(), entries.end(), [](const HubEntry& x, const HubEntry& y) {
    return x.degree != y.degree ? x.degree > y.degree : x.node < y.node;
  });
  if (entries.size() > top_k) entries.resize(top_k);
  return entries;
}

}  // namespace creditnet

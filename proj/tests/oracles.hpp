#pragma once

// Independent brute-force oracles and random-instance generators used by the
// unit and acceptance suites. Everything here deliberately avoids the
// library's production code paths it is checking against.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "creditnet/bipartite_graph.hpp"
#include "creditnet/projection.hpp"
#include "creditnet/random.hpp"

namespace oracles {

using creditnet::BipartiteGraph;
using creditnet::BipartiteGraphBuilder;
using creditnet::EdgeWeight;
using creditnet::Mode;
using creditnet::ProjectedEdge;
using creditnet::ProjectedGraph;
using creditnet::Rng;

// --- projection: all-pairs common-neighbor counting -------------------------

inline std::vector<ProjectedEdge> brute_force_projection(const BipartiteGraph& g,
                                                         Mode mode) {
  std::size_t n = g.node_count(mode);
  std::vector<std::set<std::size_t>> neighbor_sets(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto nb : g.neighbors({mode, i})) neighbor_sets[i].insert(nb.index);
  std::vector<ProjectedEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::uint32_t shared = 0;
      for (std::size_t c : neighbor_sets[i]) shared += neighbor_sets[j].count(c);
      if (shared > 0)
        edges.push_back({static_cast<std::uint32_t>(i),
                         static_cast<std::uint32_t>(j), shared});
    }
  }
  return edges;
}

// --- kendall tau-b: O(n^2) concordant/discordant pair counting --------------

inline double kendall_oracle(const std::vector<double>& xs,
                             const std::vector<double>& ys) {
  std::size_t n = xs.size();
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = xs[i] - xs[j];
      double dy = ys[i] - ys[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++ties_x;
      } else if (dy == 0) {
        ++ties_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  double n0 = static_cast<double>(n) * (n - 1) / 2.0;
  // pairs tied in x (including both-tied) / tied in y (including both-tied)
  long long both = static_cast<long long>(n0) - concordant - discordant -
                   ties_x - ties_y;
  double nx = static_cast<double>(ties_x + both);
  double ny = static_cast<double>(ties_y + both);
  return static_cast<double>(concordant - discordant) /
         std::sqrt((n0 - nx) * (n0 - ny));
}

// --- maximum spanning tree by exhaustive subset enumeration -----------------

struct WeightedEdge {
  std::uint32_t a, b;
  std::uint32_t w;
};

inline bool is_spanning_tree(std::size_t n, const std::vector<WeightedEdge>& edges,
                             const std::vector<std::size_t>& pick) {
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t idx : pick) {
    std::size_t ra = find(edges[idx].a), rb = find(edges[idx].b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;  // n-1 acyclic edges over n nodes span them
}

/// Maximum total weight over every spanning tree, found by trying every
/// (n-1)-subset of the edge list. Requires a connected input graph.
inline double max_spanning_tree_weight(std::size_t n,
                                       const std::vector<WeightedEdge>& edges) {
  if (n <= 1) return 0.0;
  std::size_t need = n - 1;
  std::vector<std::size_t> pick(need);
  for (std::size_t i = 0; i < need; ++i) pick[i] = i;
  double best = -1.0;
  if (edges.size() < need) return best;
  while (true) {
    if (is_spanning_tree(n, edges, pick)) {
      double w = 0.0;
      for (std::size_t idx : pick) w += edges[idx].w;
      best = std::max(best, w);
    }
    // next combination
    std::size_t i = need;
    while (i > 0) {
      --i;
      if (pick[i] != i + edges.size() - need) {
        ++pick[i];
        for (std::size_t j = i + 1; j < need; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
      if (i == 0) return best;
    }
  }
}

// --- random instances --------------------------------------------------------

inline std::string numbered(const char* prefix, std::size_t i) {
  return prefix + std::to_string(i);
}

/// Random bipartite graph; every node appears in at least zero edges (isolated
/// nodes only when allow_isolated). Weights are small integers, some rows
/// split-less.
inline BipartiteGraph random_bipartite(Rng& rng, std::size_t max_per_mode,
                                       bool allow_isolated = false) {
  std::size_t banks = 1 + rng.below(max_per_mode);
  std::size_t firms = 1 + rng.below(max_per_mode);
  BipartiteGraphBuilder b;
  b.set_name("random");
  double density = 0.05 + 0.5 * rng.uniform01();
  for (std::size_t i = 0; i < banks; ++i)
    for (std::size_t j = 0; j < firms; ++j) {
      if (rng.uniform01() > density) continue;
      double s = static_cast<double>(1 + rng.below(50));
      double l = static_cast<double>(rng.below(50));
      if (rng.uniform01() < 0.2)
        b.add_edge(numbered("B", i), numbered("F", j),
                   EdgeWeight::from_total(s + l));
      else
        b.add_edge(numbered("B", i), numbered("F", j), EdgeWeight::from_split(s, l));
    }
  if (allow_isolated) {
    for (std::size_t i = 0; i < banks; ++i) b.add_bank(numbered("B", i));
    for (std::size_t j = 0; j < firms; ++j) b.add_firm(numbered("F", j));
  }
  auto g = b.build();
  if (g.edge_count() == 0) {
    // keep instances non-degenerate
    b.add_edge("B0", "F0", EdgeWeight::from_split(1, 1));
    g = b.build();
  }
  return g;
}

/// Random connected weighted graph as a ProjectedGraph: a random spanning
/// tree plus extra edges, at most max_edges total.
inline ProjectedGraph random_connected_projection(Rng& rng, std::size_t max_nodes,
                                                  std::size_t max_edges,
                                                  std::uint32_t max_weight = 9) {
  std::size_t n = 2 + rng.below(max_nodes - 1);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> weights;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    std::uint32_t lo = static_cast<std::uint32_t>(std::min(a, b));
    std::uint32_t hi = static_cast<std::uint32_t>(std::max(a, b));
    if (weights.count({lo, hi})) return;
    weights[{lo, hi}] = 1 + static_cast<std::uint32_t>(rng.below(max_weight));
  };
  for (std::size_t v = 1; v < n; ++v) add(rng.below(v), v);  // spanning tree
  std::size_t extra_budget = max_edges > (n - 1) ? max_edges - (n - 1) : 0;
  std::size_t extras = extra_budget > 0 ? rng.below(extra_budget + 1) : 0;
  for (std::size_t e = 0; e < extras; ++e) add(rng.below(n), rng.below(n));

  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(numbered("N", i));
  std::vector<ProjectedEdge> edges;
  for (const auto& [key, w] : weights) edges.push_back({key.first, key.second, w});
  return ProjectedGraph(Mode::Bank, std::move(ids), std::move(edges), "random");
}

}  // namespace oracles

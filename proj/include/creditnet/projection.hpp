#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <type_traits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "creditnet/bipartite_graph.hpp"
#include "creditnet/error.hpp"

namespace creditnet {

/// One-mode co-financing edge: nodes a < b share `shared` counterparties.
struct ProjectedEdge {
  std::uint32_t a{0};
  std::uint32_t b{0};
  std::uint32_t shared{0};

  bool operator==(const ProjectedEdge&) const = default;
};

struct ProjectionOptions;

/// One-mode projection of a bipartite graph: same-mode nodes linked when they
/// share at least one counterparty, weight = shared-counterparty count.
/// Immutable after construction.
class ProjectedGraph {
  auto neighbor_fn() const {
    return [this](std::size_t u, auto&& visit) {
      for (std::uint32_t v : adjacency_[u]) visit(static_cast<std::size_t>(v));
    };
  }

 public:
  ProjectedGraph() = default;

  ProjectedGraph(Mode mode, std::vector<std::string> node_ids,
                 std::vector<ProjectedEdge> edges, std::string source_graph_id)
      : mode_(mode),
        node_ids_(std::move(node_ids)),
        edges_(std::move(edges)),
        source_(std::move(source_graph_id)) {
    validate_and_index();
  }

  Mode mode() const { return mode_; }
  std::size_t node_count() const { return node_ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<ProjectedEdge>& edges() const { return edges_; }
  const std::string& node_id(std::size_t i) const { return node_ids_.at(i); }
  const std::vector<std::string>& node_ids() const { return node_ids_; }
  const std::string& source_graph_id() const { return source_; }

  /// Counterparties skipped by the degree cap during projection.
  std::size_t capped_counterparties() const { return capped_; }

  std::size_t degree(std::size_t node) const {
    check(node);
    return adjacency_[node].size();
  }

  /// Shortest hop count; nullopt when unreachable.
  std::optional<std::size_t> distance(std::size_t a, std::size_t b) const {
    check(a);
    check(b);
    if (a == b) return 0;
    auto dist = detail::bfs_distances(node_count(), a, neighbor_fn());
    if (dist[b] == detail::kUnreached) return std::nullopt;
    return dist[b];
  }

  DiameterReport diameter() const {
    return detail::diameter_report(node_count(), neighbor_fn());
  }

  ComponentStructure components() const {
    return detail::connected_components(node_count(), neighbor_fn());
  }

  bool operator==(const ProjectedGraph& other) const {
    return mode_ == other.mode_ && node_ids_ == other.node_ids_ &&
           edges_ == other.edges_;
  }

 private:
  friend ProjectedGraph project_subset(const BipartiteGraph&, Mode,
                                       const std::vector<bool>&,
                                       const ProjectionOptions&);

  void check(std::size_t node) const {
    if (node >= node_count())
      throw InvalidArgument("projected graph: node index out of range");
  }

  void validate_and_index() {
    adjacency_.assign(node_count(), {});
    std::uint64_t previous_key = 0;
    bool first = true;
    for (const auto& e : edges_) {
      if (e.a >= e.b)
        throw InvalidArgument("projected graph: edges must satisfy a < b");
      if (e.b >= node_count())
        throw InvalidArgument("projected graph: edge endpoint out of range");
      if (e.shared < 1)
        throw InvalidArgument("projected graph: shared count must be >= 1");
      std::uint64_t key = (static_cast<std::uint64_t>(e.a) << 32) | e.b;
      if (!first && key <= previous_key)
        throw InvalidArgument("projected graph: edges must be sorted and unique");
      previous_key = key;
      first = false;
      adjacency_[e.a].push_back(e.b);
      adjacency_[e.b].push_back(e.a);
    }
    for (auto& list : adjacency_) std::sort(list.begin(), list.end());
  }

  Mode mode_{Mode::Bank};
  std::vector<std::string> node_ids_;
  std::vector<ProjectedEdge> edges_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::string source_;
  std::size_t capped_ = 0;
};

struct ProjectionOptions {
  /// Counterparties contributing more than this many selected neighbors are
  /// skipped (a hub of degree d alone emits d(d-1)/2 pair increments).
  /// Unset = uncapped.
  std::optional<std::size_t> degree_cap;
};

/// Upper bound on pair increments the projection will perform:
/// sum over opposite-mode nodes of C(degree, 2).
inline std::uint64_t estimate_pair_increments(const BipartiteGraph& g, Mode mode) {
  Mode counter_mode = opposite(mode);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < g.node_count(counter_mode); ++i) {
    std::uint64_t d = g.degree({counter_mode, i});
    total += d * (d - 1) / 2;
  }
  return total;
}

namespace detail {

// Hub-centric accumulation: iterate opposite-mode nodes and add one increment
// per counterparty pair, instead of comparing all same-mode pairs.
class PairAccumulator {
 public:
  PairAccumulator(std::size_t n, std::uint64_t expected) : n_(n) {
    // Dense triangular array up to 8M cells (32 MiB), hash map beyond.
    dense_ok_ = n_ >= 2 && n_ * (n_ - 1) / 2 <= (8u << 20);
    if (dense_ok_)
      dense_.assign(n_ * (n_ - 1) / 2, 0);
    else
      sparse_.reserve(static_cast<std::size_t>(
          std::min<std::uint64_t>(expected, 1u << 24)));
  }

  void add(std::uint32_t i, std::uint32_t j) {  // requires i < j
    if (dense_ok_) {
      std::size_t row_offset = static_cast<std::size_t>(i) * n_ -
                               static_cast<std::size_t>(i) * (i + 1) / 2;
      ++dense_[row_offset + (j - i - 1)];
    } else {
      ++sparse_[(static_cast<std::uint64_t>(i) << 32) | j];
    }
  }

  std::vector<ProjectedEdge> take_sorted_edges() {
    std::vector<ProjectedEdge> edges;
    if (dense_ok_) {
      std::size_t cell = 0;
      for (std::uint32_t i = 0; i < n_; ++i)
        for (std::uint32_t j = i + 1; j < n_; ++j, ++cell)
          if (dense_[cell] > 0) edges.push_back({i, j, dense_[cell]});
    } else {
      edges.reserve(sparse_.size());
      for (const auto& [key, count] : sparse_)
        edges.push_back({static_cast<std::uint32_t>(key >> 32),
                         static_cast<std::uint32_t>(key & 0xffffffffu), count});
      std::sort(edges.begin(), edges.end(),
                [](const ProjectedEdge& x, const ProjectedEdge& y) {
                  return x.a != y.a ? x.a < y.a : x.b < y.b;
                });
    }
    return edges;
  }

 private:
  std::size_t n_;
  bool dense_ok_{false};
  std::vector<std::uint32_t> dense_;
  std::unordered_map<std::uint64_t, std::uint32_t> sparse_;
};

}  // namespace detail

/// Projection restricted to the selected same-mode nodes (counterparty set
/// unrestricted). Selected nodes are re-indexed densely in ascending original
/// order; ids are carried over. At least one node must be selected.
inline ProjectedGraph project_subset(const BipartiteGraph& g, Mode mode,
                                     const std::vector<bool>& selected,
                                     const ProjectionOptions& options = {}) {
  if (selected.size() != g.node_count(mode))
    throw InvalidArgument("project_subset: selection size mismatch");
  constexpr std::uint32_t kUnselected = 0xffffffffu;
  std::vector<std::uint32_t> reindex(selected.size(), kUnselected);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (!selected[i]) continue;
    reindex[i] = static_cast<std::uint32_t>(ids.size());
    ids.push_back(mode == Mode::Bank ? g.bank_id(i) : g.firm_id(i));
  }
  if (ids.empty())
    throw InvalidArgument("project_subset: empty node selection");

  detail::PairAccumulator acc(ids.size(), estimate_pair_increments(g, mode));
  Mode counter_mode = opposite(mode);
  std::size_t capped = 0;
  std::vector<std::uint32_t> members;
  for (std::size_t c = 0; c < g.node_count(counter_mode); ++c) {
    members.clear();
    for (NodeRef n : g.neighbors({counter_mode, c})) {
      std::uint32_t m = reindex[n.index];
      if (m != kUnselected) members.push_back(m);
    }
    if (options.degree_cap && members.size() > *options.degree_cap) {
      ++capped;
      continue;
    }
    // neighbors() is ascending, so members is ascending: emit i < j directly.
    for (std::size_t i = 0; i + 1 < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j)
        acc.add(members[i], members[j]);
  }

  ProjectedGraph p(mode, std::move(ids), acc.take_sorted_edges(), g.name());
  p.capped_ = capped;
  return p;
}

template <typename Predicate>
  requires std::is_invocable_r_v<bool, Predicate&, std::size_t>
ProjectedGraph project_subset(const BipartiteGraph& g, Mode mode,
                              Predicate&& keep_node,
                              const ProjectionOptions& options = {}) {
  std::vector<bool> selected(g.node_count(mode));
  for (std::size_t i = 0; i < selected.size(); ++i) selected[i] = keep_node(i);
  return project_subset(g, mode, selected, options);
}

/// Full one-mode projection.
inline ProjectedGraph project(const BipartiteGraph& g, Mode mode,
                              const ProjectionOptions& options = {}) {
  if (g.node_count(mode) == 0)
    return ProjectedGraph(mode, {}, {}, g.name());
  return project_subset(g, mode, std::vector<bool>(g.node_count(mode), true),
                        options);
}

inline std::uint64_t possible_edge_count(std::size_t node_count) {
  return static_cast<std::uint64_t>(node_count) * (node_count - 1) / 2;
}

struct ProjectionStats {
  std::size_t node_count{0};
  std::size_t edge_count{0};
  std::uint64_t possible_edges{0};
  double density{0.0};
  double mean_degree{0.0};
};

inline ProjectionStats projection_metrics(std::size_t node_count,
                                          std::size_t edge_count) {
  if (node_count < 2)
    throw InvalidArgument("projection_stats: density undefined below 2 nodes");
  ProjectionStats s;
  s.node_count = node_count;
  s.edge_count = edge_count;
  s.possible_edges = possible_edge_count(node_count);
  s.density = static_cast<double>(edge_count) / static_cast<double>(s.possible_edges);
  s.mean_degree = 2.0 * static_cast<double>(edge_count) /
                  static_cast<double>(node_count);
  return s;
}

inline ProjectionStats projection_stats(const ProjectedGraph& p) {
  return projection_metrics(p.node_count(), p.edge_count());
}

}  // namespace creditnet

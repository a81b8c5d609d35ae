#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "creditnet/error.hpp"

namespace creditnet {

enum class Mode { Bank, Firm };
enum class Term { Short, Long, Total };

inline const char* to_string(Mode m) { return m == Mode::Bank ? "bank" : "firm"; }

inline Mode opposite(Mode m) { return m == Mode::Bank ? Mode::Firm : Mode::Bank; }

/// Loan amounts in million yen. Either both term components are known and the
/// total is their sum, or only the total is known (split-less source rows).
struct EdgeWeight {
  std::optional<double> short_term;
  std::optional<double> long_term;
  double total = 0.0;

  static EdgeWeight from_split(double short_amount, double long_amount) {
    EdgeWeight w;
    w.short_term = short_amount;
    w.long_term = long_amount;
    w.total = short_amount + long_amount;
    return w;
  }

  static EdgeWeight from_total(double total_amount) {
    EdgeWeight w;
    w.total = total_amount;
    return w;
  }

  bool has_split() const { return short_term.has_value() && long_term.has_value(); }

  /// Component for a term; nullopt when the split is unknown.
  std::optional<double> component(Term t) const {
    switch (t) {
      case Term::Short: return short_term;
      case Term::Long: return long_term;
      case Term::Total: return total;
    }
    return std::nullopt;
  }

  bool operator==(const EdgeWeight&) const = default;
};

struct NodeRef {
  Mode mode{Mode::Bank};
  std::size_t index{0};

  bool operator==(const NodeRef&) const = default;
};

inline NodeRef bank_ref(std::size_t i) { return {Mode::Bank, i}; }
inline NodeRef firm_ref(std::size_t i) { return {Mode::Firm, i}; }

struct Edge {
  std::uint32_t bank{0};
  std::uint32_t firm{0};
  EdgeWeight weight;

  bool operator==(const Edge&) const = default;
};

struct ComponentStructure {
  std::vector<std::size_t> label;  // per unified node index, dense from 0
  std::vector<std::size_t> sizes;  // per component
  std::size_t giant{0};            // label of the largest component
};

struct DiameterReport {
  std::size_t diameter{0};  // of the largest connected component
  bool connected{false};
  std::size_t component_count{0};
  std::size_t giant_size{0};
};

namespace detail {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

/// Unweighted BFS hop counts from `source` over an adjacency callback
/// `for_each_neighbor(u, visit)`. Unreached nodes keep kUnreached.
template <typename Adjacency>
std::vector<std::size_t> bfs_distances(std::size_t node_count, std::size_t source,
                                       Adjacency&& for_each_neighbor) {
  std::vector<std::size_t> dist(node_count, kUnreached);
  std::queue<std::size_t> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    std::size_t u = frontier.front();
    frontier.pop();
    for_each_neighbor(u, [&](std::size_t v) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    });
  }
  return dist;
}

template <typename Adjacency>
ComponentStructure connected_components(std::size_t node_count,
                                        Adjacency&& for_each_neighbor) {
  ComponentStructure cs;
  cs.label.assign(node_count, kUnreached);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < node_count; ++s) {
    if (cs.label[s] != kUnreached) continue;
    std::size_t id = cs.sizes.size();
    cs.sizes.push_back(0);
    cs.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      ++cs.sizes[id];
      for_each_neighbor(u, [&](std::size_t v) {
        if (cs.label[v] == kUnreached) {
          cs.label[v] = id;
          stack.push_back(v);
        }
      });
    }
  }
  for (std::size_t c = 0; c < cs.sizes.size(); ++c)
    if (cs.sizes[c] > cs.sizes[cs.giant]) cs.giant = c;
  return cs;
}

template <typename Adjacency>
DiameterReport diameter_report(std::size_t node_count, Adjacency&& adj) {
  if (node_count == 0)
    throw InvalidArgument("diameter: graph has no nodes");
  ComponentStructure cs = connected_components(node_count, adj);
  DiameterReport report;
  report.component_count = cs.sizes.size();
  report.connected = cs.sizes.size() == 1;
  report.giant_size = cs.sizes[cs.giant];
  for (std::size_t s = 0; s < node_count; ++s) {
    if (cs.label[s] != cs.giant) continue;
    auto dist = bfs_distances(node_count, s, adj);
    for (std::size_t v = 0; v < node_count; ++v)
      if (dist[v] != kUnreached && dist[v] > report.diameter)
        report.diameter = dist[v];
  }
  return report;
}

}  // namespace detail

/// Immutable two-mode weighted credit graph: banks lend to firms. Built via
/// BipartiteGraphBuilder; safe to share across concurrent readers.
class BipartiteGraph {
  // Unified-index adjacency (banks 0..B-1, firms B..B+F-1) for the search
  // helpers; defined up front so its type is deduced before first use.
  auto adjacency() const {
    return [this](std::size_t u, auto&& visit) {
      if (u < bank_count()) {
        for (std::uint32_t e : bank_incident_[u])
          visit(bank_count() + edges_[e].firm);
      } else {
        for (std::uint32_t e : firm_incident_[u - bank_count()])
          visit(edges_[e].bank);
      }
    };
  }

 public:
  BipartiteGraph() = default;

  std::size_t bank_count() const { return bank_ids_.size(); }
  std::size_t firm_count() const { return firm_ids_.size(); }
  std::size_t node_count(Mode m) const {
    return m == Mode::Bank ? bank_count() : firm_count();
  }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& name() const { return name_; }

  /// Edges sorted by (bank index, firm index).
  const std::vector<Edge>& edges() const { return edges_; }

  /// Edges that carry no short/long split (total only).
  std::size_t missing_split_count() const { return missing_split_; }

  const std::string& bank_id(std::size_t i) const { return bank_ids_.at(i); }
  const std::string& firm_id(std::size_t i) const { return firm_ids_.at(i); }
  const std::string& node_id(NodeRef n) const {
    return n.mode == Mode::Bank ? bank_id(n.index) : firm_id(n.index);
  }
  const std::vector<std::string>& bank_ids() const { return bank_ids_; }
  const std::vector<std::string>& firm_ids() const { return firm_ids_; }

  std::optional<std::size_t> find_bank(const std::string& id) const {
    auto it = bank_index_.find(id);
    if (it == bank_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> find_firm(const std::string& id) const {
    auto it = firm_index_.find(id);
    if (it == firm_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Indices into edges() incident to a node, ascending by opposite index.
  std::span<const std::uint32_t> incident_edges(NodeRef n) const {
    check(n);
    const auto& lists = n.mode == Mode::Bank ? bank_incident_ : firm_incident_;
    return lists[n.index];
  }

  /// Number of distinct counterparties.
  std::size_t degree(NodeRef n) const { return incident_edges(n).size(); }

  /// Sum of the selected weight component over incident edges. Edges without
  /// a short/long split contribute only to Term::Total (see
  /// missing_split_count() for how many were skipped graph-wide).
  double strength(NodeRef n, Term term = Term::Total) const {
    double sum = 0.0;
    for (std::uint32_t e : incident_edges(n)) {
      if (auto c = edges_[e].weight.component(term)) sum += *c;
    }
    return sum;
  }

  /// Distinct opposite-mode counterparties, ascending by index.
  std::vector<NodeRef> neighbors(NodeRef n) const {
    std::vector<NodeRef> out;
    auto inc = incident_edges(n);
    out.reserve(inc.size());
    for (std::uint32_t e : inc) out.push_back(counterparty(n, e));
    return out;
  }

  NodeRef counterparty(NodeRef n, std::uint32_t edge_index) const {
    const Edge& e = edges_.at(edge_index);
    return n.mode == Mode::Bank ? firm_ref(e.firm) : bank_ref(e.bank);
  }

  /// Shortest hop count between two nodes; nullopt when unreachable.
  std::optional<std::size_t> distance(NodeRef a, NodeRef b) const {
    check(a);
    check(b);
    if (a == b) return 0;
    auto dist = detail::bfs_distances(unified_count(), unify(a), adjacency());
    std::size_t d = dist[unify(b)];
    if (d == detail::kUnreached) return std::nullopt;
    return d;
  }

  /// Diameter of the largest connected component, with component structure.
  DiameterReport diameter() const {
    return detail::diameter_report(unified_count(), adjacency());
  }

  /// Component label per unified node index (banks first, then firms).
  ComponentStructure components() const {
    return detail::connected_components(unified_count(), adjacency());
  }

  std::size_t unified_count() const { return bank_count() + firm_count(); }
  std::size_t unify(NodeRef n) const {
    return n.mode == Mode::Bank ? n.index : bank_count() + n.index;
  }

  /// Identity on ids, edges and weights; name excluded.
  bool operator==(const BipartiteGraph& other) const {
    return bank_ids_ == other.bank_ids_ && firm_ids_ == other.firm_ids_ &&
           edges_ == other.edges_;
  }

 private:
  friend class BipartiteGraphBuilder;

  void check(NodeRef n) const {
    if (n.index >= node_count(n.mode))
      throw InvalidArgument(std::string("invalid node reference: ") +
                            to_string(n.mode) + " index " +
                            std::to_string(n.index) + " out of range");
  }

  std::string name_;
  std::vector<std::string> bank_ids_;
  std::vector<std::string> firm_ids_;
  std::unordered_map<std::string, std::size_t> bank_index_;
  std::unordered_map<std::string, std::size_t> firm_index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> bank_incident_;
  std::vector<std::vector<std::uint32_t>> firm_incident_;
  std::size_t missing_split_ = 0;
};

struct BuildStats {
  std::size_t duplicate_rows_merged = 0;
  std::size_t zero_total_dropped = 0;
};

/// Accumulates edge rows keyed by string ids, merging duplicate (bank, firm)
/// pairs by summing and dropping zero-total rows; build() freezes the result.
class BipartiteGraphBuilder {
 public:
  BipartiteGraphBuilder& set_name(std::string name) {
    name_ = std::move(name);
    return *this;
  }

  /// Registers a node even if no edge touches it (isolated nodes survive).
  std::size_t add_bank(const std::string& id) { return intern(id, Mode::Bank); }
  std::size_t add_firm(const std::string& id) { return intern(id, Mode::Firm); }

  void add_edge(const std::string& bank_id, const std::string& firm_id,
                const EdgeWeight& w) {
    validate_weight(bank_id, firm_id, w);
    std::size_t b = add_bank(bank_id);
    std::size_t f = add_firm(firm_id);
    if (w.total == 0.0) {
      ++stats_.zero_total_dropped;
      return;
    }
    std::uint64_t key = (static_cast<std::uint64_t>(b) << 32) | f;
    auto [it, inserted] = cell_.try_emplace(key, w);
    if (!inserted) {
      it->second = merge(it->second, w);
      ++stats_.duplicate_rows_merged;
    }
  }

  const BuildStats& stats() const { return stats_; }

  BipartiteGraph build() const {
    BipartiteGraph g;
    g.name_ = name_;
    g.bank_ids_ = bank_ids_;
    g.firm_ids_ = firm_ids_;
    g.bank_index_ = bank_index_;
    g.firm_index_ = firm_index_;
    g.edges_.reserve(cell_.size());
    for (const auto& [key, w] : cell_)
      g.edges_.push_back(Edge{static_cast<std::uint32_t>(key >> 32),
                              static_cast<std::uint32_t>(key & 0xffffffffu), w});
    std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& a, const Edge& b) {
      return a.bank != b.bank ? a.bank < b.bank : a.firm < b.firm;
    });
    g.bank_incident_.resize(g.bank_ids_.size());
    g.firm_incident_.resize(g.firm_ids_.size());
    for (std::uint32_t e = 0; e < g.edges_.size(); ++e) {
      g.bank_incident_[g.edges_[e].bank].push_back(e);
      g.firm_incident_[g.edges_[e].firm].push_back(e);
      if (!g.edges_[e].weight.has_split()) ++g.missing_split_;
    }
    return g;
  }

 private:
  static void validate_weight(const std::string& bank_id,
                              const std::string& firm_id, const EdgeWeight& w) {
    auto bad = [&](const char* what) {
      throw InvalidArgument("edge (" + bank_id + ", " + firm_id + "): " + what);
    };
    if (w.short_term.has_value() != w.long_term.has_value())
      bad("short/long split must be both present or both absent");
    if (w.short_term && (*w.short_term < 0.0 || *w.long_term < 0.0))
      bad("negative amount");
    if (w.total < 0.0) bad("negative amount");
    if (w.has_split() && w.total != *w.short_term + *w.long_term)
      bad("total does not equal short + long");
  }

  static EdgeWeight merge(const EdgeWeight& a, const EdgeWeight& b) {
    // Sum of a split-less tranche poisons the split of the merged edge.
    if (a.has_split() && b.has_split())
      return EdgeWeight::from_split(*a.short_term + *b.short_term,
                                    *a.long_term + *b.long_term);
    return EdgeWeight::from_total(a.total + b.total);
  }

  std::size_t intern(const std::string& id, Mode m) {
    if (id.empty() || id.find_first_of("\r\n") != std::string::npos)
      throw InvalidArgument("node id must be non-empty and single-line: \"" +
                            id + "\"");
    auto& index = m == Mode::Bank ? bank_index_ : firm_index_;
    auto& ids = m == Mode::Bank ? bank_ids_ : firm_ids_;
    auto [it, inserted] = index.try_emplace(id, ids.size());
    if (inserted) ids.push_back(id);
    return it->second;
  }

  std::string name_;
  std::vector<std::string> bank_ids_;
  std::vector<std::string> firm_ids_;
  std::unordered_map<std::string, std::size_t> bank_index_;
  std::unordered_map<std::string, std::size_t> firm_index_;
  std::unordered_map<std::uint64_t, EdgeWeight> cell_;
  BuildStats stats_;
};

}  // namespace creditnet

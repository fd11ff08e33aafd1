#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tapc {

using NodeId = int;

/// Sorted, duplicate-free list of node indices.
using NodeSet = std::vector<NodeId>;

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

namespace detail {

/// Dense p x p boolean matrix; row-major, one byte per entry.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(int p);

  int size() const noexcept { return p_; }
  bool operator()(NodeId u, NodeId v) const noexcept {
    return bits_[static_cast<std::size_t>(u) * p_ + v] != 0;
  }
  void set(NodeId u, NodeId v, bool value) noexcept {
    bits_[static_cast<std::size_t>(u) * p_ + v] = value ? 1 : 0;
  }
  void check_node(NodeId v) const;

  friend bool operator==(const AdjacencyMatrix&, const AdjacencyMatrix&) = default;

 private:
  int p_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace detail

/// Directed acyclic graph. Every mutation keeps the graph acyclic.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int p);
  /// Throws InvalidArgument on self-loops, 2-cycles or any directed cycle.
  Dag(int p, std::span<const Edge> edges);
  Dag(int p, std::initializer_list<Edge> edges)
      : Dag(p, std::span<const Edge>(edges.begin(), edges.size())) {}

  int size() const noexcept { return adj_.size(); }
  bool has_edge(NodeId u, NodeId v) const noexcept { return adj_(u, v); }
  bool adjacent(NodeId u, NodeId v) const noexcept { return adj_(u, v) || adj_(v, u); }
  void add_edge(NodeId u, NodeId v);
  void remove_edge(NodeId u, NodeId v);

  NodeSet parents(NodeId v) const;
  NodeSet children(NodeId v) const;
  std::vector<Edge> edges() const;
  std::size_t edge_count() const;

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  detail::AdjacencyMatrix adj_;
};

/// Undirected simple graph.
class Skeleton {
 public:
  Skeleton() = default;
  explicit Skeleton(int p);
  static Skeleton complete(int p);

  int size() const noexcept { return adj_.size(); }
  bool adjacent(NodeId u, NodeId v) const noexcept { return adj_(u, v); }
  void add_edge(NodeId u, NodeId v);
  void remove_edge(NodeId u, NodeId v);
  NodeSet neighbors(NodeId v) const;
  /// Unordered pairs, reported with from < to.
  std::vector<Edge> edges() const;

  friend bool operator==(const Skeleton&, const Skeleton&) = default;

 private:
  detail::AdjacencyMatrix adj_;
};

/// Partially directed graph: at most one edge per pair, directed or not.
///
/// Stored as a mark matrix: `u -> v` sets (u,v) only; `u - v` sets both.
class Pdag {
 public:
  Pdag() = default;
  explicit Pdag(int p);
  static Pdag from_dag(const Dag& g);
  static Pdag from_skeleton(const Skeleton& s);

  int size() const noexcept { return marks_.size(); }
  bool adjacent(NodeId u, NodeId v) const noexcept { return marks_(u, v) || marks_(v, u); }
  bool has_directed(NodeId u, NodeId v) const noexcept { return marks_(u, v) && !marks_(v, u); }
  bool has_undirected(NodeId u, NodeId v) const noexcept { return marks_(u, v) && marks_(v, u); }

  void add_directed(NodeId u, NodeId v);
  void add_undirected(NodeId u, NodeId v);
  void remove_edge(NodeId u, NodeId v);
  /// Turns an existing edge between u and v into u -> v.
  void orient(NodeId u, NodeId v);

  std::vector<Edge> directed_edges() const;
  /// Reported with from < to.
  std::vector<Edge> undirected_edges() const;
  Skeleton skeleton() const;

  friend bool operator==(const Pdag&, const Pdag&) = default;

 private:
  detail::AdjacencyMatrix marks_;
};

/// Directed graph over the p series variables; self-loops and cycles allowed.
class RolledGraph {
 public:
  RolledGraph() = default;
  explicit RolledGraph(int p);
  RolledGraph(int p, std::initializer_list<Edge> edges);

  int size() const noexcept { return adj_.size(); }
  bool has_edge(NodeId u, NodeId v) const noexcept { return adj_(u, v); }
  void add_edge(NodeId u, NodeId v);
  void remove_edge(NodeId u, NodeId v);
  NodeSet parents(NodeId v) const;
  std::vector<Edge> edges() const;
  std::size_t edge_count() const;

  friend bool operator==(const RolledGraph&, const RolledGraph&) = default;

 private:
  detail::AdjacencyMatrix adj_;
};

/// Node (variable, time) of the window-unrolled graph; both 0-based.
struct UnrolledNode {
  NodeId variable = 0;
  int time = 0;

  NodeId flat(int p) const noexcept { return p * time + variable; }
  static UnrolledNode from_flat(NodeId index, int p) noexcept {
    return {index % p, index / p};
  }
  friend auto operator<=>(const UnrolledNode&, const UnrolledNode&) = default;
};

/// Unshielded collider u -> v <- w, with u < w.
struct VStructure {
  NodeId u = 0;
  NodeId v = 0;
  NodeId w = 0;
  friend auto operator<=>(const VStructure&, const VStructure&) = default;
};

bool is_acyclic(int p, std::span<const Edge> edges);

/// Ancestors of every node in `nodes`, each node counted as its own ancestor.
NodeSet ancestors(const Dag& g, const NodeSet& nodes);

/// d-separation of A and B given C by Bayes-ball reachability.
/// Throws InvalidArgument when the three sets are not pairwise disjoint.
bool d_separated(const Dag& g, const NodeSet& a, const NodeSet& b, const NodeSet& c);

std::vector<VStructure> v_structures(const Dag& g);
Skeleton skeleton_of(const Dag& g);
bool markov_equivalent(const Dag& g1, const Dag& g2);

/// CPDAG of the Markov equivalence class of g: skeleton, v-structures, then
/// closure under the orientation rules.
Pdag cpdag_of(const Dag& g);

/// Every DAG Markov equivalent to g, by exhaustive orientation search.
/// Refuses graphs with more than kMaxEnumerationNodes nodes.
inline constexpr int kMaxEnumerationNodes = 8;
std::vector<Dag> enumerate_equivalence_class(const Dag& g);

/// Projects a graph over p * tau unrolled nodes onto the p variables.
///
/// A directed edge (u,t1) -> (v,t2) yields u -> v when t1 <= t2. An
/// undirected edge stands for both orientations, each kept under the same
/// forward-in-time condition, so contemporaneous undirected edges roll to
/// both u -> v and v -> u.
RolledGraph roll(const Pdag& g, int p, int tau);

/// Rolling of a single DAG (a Pdag with only directed edges).
RolledGraph roll(const Dag& g, int p, int tau);

NodeSet make_node_set(std::vector<NodeId> nodes);

}  // namespace tapc

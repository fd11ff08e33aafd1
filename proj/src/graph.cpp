#include "tapc/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "tapc/error.hpp"
#include "tapc/pc.hpp"

namespace tapc {

namespace detail {

AdjacencyMatrix::AdjacencyMatrix(int p) : p_(p) {
  require(p >= 0, "node count must be non-negative");
  bits_.assign(static_cast<std::size_t>(p) * p, 0);
}

void AdjacencyMatrix::check_node(NodeId v) const {
  if (v < 0 || v >= p_) {
    throw InvalidArgument("node index " + std::to_string(v) + " out of range [0, " +
                          std::to_string(p_) + ")");
  }
}

}  // namespace detail

namespace {

// Depth-first search for a directed path from `from` to `to`.
bool reaches(const detail::AdjacencyMatrix& adj, NodeId from, NodeId to) {
  const int p = adj.size();
  std::vector<char> seen(p, 0);
  std::vector<NodeId> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    if (u == to) return true;
    for (NodeId w = 0; w < p; ++w) {
      if (adj(u, w) && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return false;
}

NodeSet row_members(const detail::AdjacencyMatrix& adj, NodeId v, bool by_row) {
  NodeSet out;
  for (NodeId w = 0; w < adj.size(); ++w) {
    if (by_row ? adj(v, w) : adj(w, v)) out.push_back(w);
  }
  return out;
}

void check_set(const Dag& g, const NodeSet& s) {
  for (NodeId v : s) {
    if (v < 0 || v >= g.size()) {
      throw InvalidArgument("node index " + std::to_string(v) + " out of range");
    }
  }
}

}  // namespace

NodeSet make_node_set(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

// ---------------------------------------------------------------- Dag

Dag::Dag(int p) : adj_(p) {}

Dag::Dag(int p, std::span<const Edge> edges) : adj_(p) {
  for (const Edge& e : edges) add_edge(e.from, e.to);
}

void Dag::add_edge(NodeId u, NodeId v) {
  adj_.check_node(u);
  adj_.check_node(v);
  if (u == v) throw InvalidArgument("self-loop not allowed in a DAG");
  if (adj_(u, v)) return;
  if (adj_(v, u) || reaches(adj_, v, u)) {
    throw InvalidArgument("edge " + std::to_string(u) + "->" + std::to_string(v) +
                          " would create a directed cycle");
  }
  adj_.set(u, v, true);
}

void Dag::remove_edge(NodeId u, NodeId v) {
  adj_.check_node(u);
  adj_.check_node(v);
  adj_.set(u, v, false);
}

NodeSet Dag::parents(NodeId v) const { return row_members(adj_, v, false); }
NodeSet Dag::children(NodeId v) const { return row_members(adj_, v, true); }

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  for (NodeId u = 0; u < size(); ++u)
    for (NodeId v = 0; v < size(); ++v)
      if (adj_(u, v)) out.push_back({u, v});
  return out;
}

std::size_t Dag::edge_count() const { return edges().size(); }

// ---------------------------------------------------------------- Skeleton

Skeleton::Skeleton(int p) : adj_(p) {}

Skeleton Skeleton::complete(int p) {
  Skeleton s(p);
  for (NodeId u = 0; u < p; ++u)
    for (NodeId v = u + 1; v < p; ++v) s.add_edge(u, v);
  return s;
}

void Skeleton::add_edge(NodeId u, NodeId v) {
  adj_.check_node(u);
  adj_.check_node(v);
  if (u == v) throw InvalidArgument("self-loop not allowed in a skeleton");
  adj_.set(u, v, true);
  adj_.set(v, u, true);
}

void Skeleton::remove_edge(NodeId u, NodeId v) {
  adj_.check_node(u);
  adj_.check_node(v);
  adj_.set(u, v, false);
  adj_.set(v, u, false);
}

NodeSet Skeleton::neighbors(NodeId v) const { return row_members(adj_, v, true); }

std::vector<Edge> Skeleton::edges() const {
  std::vector<Edge> out;
  for (NodeId u = 0; u < size(); ++u)
    for (NodeId v = u + 1; v < size(); ++v)
      if (adj_(u, v)) out.push_back({u, v});
  return out;
}

// ---------------------------------------------------------------- Pdag

Pdag::Pdag(int p) : marks_(p) {}

Pdag Pdag::from_dag(const Dag& g) {
  Pdag out(g.size());
  for (const Edge& e : g.edges()) out.add_directed(e.from, e.to);
  return out;
}

Pdag Pdag::from_skeleton(const Skeleton& s) {
  Pdag out(s.size());
  for (const Edge& e : s.edges()) out.add_undirected(e.from, e.to);
  return out;
}

void Pdag::add_directed(NodeId u, NodeId v) {
  marks_.check_node(u);
  marks_.check_node(v);
  if (u == v) throw InvalidArgument("self-loop not allowed in a PDAG");
  marks_.set(u, v, true);
  marks_.set(v, u, false);
}

void Pdag::add_undirected(NodeId u, NodeId v) {
  marks_.check_node(u);
  marks_.check_node(v);
  if (u == v) throw InvalidArgument("self-loop not allowed in a PDAG");
  marks_.set(u, v, true);
  marks_.set(v, u, true);
}

void Pdag::remove_edge(NodeId u, NodeId v) {
  marks_.check_node(u);
  marks_.check_node(v);
  marks_.set(u, v, false);
  marks_.set(v, u, false);
}

void Pdag::orient(NodeId u, NodeId v) {
  marks_.check_node(u);
  marks_.check_node(v);
  if (!adjacent(u, v)) {
    throw InvalidArgument("cannot orient missing edge " + std::to_string(u) + "-" +
                          std::to_string(v));
  }
  marks_.set(u, v, true);
  marks_.set(v, u, false);
}

std::vector<Edge> Pdag::directed_edges() const {
  std::vector<Edge> out;
  for (NodeId u = 0; u < size(); ++u)
    for (NodeId v = 0; v < size(); ++v)
      if (has_directed(u, v)) out.push_back({u, v});
  return out;
}

std::vector<Edge> Pdag::undirected_edges() const {
  std::vector<Edge> out;
  for (NodeId u = 0; u < size(); ++u)
    for (NodeId v = u + 1; v < size(); ++v)
      if (has_undirected(u, v)) out.push_back({u, v});
  return out;
}

Skeleton Pdag::skeleton() const {
  Skeleton s(size());
  for (NodeId u = 0; u < size(); ++u)
    for (NodeId v = u + 1; v < size(); ++v)
      if (adjacent(u, v)) s.add_edge(u, v);
  return s;
}

// ---------------------------------------------------------------- RolledGraph

RolledGraph::RolledGraph(int p) : adj_(p) {}

RolledGraph::RolledGraph(int p, std::initializer_list<Edge> edges) : adj_(p) {
  for (const Edge& e : edges) add_edge(e.from, e.to);
}

void RolledGraph::add_edge(NodeId u, NodeId v) {
  adj_.check_node(u);
  adj_.check_node(v);
  adj_.set(u, v, true);
}

void RolledGraph::remove_edge(NodeId u, NodeId v) {
  adj_.check_node(u);
  adj_.check_node(v);
  adj_.set(u, v, false);
}

NodeSet RolledGraph::parents(NodeId v) const { return row_members(adj_, v, false); }

std::vector<Edge> RolledGraph::edges() const {
  std::vector<Edge> out;
  for (NodeId u = 0; u < size(); ++u)
    for (NodeId v = 0; v < size(); ++v)
      if (adj_(u, v)) out.push_back({u, v});
  return out;
}

std::size_t RolledGraph::edge_count() const { return edges().size(); }

// ---------------------------------------------------------------- algorithms

bool is_acyclic(int p, std::span<const Edge> edges) {
  // Kahn's algorithm; duplicate edges are tolerated.
  detail::AdjacencyMatrix adj(p);
  for (const Edge& e : edges) {
    adj.check_node(e.from);
    adj.check_node(e.to);
    if (e.from == e.to) return false;
    adj.set(e.from, e.to, true);
  }
  std::vector<int> indegree(p, 0);
  for (NodeId u = 0; u < p; ++u)
    for (NodeId v = 0; v < p; ++v)
      if (adj(u, v)) ++indegree[v];
  std::vector<NodeId> ready;
  for (NodeId v = 0; v < p; ++v)
    if (indegree[v] == 0) ready.push_back(v);
  int removed = 0;
  while (!ready.empty()) {
    const NodeId u = ready.back();
    ready.pop_back();
    ++removed;
    for (NodeId v = 0; v < p; ++v) {
      if (adj(u, v) && --indegree[v] == 0) ready.push_back(v);
    }
  }
  return removed == p;
}

NodeSet ancestors(const Dag& g, const NodeSet& nodes) {
  check_set(g, nodes);
  const int p = g.size();
  std::vector<char> mark(p, 0);
  std::vector<NodeId> stack(nodes.begin(), nodes.end());
  for (NodeId v : nodes) mark[v] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u = 0; u < p; ++u) {
      if (g.has_edge(u, v) && !mark[u]) {
        mark[u] = 1;
        stack.push_back(u);
      }
    }
  }
  NodeSet out;
  for (NodeId v = 0; v < p; ++v)
    if (mark[v]) out.push_back(v);
  return out;
}

bool d_separated(const Dag& g, const NodeSet& a, const NodeSet& b, const NodeSet& c) {
  check_set(g, a);
  check_set(g, b);
  check_set(g, c);
  const int p = g.size();
  std::vector<char> in_a(p, 0), in_b(p, 0), in_c(p, 0);
  for (NodeId v : a) in_a[v] = 1;
  for (NodeId v : b) in_b[v] = 1;
  for (NodeId v : c) in_c[v] = 1;
  for (NodeId v = 0; v < p; ++v) {
    if ((in_a[v] && in_b[v]) || (in_a[v] && in_c[v]) || (in_b[v] && in_c[v])) {
      throw InvalidArgument("d-separation sets must be pairwise disjoint");
    }
  }

  std::vector<char> in_an_c(p, 0);
  for (NodeId v : ancestors(g, c)) in_an_c[v] = 1;

  // State (v, up): ball arrived at v from a child (or v is a source).
  // State (v, down): ball arrived at v from a parent.
  enum Direction : int { kUp = 0, kDown = 1 };
  std::vector<char> visited(2 * static_cast<std::size_t>(p), 0);
  std::deque<std::pair<NodeId, Direction>> queue;
  for (NodeId v : a) queue.emplace_back(v, kUp);

  while (!queue.empty()) {
    const auto [v, dir] = queue.front();
    queue.pop_front();
    const std::size_t key = 2 * static_cast<std::size_t>(v) + dir;
    if (visited[key]) continue;
    visited[key] = 1;
    if (!in_c[v] && in_b[v]) return false;

    if (dir == kUp) {
      if (in_c[v]) continue;
      for (NodeId u = 0; u < p; ++u) {
        if (g.has_edge(u, v)) queue.emplace_back(u, kUp);
        if (g.has_edge(v, u)) queue.emplace_back(u, kDown);
      }
    } else {
      if (!in_c[v]) {
        for (NodeId u = 0; u < p; ++u)
          if (g.has_edge(v, u)) queue.emplace_back(u, kDown);
      }
      if (in_an_c[v]) {
        for (NodeId u = 0; u < p; ++u)
          if (g.has_edge(u, v)) queue.emplace_back(u, kUp);
      }
    }
  }
  return true;
}

std::vector<VStructure> v_structures(const Dag& g) {
  std::vector<VStructure> out;
  const int p = g.size();
  for (NodeId v = 0; v < p; ++v) {
    const NodeSet pa = g.parents(v);
    for (std::size_t x = 0; x < pa.size(); ++x)
      for (std::size_t y = x + 1; y < pa.size(); ++y)
        if (!g.adjacent(pa[x], pa[y])) out.push_back({pa[x], v, pa[y]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Skeleton skeleton_of(const Dag& g) {
  Skeleton s(g.size());
  for (const Edge& e : g.edges()) s.add_edge(e.from, e.to);
  return s;
}

bool markov_equivalent(const Dag& g1, const Dag& g2) {
  detail::require(g1.size() == g2.size(), "markov_equivalent: node count mismatch");
  return skeleton_of(g1) == skeleton_of(g2) && v_structures(g1) == v_structures(g2);
}

Pdag cpdag_of(const Dag& g) {
  Pdag out = Pdag::from_skeleton(skeleton_of(g));
  for (const VStructure& s : v_structures(g)) {
    out.orient(s.u, s.v);
    out.orient(s.w, s.v);
  }
  apply_orientation_rules(out);
  return out;
}

RolledGraph roll(const Pdag& g, int p, int tau) {
  detail::require(p >= 1 && tau >= 1, "roll: p and tau must be positive");
  if (g.size() != p * tau) {
    throw InvalidArgument("roll: graph has " + std::to_string(g.size()) +
                          " nodes, expected p*tau = " + std::to_string(p * tau));
  }
  RolledGraph out(p);
  const int n = g.size();
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      // Marks (a,b) cover both a -> b and the a -> b half of a - b.
      if (a == b || !(g.has_directed(a, b) || g.has_undirected(a, b))) continue;
      const UnrolledNode from = UnrolledNode::from_flat(a, p);
      const UnrolledNode to = UnrolledNode::from_flat(b, p);
      if (from.time <= to.time) out.add_edge(from.variable, to.variable);
    }
  }
  return out;
}

RolledGraph roll(const Dag& g, int p, int tau) { return roll(Pdag::from_dag(g), p, tau); }

}  // namespace tapc

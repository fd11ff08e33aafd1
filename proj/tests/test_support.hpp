#pragma once

// Helpers shared by the unit and acceptance tests: random graphs and slow,
// independent reference implementations used as oracles.

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "tapc/graph.hpp"
#include "tapc/rng.hpp"

namespace tapc::testing {

/// Random DAG: a random topological order, each forward pair an edge with
/// probability `density`.
inline Dag random_dag(int p, double density, SplitMix64& rng) {
  std::vector<NodeId> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  for (int i = p - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  Dag g(p);
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b)
      if (rng.bernoulli(density)) g.add_edge(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]);
  return g;
}

inline std::vector<NodeSet> all_subsets(const std::vector<NodeId>& pool, std::size_t max_size) {
  std::vector<NodeSet> out;
  const std::size_t m = pool.size();
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    NodeSet s;
    for (std::size_t b = 0; b < m; ++b)
      if (mask & (1u << b)) s.push_back(pool[b]);
    if (s.size() <= max_size) out.push_back(make_node_set(s));
  }
  return out;
}

inline bool is_descendant_or_self(const Dag& g, NodeId from, NodeId target) {
  if (from == target) return true;
  for (const NodeId c : g.children(from))
    if (is_descendant_or_self(g, c, target)) return true;
  return false;
}

/// d-separation by enumerating every simple path of the skeleton and
/// checking the blocking rule node by node.
inline bool d_separated_by_paths(const Dag& g, NodeId a, NodeId b, const NodeSet& c) {
  const int p = g.size();
  auto in_c = [&c](NodeId v) { return std::binary_search(c.begin(), c.end(), v); };
  auto collider_open = [&](NodeId v) {
    for (const NodeId w : c)
      if (is_descendant_or_self(g, v, w)) return true;
    return false;
  };
  std::vector<NodeId> path{a};
  std::vector<bool> seen(static_cast<std::size_t>(p), false);
  seen[static_cast<std::size_t>(a)] = true;
  bool connected = false;
  std::function<void()> walk = [&] {
    if (connected) return;
    const NodeId last = path.back();
    if (last == b) {
      for (std::size_t k = 1; k + 1 < path.size(); ++k) {
        const NodeId prev = path[k - 1], v = path[k], next = path[k + 1];
        const bool collider = g.has_edge(prev, v) && g.has_edge(next, v);
        if (collider ? !collider_open(v) : in_c(v)) return;
      }
      connected = true;
      return;
    }
    for (NodeId w = 0; w < p; ++w) {
      if (seen[static_cast<std::size_t>(w)] || !g.adjacent(last, w)) continue;
      seen[static_cast<std::size_t>(w)] = true;
      path.push_back(w);
      walk();
      path.pop_back();
      seen[static_cast<std::size_t>(w)] = false;
    }
  };
  walk();
  return !connected;
}

/// Exact covariance of the linear SEM X = B^T X + e, B(u,v) the weight of
/// u -> v, with unit noise variances.
inline Eigen::MatrixXd sem_covariance(const Eigen::MatrixXd& weights) {
  const Eigen::Index p = weights.rows();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p, p) - weights.transpose();
  const Eigen::MatrixXd inv = a.inverse();
  return inv * inv.transpose();
}

inline Eigen::MatrixXd random_weights(const Dag& g, double lo, double hi, SplitMix64& rng) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(g.size(), g.size());
  for (const Edge& e : g.edges()) w(e.from, e.to) = rng.uniform(lo, hi);
  return w;
}

}  // namespace tapc::testing

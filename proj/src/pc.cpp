#include "tapc/pc.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <numeric>
#include <sstream>

#include "tapc/bootstrap.hpp"
#include "tapc/error.hpp"
#include "tapc/rng.hpp"

namespace tapc {

// ---------------------------------------------------------------- SepSetTable

void SepSetTable::set(NodeId i, NodeId j, NodeSet k) { table_[key(i, j)] = std::move(k); }

bool SepSetTable::contains(NodeId i, NodeId j) const { return table_.contains(key(i, j)); }

const NodeSet& SepSetTable::at(NodeId i, NodeId j) const {
  const auto it = table_.find(key(i, j));
  if (it == table_.end()) {
    throw InvalidArgument("no separating set recorded for pair " + std::to_string(i + 1) + "," +
                          std::to_string(j + 1));
  }
  return it->second;
}

// ---------------------------------------------------------------- skeleton

namespace {

// Advances `idx` (strictly increasing positions into a pool of size n) to the
// next combination in lexicographic order; false after the last one.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t pos = k; pos-- > 0;) {
    if (idx[pos] < n - k + pos) {
      ++idx[pos];
      for (std::size_t q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
      return true;
    }
  }
  return false;
}

NodeSet without(NodeSet set, NodeId v) {
  set.erase(std::remove(set.begin(), set.end(), v), set.end());
  return set;
}

}  // namespace

SkeletonResult find_skeleton(const CiFunction& ci, int p, const SkeletonOptions& opts) {
  detail::require(p >= 1, "find_skeleton: need at least one node");
  std::vector<NodeId> order = opts.order;
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
  } else {
    std::vector<NodeId> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int v = 0; v < p; ++v) {
      if (sorted.size() != static_cast<std::size_t>(p) || sorted[static_cast<std::size_t>(v)] != v) {
        throw InvalidArgument("find_skeleton: visit order must be a permutation of 0..p-1");
      }
    }
  }
  const int max_level = opts.max_conditioning.value_or(std::max(0, p - 2));
  detail::require(max_level >= 0, "find_skeleton: max conditioning size must be non-negative");

  SkeletonResult result;
  result.skeleton = Skeleton::complete(p);
  Skeleton& g = result.skeleton;

  for (int level = 0;; ++level) {
    std::vector<NodeSet> snapshot;
    if (opts.stable) {
      for (NodeId v = 0; v < p; ++v) snapshot.push_back(g.neighbors(v));
    }
    for (NodeId i : order) {
      for (NodeId j : order) {
        if (i == j || !g.adjacent(i, j)) continue;
        const NodeSet pool = without(opts.stable ? snapshot[static_cast<std::size_t>(i)] : g.neighbors(i), j);
        if (pool.size() < static_cast<std::size_t>(level)) continue;
        std::vector<std::size_t> idx(static_cast<std::size_t>(level));
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        do {
          CiQuery q{i, j, {}};
          for (std::size_t pos : idx) q.k.push_back(pool[pos]);
          CiOutcome outcome;
          try {
            outcome = ci(q);
          } catch (const DegenerateData& e) {
            throw DegenerateData(std::string(e.what()) + " [while testing " + describe(q) + "]");
          } catch (const InvalidArgument& e) {
            throw InvalidArgument(std::string(e.what()) + " [while testing " + describe(q) + "]");
          }
          result.decisions.push_back({q, outcome});
          if (outcome.independent) {
            g.remove_edge(i, j);
            result.sepsets.set(i, j, q.k);
            break;
          }
        } while (next_combination(idx, pool.size()));
      }
    }
    result.levels = level + 1;

    bool more = false;
    for (NodeId i = 0; i < p && !more; ++i) {
      const auto degree = g.neighbors(i).size();
      for (NodeId j = 0; j < p; ++j) {
        if (g.adjacent(i, j) && degree - 1 > static_cast<std::size_t>(level)) {
          more = true;
          break;
        }
      }
    }
    if (!more || level >= max_level) break;
  }
  return result;
}

// ---------------------------------------------------------------- orientation

namespace {

// c -> a and c not adjacent to b: a -> b.
bool rule1(const Pdag& g, NodeId a, NodeId b) {
  for (NodeId c = 0; c < g.size(); ++c) {
    if (c != b && g.has_directed(c, a) && !g.adjacent(c, b)) return true;
  }
  return false;
}

// a -> c -> b: a -> b.
bool rule2(const Pdag& g, NodeId a, NodeId b) {
  for (NodeId c = 0; c < g.size(); ++c) {
    if (g.has_directed(a, c) && g.has_directed(c, b)) return true;
  }
  return false;
}

// a - c -> b and a - d -> b with c, d not adjacent: a -> b.
bool rule3(const Pdag& g, NodeId a, NodeId b) {
  const int p = g.size();
  for (NodeId c = 0; c < p; ++c) {
    if (!g.has_undirected(a, c) || !g.has_directed(c, b)) continue;
    for (NodeId d = c + 1; d < p; ++d) {
      if (g.has_undirected(a, d) && g.has_directed(d, b) && !g.adjacent(c, d)) return true;
    }
  }
  return false;
}

// a - c -> d -> b with c, b not adjacent and a adjacent to d: a -> b.
bool rule4(const Pdag& g, NodeId a, NodeId b) {
  const int p = g.size();
  for (NodeId c = 0; c < p; ++c) {
    if (c == b || !g.has_undirected(a, c) || g.adjacent(c, b)) continue;
    for (NodeId d = 0; d < p; ++d) {
      if (d != a && g.has_directed(c, d) && g.has_directed(d, b) && g.adjacent(a, d)) return true;
    }
  }
  return false;
}

}  // namespace

int apply_orientation_rules(Pdag& g) { return apply_orientation_rules(g, {}); }

int apply_orientation_rules(Pdag& g, const std::vector<Edge>& frozen) {
  const int p = g.size();
  auto is_frozen = [&frozen](NodeId a, NodeId b) {
    return std::any_of(frozen.begin(), frozen.end(), [a, b](const Edge& e) {
      return (e.from == a && e.to == b) || (e.from == b && e.to == a);
    });
  };
  int oriented = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId a = 0; a < p; ++a) {
      for (NodeId b = 0; b < p; ++b) {
        if (a == b || !g.has_undirected(a, b) || is_frozen(a, b)) continue;
        if (rule1(g, a, b) || rule2(g, a, b) || rule3(g, a, b) || rule4(g, a, b)) {
          g.orient(a, b);
          ++oriented;
          changed = true;
        }
      }
    }
  }
  return oriented;
}

OrientResult orient(const Skeleton& skel, const SepSetTable& seps) {
  const int p = skel.size();
  OrientResult out{Pdag::from_skeleton(skel), {}};
  std::vector<char> wants(static_cast<std::size_t>(p) * p, 0);
  std::vector<Edge> conflicted;
  auto want = [&](NodeId u, NodeId v) -> char& { return wants[static_cast<std::size_t>(u) * p + v]; };

  for (NodeId i = 0; i < p; ++i) {
    for (NodeId j = i + 1; j < p; ++j) {
      if (skel.adjacent(i, j)) continue;
      if (!seps.contains(i, j)) {
        throw InvalidArgument("orient: missing separating set for non-adjacent pair " + std::to_string(i + 1) +
                              "," + std::to_string(j + 1));
      }
      const NodeSet& sep = seps.at(i, j);
      for (NodeId c = 0; c < p; ++c) {
        if (!skel.adjacent(i, c) || !skel.adjacent(j, c)) continue;
        if (std::binary_search(sep.begin(), sep.end(), c)) continue;
        want(i, c) = 1;
        want(j, c) = 1;
      }
    }
  }
  for (NodeId u = 0; u < p; ++u) {
    for (NodeId v = u + 1; v < p; ++v) {
      if (want(u, v) && want(v, u)) {
        out.diagnostics.push_back("conflicting collider orientations on edge " + std::to_string(u + 1) + "-" +
                                  std::to_string(v + 1) + "; left undirected");
        conflicted.push_back({u, v});
      } else if (want(u, v)) {
        out.graph.orient(u, v);
      } else if (want(v, u)) {
        out.graph.orient(v, u);
      }
    }
  }
  apply_orientation_rules(out.graph, conflicted);
  return out;
}

// ---------------------------------------------------------------- CI backends

void PcConfig::validate() const {
  switch (backend) {
    case CiBackend::gaussian:
      gaussian.validate();
      break;
    case CiBackend::hsic:
      hsic.validate();
      break;
    case CiBackend::oracle:
      if (!truth) throw ConfigError("oracle backend requires a true DAG");
      break;
  }
}

namespace {

// Resolvents are cached per sorted column set; the Gaussian kernel only
// depends on the set, not the column order.
class HsicBackend {
 public:
  HsicBackend(const Eigen::MatrixXd& data, const HsicConfig& cfg)
      : data_(standardize_columns(data)), cfg_(cfg) {
    if (cfg_.threshold == HsicThreshold::bootstrap_pooled) gamma_ = pooled_hsic_threshold(data, cfg_);
    if (cfg_.threshold == HsicThreshold::fixed) gamma_ = cfg_.gamma;
  }

  CiOutcome operator()(const CiQuery& q) {
    validate_query(q, data_.cols());
    if (cfg_.threshold == HsicThreshold::bootstrap_per_test && q.k.empty()) {
      return hsic_ci_test(data_.col(q.i), data_.col(q.j), Eigen::MatrixXd(data_.rows(), 0), cfg_);
    }
    NodeSet xk = q.k, yk = q.k;
    xk.push_back(q.i);
    yk.push_back(q.j);
    const auto& ryz = resolvent(make_node_set(yk));
    const auto& rz = resolvent(q.k);
    const double stat = hsic_from_resolvents(resolvent(make_node_set(xk)), ryz, rz);
    double gamma = gamma_;
    if (cfg_.threshold != HsicThreshold::fixed && !q.k.empty()) {
      const std::vector<Eigen::Index> cond(q.k.begin(), q.k.end());
      gamma = hsic_residual_bootstrap_threshold(data_.col(q.i), data_(Eigen::all, cond), ryz, rz, cfg_,
                                                query_seed(q));
    }
    return {stat, gamma, stat <= gamma};
  }

 private:
  const Resolvent<double>& resolvent(const NodeSet& columns) {
    auto it = cache_.find(columns);
    if (it != cache_.end()) return it->second;
    const std::vector<Eigen::Index> cols(columns.begin(), columns.end());
    const Eigen::MatrixXd block = data_(Eigen::all, cols);
    auto r = columns.empty() ? Resolvent<double>::zero(data_.rows()) : block_resolvent(block, cfg_);
    return cache_.emplace(columns, std::move(r)).first->second;
  }

  // Distinct, order-sensitive stream per query so replays are exact.
  std::uint64_t query_seed(const CiQuery& q) const {
    std::uint64_t h = SplitMix64::mix(cfg_.bootstrap.seed ^ 0x9E3779B97F4A7C15ULL);
    h = SplitMix64::mix(h ^ static_cast<std::uint64_t>(q.i));
    h = SplitMix64::mix(h ^ static_cast<std::uint64_t>(q.j));
    for (const NodeId v : q.k) h = SplitMix64::mix(h ^ static_cast<std::uint64_t>(v + 1));
    return h;
  }

  Eigen::MatrixXd data_;
  HsicConfig cfg_;
  double gamma_ = 0.0;
  std::map<NodeSet, Resolvent<double>> cache_;
};

}  // namespace

CiFunction make_ci_function(const DataMatrix& data, const PcConfig& cfg) {
  cfg.validate();
  switch (cfg.backend) {
    case CiBackend::gaussian: {
      auto cov = std::make_shared<const CovMatrix>(sample_covariance(data));
      const GaussianCiConfig gcfg = cfg.gaussian;
      return [cov, gcfg](const CiQuery& q) { return gaussian_ci_test(*cov, q, gcfg); };
    }
    case CiBackend::hsic: {
      detail::require(data.rows() >= 4, "HSIC backend: need at least 4 rows");
      auto backend = std::make_shared<HsicBackend>(data.values, cfg.hsic);
      return [backend](const CiQuery& q) { return (*backend)(q); };
    }
    case CiBackend::oracle: {
      if (cfg.truth->size() != data.cols()) {
        throw ConfigError("oracle backend: true DAG has " + std::to_string(cfg.truth->size()) +
                          " nodes but data has " + std::to_string(data.cols()) + " columns");
      }
      auto truth = std::make_shared<const Dag>(*cfg.truth);
      return [truth](const CiQuery& q) {
        const bool sep = d_separated(*truth, {q.i}, {q.j}, q.k);
        return CiOutcome{sep ? 0.0 : 1.0, 0.5, sep};
      };
    }
  }
  throw InvalidArgument("unknown CI backend");
}

PcResult run_pc(const DataMatrix& data, const PcConfig& cfg) {
  const CiFunction ci = make_ci_function(data, cfg);
  SkeletonResult skel = find_skeleton(ci, static_cast<int>(data.cols()), cfg.skeleton);
  OrientResult oriented = orient(skel.skeleton, skel.sepsets);
  return {std::move(oriented.graph), std::move(skel.sepsets), std::move(skel.decisions),
          std::move(oriented.diagnostics)};
}

PcResult run_population_pc(const Dag& g, const SkeletonOptions& opts) {
  const CiFunction ci = [&g](const CiQuery& q) {
    const bool sep = d_separated(g, {q.i}, {q.j}, q.k);
    return CiOutcome{sep ? 0.0 : 1.0, 0.5, sep};
  };
  SkeletonResult skel = find_skeleton(ci, g.size(), opts);
  OrientResult oriented = orient(skel.skeleton, skel.sepsets);
  return {std::move(oriented.graph), std::move(skel.sepsets), std::move(skel.decisions),
          std::move(oriented.diagnostics)};
}

std::string decision_log_csv(const std::vector<CiDecision>& decisions) {
  std::ostringstream os;
  os << "i,j,k,statistic,threshold,independent\n";
  char buf[64];
  for (const CiDecision& d : decisions) {
    os << d.query.i + 1 << ',' << d.query.j + 1 << ',';
    for (std::size_t a = 0; a < d.query.k.size(); ++a) os << (a ? " " : "") << d.query.k[a] + 1;
    std::snprintf(buf, sizeof buf, ",%.17g", d.outcome.statistic);
    os << buf;
    std::snprintf(buf, sizeof buf, ",%.17g", d.outcome.threshold);
    os << buf << ',' << (d.outcome.independent ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace tapc

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tapc/ci_tests.hpp"
#include "tapc/graph.hpp"
#include "tapc/hsic.hpp"

namespace tapc {

/// Separating sets S(i,j) = S(j,i), recorded for removed pairs only.
class SepSetTable {
 public:
  void set(NodeId i, NodeId j, NodeSet k);
  bool contains(NodeId i, NodeId j) const;
  /// Throws InvalidArgument when the pair has no entry.
  const NodeSet& at(NodeId i, NodeId j) const;
  std::size_t size() const noexcept { return table_.size(); }
  const std::map<std::pair<NodeId, NodeId>, NodeSet>& entries() const noexcept { return table_; }

 private:
  static std::pair<NodeId, NodeId> key(NodeId i, NodeId j) { return {std::min(i, j), std::max(i, j)}; }
  std::map<std::pair<NodeId, NodeId>, NodeSet> table_;
};

using CiFunction = std::function<CiOutcome(const CiQuery&)>;

struct CiDecision {
  CiQuery query;
  CiOutcome outcome;
};

enum class CiBackend { gaussian, hsic, oracle };

struct SkeletonOptions {
  /// Largest conditioning-set size tested; unset means p - 2.
  std::optional<int> max_conditioning;
  /// Node visit order for pair selection; empty means 0..p-1.
  std::vector<NodeId> order;
  /// Delete edges only at level boundaries (order-independent skeleton).
  bool stable = false;
};

struct PcConfig {
  CiBackend backend = CiBackend::gaussian;
  GaussianCiConfig gaussian;
  HsicConfig hsic;
  /// Required by the oracle backend; its node count must match the data.
  std::optional<Dag> truth;
  SkeletonOptions skeleton;

  void validate() const;
};

struct SkeletonResult {
  Skeleton skeleton;
  SepSetTable sepsets;
  std::vector<CiDecision> decisions;
  int levels = 0;  // number of levels l = 0, 1, ... visited
};

/// Level-wise adjacency search starting from the complete graph.
///
/// At level l every ordered adjacent pair (i,j) with |adj(i) \ {j}| >= l is
/// tested against the size-l subsets of adj(i) \ {j} in lexicographic order
/// until one accepts independence; the edge is then removed and the subset
/// stored in S(i,j). Stops once no adjacent pair has |adj(i) \ {j}| > l.
/// A CI failure is rethrown as DegenerateData naming the query.
SkeletonResult find_skeleton(const CiFunction& ci, int p, const SkeletonOptions& opts = {});

struct OrientResult {
  Pdag graph;
  std::vector<std::string> diagnostics;
};

/// Collider orientation i -> c <- j for non-adjacent i, j whenever c is not in
/// S(i,j), followed by the orientation-rule closure. An edge that two
/// colliders want in opposite directions stays undirected, the rules leave
/// it alone, and it is reported.
OrientResult orient(const Skeleton& skel, const SepSetTable& seps);

/// Applies the four orientation rules to undirected edges until none fires.
/// Existing arrows are never changed. Returns the number of edges oriented.
int apply_orientation_rules(Pdag& g);
/// As above, but edges listed in `frozen` are never oriented.
int apply_orientation_rules(Pdag& g, const std::vector<Edge>& frozen);

struct PcResult {
  Pdag graph;
  SepSetTable sepsets;
  std::vector<CiDecision> decisions;
  std::vector<std::string> diagnostics;
};

/// The CI decision function selected by cfg for the columns of `data`.
CiFunction make_ci_function(const DataMatrix& data, const PcConfig& cfg);

PcResult run_pc(const DataMatrix& data, const PcConfig& cfg);
inline Pdag pc(const DataMatrix& data, const PcConfig& cfg) { return run_pc(data, cfg).graph; }

/// PC with d-separation in g as the CI oracle.
PcResult run_population_pc(const Dag& g, const SkeletonOptions& opts = {});
inline Pdag population_pc(const Dag& g) { return run_population_pc(g).graph; }

/// CSV lines `i,j,k,statistic,threshold,independent` with 1-based labels and
/// k written as space-separated labels.
std::string decision_log_csv(const std::vector<CiDecision>& decisions);

}  // namespace tapc

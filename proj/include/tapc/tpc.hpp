#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tapc/ci_tests.hpp"
#include "tapc/graph.hpp"
#include "tapc/pc.hpp"

namespace tapc {

/// Sliding window: row t of the embedding stacks original rows
/// t*stride .. t*stride + tau - 1 (0-based).
struct WindowConfig {
  int tau = 2;
  int stride = 2;

  void validate() const;
  int unrolled_dim(int p) const noexcept { return p * tau; }
  /// floor((n - tau) / stride) + 1.
  Eigen::Index embedded_rows(Eigen::Index n) const;
};

/// Window embedding. Column p * t' + v holds variable v at in-window time t'.
DataMatrix unroll(const DataMatrix& data, const WindowConfig& w);

struct TpcResult {
  Pdag unrolled;
  RolledGraph rolled;
  std::vector<CiDecision> decisions;
  std::vector<std::string> diagnostics;
};

/// PC over the window-embedded series, then rolling onto the p variables.
/// An oracle backend's truth DAG lives on the p * tau unrolled nodes.
TpcResult tpc(const DataMatrix& data, const WindowConfig& w, const PcConfig& cfg);

/// Flips every directed unrolled edge that points backward in time.
/// Returns the number of edges flipped.
int reorient_forward_in_time(Pdag& g, int p);

struct TpcnsConfig {
  int window_length = 50;    // L, in embedded rows
  int num_subsamples = 50;
  double freq_cutoff = 0.4;  // keep edges with occurrence fraction >= cutoff
  PcConfig pc;
  WindowConfig window;
  std::uint64_t seed = 0;
  /// Optional extra pruning of the union graph: keep (edge, fraction) iff
  /// the hook returns true. Unset keeps every edge passing the cutoff.
  std::function<bool(const Edge&, double)> edge_filter;

  void validate() const;
};

struct TpcnsResult {
  RolledGraph rolled;
  /// Occurrence fraction in [0,1] for every ordered variable pair.
  std::map<Edge, double> edge_freq;
  std::vector<Eigen::Index> starts;  // first embedded row of each subsample
  std::vector<RolledGraph> subsample_graphs;
};

/// Subsampled time-aware PC: runs tpc on num_subsamples random windows of L
/// embedded rows (start drawn uniformly with replacement), re-orients
/// backward edges, rolls, and keeps edges whose occurrence fraction reaches
/// freq_cutoff.
TpcnsResult tpcns(const DataMatrix& data, const TpcnsConfig& cfg);

/// Union graph of the frequency map at a given cutoff.
RolledGraph threshold_edges(const std::map<Edge, double>& freq, int p, double cutoff);

/// `from,to,fraction` rows with 1-based labels.
std::string edge_frequency_csv(const std::map<Edge, double>& freq);

}  // namespace tapc

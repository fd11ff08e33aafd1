#include "tapc/tpc.hpp"

#include <cstdio>
#include <sstream>

#include "tapc/error.hpp"
#include "tapc/rng.hpp"

namespace tapc {

void WindowConfig::validate() const {
  detail::require(tau >= 1, "window: tau must be >= 1");
  detail::require(stride >= 1, "window: stride must be >= 1");
}

Eigen::Index WindowConfig::embedded_rows(Eigen::Index n) const {
  validate();
  if (n < tau) {
    throw InvalidArgument("unroll: series length " + std::to_string(n) + " shorter than tau = " +
                          std::to_string(tau));
  }
  return (n - tau) / stride + 1;
}

DataMatrix unroll(const DataMatrix& data, const WindowConfig& w) {
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.cols();
  const Eigen::Index rows = w.embedded_rows(n);
  Eigen::MatrixXd out(rows, p * w.tau);
  for (Eigen::Index t = 0; t < rows; ++t) {
    for (int lag = 0; lag < w.tau; ++lag) {
      out.block(t, p * lag, 1, p) = data.values.row(t * w.stride + lag);
    }
  }
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p * w.tau));
  for (int lag = 0; lag < w.tau; ++lag)
    for (Eigen::Index v = 0; v < p; ++v) names.push_back(data.name(v) + "@" + std::to_string(lag + 1));
  return {std::move(out), std::move(names)};
}

TpcResult tpc(const DataMatrix& data, const WindowConfig& w, const PcConfig& cfg) {
  const int p = static_cast<int>(data.cols());
  const DataMatrix embedded = unroll(data, w);
  PcResult fit = run_pc(embedded, cfg);
  RolledGraph rolled = roll(fit.graph, p, w.tau);
  return {std::move(fit.graph), std::move(rolled), std::move(fit.decisions), std::move(fit.diagnostics)};
}

int reorient_forward_in_time(Pdag& g, int p) {
  int flipped = 0;
  for (const Edge& e : g.directed_edges()) {
    const int t_from = UnrolledNode::from_flat(e.from, p).time;
    const int t_to = UnrolledNode::from_flat(e.to, p).time;
    if (t_from > t_to) {
      g.orient(e.to, e.from);
      ++flipped;
    }
  }
  return flipped;
}

void TpcnsConfig::validate() const {
  detail::require(window_length >= 2, "tpcns: window length L must be >= 2");
  detail::require(num_subsamples >= 1, "tpcns: need at least one subsample");
  detail::require(freq_cutoff >= 0.0 && freq_cutoff <= 1.0, "tpcns: freq_cutoff must lie in [0,1]");
  window.validate();
}

RolledGraph threshold_edges(const std::map<Edge, double>& freq, int p, double cutoff) {
  RolledGraph out(p);
  for (const auto& [edge, fraction] : freq) {
    if (fraction > 0.0 && fraction >= cutoff) out.add_edge(edge.from, edge.to);
  }
  return out;
}

TpcnsResult tpcns(const DataMatrix& data, const TpcnsConfig& cfg) {
  cfg.validate();
  const int p = static_cast<int>(data.cols());
  const DataMatrix embedded = unroll(data, cfg.window);
  const Eigen::Index rows = embedded.rows();
  if (cfg.window_length > rows) {
    throw InvalidArgument("tpcns: window length L = " + std::to_string(cfg.window_length) +
                          " exceeds the " + std::to_string(rows) + " embedded rows");
  }

  TpcnsResult out;
  SplitMix64 rng(cfg.seed);
  const auto span = static_cast<std::uint64_t>(rows - cfg.window_length + 1);
  for (int s = 0; s < cfg.num_subsamples; ++s) out.starts.push_back(static_cast<Eigen::Index>(rng.below(span)));

  std::vector<int> counts(static_cast<std::size_t>(p) * p, 0);
  for (const Eigen::Index start : out.starts) {
    DataMatrix window{embedded.values.middleRows(start, cfg.window_length), embedded.names};
    PcResult fit = run_pc(window, cfg.pc);
    reorient_forward_in_time(fit.graph, p);
    RolledGraph rolled = roll(fit.graph, p, cfg.window.tau);
    for (const Edge& e : rolled.edges()) ++counts[static_cast<std::size_t>(e.from) * p + e.to];
    out.subsample_graphs.push_back(std::move(rolled));
  }

  for (NodeId u = 0; u < p; ++u) {
    for (NodeId v = 0; v < p; ++v) {
      out.edge_freq[{u, v}] =
          static_cast<double>(counts[static_cast<std::size_t>(u) * p + v]) / cfg.num_subsamples;
    }
  }
  out.rolled = threshold_edges(out.edge_freq, p, cfg.freq_cutoff);
  if (cfg.edge_filter) {
    for (const Edge& e : out.rolled.edges()) {
      if (!cfg.edge_filter(e, out.edge_freq.at(e))) out.rolled.remove_edge(e.from, e.to);
    }
  }
  return out;
}

std::string edge_frequency_csv(const std::map<Edge, double>& freq) {
  std::ostringstream os;
  os << "from,to,fraction\n";
  char buf[32];
  for (const auto& [edge, fraction] : freq) {
    std::snprintf(buf, sizeof buf, "%.6f", fraction);
    os << edge.from + 1 << ',' << edge.to + 1 << ',' << buf << '\n';
  }
  return os.str();
}

}  // namespace tapc

#include "tapc/evaluation.hpp"

#include <cstdio>
#include <sstream>

#include "tapc/error.hpp"

namespace tapc {

EdgeConfusion& EdgeConfusion::operator+=(const EdgeConfusion& o) noexcept {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

EdgeConfusion confusion(const RolledGraph& est, const RolledGraph& truth, bool include_self_loops) {
  if (est.size() != truth.size()) {
    throw InvalidArgument("confusion: estimate has " + std::to_string(est.size()) +
                          " variables, truth has " + std::to_string(truth.size()));
  }
  EdgeConfusion c;
  const int p = truth.size();
  for (NodeId u = 0; u < p; ++u) {
    for (NodeId v = 0; v < p; ++v) {
      if (u == v && !include_self_loops) continue;
      const bool e = est.has_edge(u, v);
      const bool t = truth.has_edge(u, v);
      if (e && t) ++c.tp;
      else if (e) ++c.fp;
      else if (t) ++c.fn;
      else ++c.tn;
    }
  }
  return c;
}

std::string_view tpr_mode_name(TprMode m) {
  return m == TprMode::paper_formula ? "paper-formula" : "condition-positives";
}

TprMode parse_tpr_mode(std::string_view name) {
  if (name == "condition-positives") return TprMode::condition_positives;
  if (name == "paper-formula") return TprMode::paper_formula;
  throw ConfigError("unknown tpr mode '" + std::string(name) +
                    "' (expected condition-positives or paper-formula)");
}

MetricsReport metrics(const EdgeConfusion& c, TprMode mode) {
  MetricsReport r;
  r.mode = mode;
  const long tpr_den = mode == TprMode::paper_formula ? c.tp + c.fp : c.tp + c.fn;
  if (tpr_den > 0) r.tpr = 100.0 * static_cast<double>(c.tp) / static_cast<double>(tpr_den);
  if (c.fp + c.tn > 0) {
    r.ifpr = 100.0 * (1.0 - static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn));
    r.fpr = 100.0 - *r.ifpr;
  }
  if (r.tpr && r.fpr) r.cs = *r.tpr - *r.fpr;
  return r;
}

EdgeConfusion aggregate(const std::vector<EdgeConfusion>& runs) {
  detail::require(!runs.empty(), "aggregate: no runs to pool");
  EdgeConfusion sum;
  for (const auto& c : runs) sum += c;
  return sum;
}

std::map<Edge, double> edge_frequency(const std::vector<RolledGraph>& runs, int p) {
  detail::require(!runs.empty(), "edge_frequency: no runs");
  std::map<Edge, double> out;
  for (NodeId u = 0; u < p; ++u)
    for (NodeId v = 0; v < p; ++v) out[{u, v}] = 0.0;
  for (const auto& g : runs) {
    if (g.size() != p) {
      throw InvalidArgument("edge_frequency: run over " + std::to_string(g.size()) +
                            " variables, expected " + std::to_string(p));
    }
    for (const Edge& e : g.edges()) out[e] += 1.0;
  }
  for (auto& [edge, count] : out) count = 100.0 * count / static_cast<double>(runs.size());
  return out;
}

namespace {

std::string fmt(std::optional<double> v, const char* spec = "%.2f") {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, *v);
  return buf;
}

}  // namespace

std::string metrics_csv_header() { return "method,paradigm,eta,alpha,tpr,ifpr,cs,tpr_mode"; }

std::string metrics_csv_line(const MetricsRow& row) {
  std::ostringstream os;
  os << row.method << ',' << row.paradigm << ',' << fmt(row.eta, "%g") << ',' << fmt(row.alpha, "%g") << ','
     << fmt(row.report.tpr) << ',' << fmt(row.report.ifpr) << ',' << fmt(row.report.cs) << ','
     << tpr_mode_name(row.report.mode);
  return os.str();
}

std::string frequency_csv(const std::map<Edge, double>& percent) {
  std::ostringstream os;
  os << "from,to,percent\n";
  for (const auto& [edge, pct] : percent) os << edge.from + 1 << ',' << edge.to + 1 << ',' << fmt(pct) << '\n';
  return os.str();
}

}  // namespace tapc

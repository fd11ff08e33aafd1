#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tapc/graph.hpp"

namespace tapc {

struct EdgeConfusion {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long total() const noexcept { return tp + fp + tn + fn; }
  EdgeConfusion& operator+=(const EdgeConfusion& o) noexcept;
  bool operator==(const EdgeConfusion&) const = default;
};

/// Directed-edge counts over the p^2 ordered pairs (p^2 - p without
/// self-loops). Throws InvalidArgument on a p mismatch.
EdgeConfusion confusion(const RolledGraph& est, const RolledGraph& truth, bool include_self_loops = true);

enum class TprMode {
  condition_positives,  // TP / (TP + FN)
  paper_formula,        // TP / (TP + FP)
};

std::string_view tpr_mode_name(TprMode m);
TprMode parse_tpr_mode(std::string_view name);

/// Percentages. A metric is empty when its denominator is zero; cs is
/// defined only when both tpr and fpr are.
struct MetricsReport {
  std::optional<double> tpr;
  std::optional<double> ifpr;
  std::optional<double> fpr;
  std::optional<double> cs;
  TprMode mode = TprMode::condition_positives;
};

MetricsReport metrics(const EdgeConfusion& c, TprMode mode = TprMode::condition_positives);

/// Componentwise sum (micro-averaging). Throws on an empty list.
EdgeConfusion aggregate(const std::vector<EdgeConfusion>& runs);

/// Percentage of runs containing each ordered pair; every pair appears.
std::map<Edge, double> edge_frequency(const std::vector<RolledGraph>& runs, int p);

struct MetricsRow {
  std::string method;
  std::string paradigm;
  double eta = 1.0;
  double alpha = 0.05;
  MetricsReport report;
};

/// `method,paradigm,eta,alpha,tpr,ifpr,cs,tpr_mode`; undefined metrics are
/// written as `NA`, defined ones with one decimal more than printed tables.
std::string metrics_csv_header();
std::string metrics_csv_line(const MetricsRow& row);

/// Edge-detection table: `from,to,percent` with 1-based labels.
std::string frequency_csv(const std::map<Edge, double>& percent);

}  // namespace tapc

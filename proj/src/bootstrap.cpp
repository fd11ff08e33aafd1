#include "tapc/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "tapc/error.hpp"

namespace tapc {

void BootstrapConfig::validate() const {
  detail::require(num_replicates >= 1, "bootstrap: num_replicates must be >= 1");
  detail::require(expected_block_length > 1.0, "bootstrap: expected_block_length must be > 1");
  detail::require(quantile >= 0.0 && quantile < 1.0, "bootstrap: quantile must lie in [0,1)");
}

std::vector<Eigen::Index> stationary_bootstrap_indices(Eigen::Index n, double expected_block_length,
                                                       SplitMix64& rng) {
  detail::require(n >= 1, "stationary bootstrap: empty series");
  detail::require(expected_block_length > 1.0, "stationary bootstrap: invalid block length");
  const double restart = 1.0 / expected_block_length;
  std::vector<Eigen::Index> out(static_cast<std::size_t>(n));
  const auto un = static_cast<std::uint64_t>(n);
  Eigen::Index current = static_cast<Eigen::Index>(rng.below(un));
  for (Eigen::Index t = 0; t < n; ++t) {
    if (t > 0) {
      current = rng.bernoulli(restart) ? static_cast<Eigen::Index>(rng.below(un)) : (current + 1) % n;
    }
    out[static_cast<std::size_t>(t)] = current;
  }
  return out;
}

double empirical_quantile(std::vector<double> values, double quantile) {
  detail::require(!values.empty(), "empirical_quantile: no values");
  detail::require(quantile >= 0.0 && quantile <= 1.0, "empirical_quantile: quantile must lie in [0,1]");
  const auto count = static_cast<double>(values.size());
  auto rank = static_cast<std::ptrdiff_t>(std::ceil(quantile * count)) - 1;
  rank = std::clamp<std::ptrdiff_t>(rank, 0, static_cast<std::ptrdiff_t>(values.size()) - 1);
  std::nth_element(values.begin(), values.begin() + rank, values.end());
  return values[static_cast<std::size_t>(rank)];
}

double stationary_bootstrap_threshold(const Eigen::MatrixXd& data, const CiQuery& q, const CiStatistic& stat,
                                      const BootstrapConfig& cfg) {
  return stationary_bootstrap_threshold(data, std::span<const CiQuery>(&q, 1), stat, cfg);
}

double stationary_bootstrap_threshold(const Eigen::MatrixXd& data, std::span<const CiQuery> queries,
                                      const CiStatistic& stat, const BootstrapConfig& cfg) {
  cfg.validate();
  detail::require(!queries.empty(), "bootstrap: no queries");
  const Eigen::Index n = data.rows();
  if (static_cast<double>(n) < 10.0 * cfg.expected_block_length) {
    throw InvalidArgument("bootstrap: need n >= 10 * expected_block_length");
  }
  for (const CiQuery& q : queries) validate_query(q, data.cols());

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(cfg.num_replicates));
  Eigen::MatrixXd resampled(n, data.cols());
  for (int b = 0; b < cfg.num_replicates; ++b) {
    const CiQuery& q = queries[static_cast<std::size_t>(b) % queries.size()];
    SplitMix64 rng = SplitMix64::stream(cfg.seed, static_cast<std::uint64_t>(b));
    const auto lead = stationary_bootstrap_indices(n, cfg.expected_block_length, rng);
    const auto rest = stationary_bootstrap_indices(n, cfg.expected_block_length, rng);
    for (Eigen::Index t = 0; t < n; ++t) {
      resampled.row(t) = data.row(rest[static_cast<std::size_t>(t)]);
      resampled(t, q.i) = data(lead[static_cast<std::size_t>(t)], q.i);
    }
    values.push_back(stat(resampled, q));
  }
  return empirical_quantile(std::move(values), cfg.quantile);
}

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& data) {
  Eigen::MatrixXd out = data.rowwise() - data.colwise().mean();
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double sd = std::sqrt(out.col(c).squaredNorm() / static_cast<double>(out.rows()));
    if (sd > 1e-12 * std::max(1.0, data.col(c).cwiseAbs().maxCoeff())) {
      out.col(c) /= sd;
    } else {
      out.col(c).setZero();
    }
  }
  return out;
}

double pooled_hsic_threshold(const Eigen::MatrixXd& data, const HsicConfig& cfg) {
  const Eigen::MatrixXd scaled = standardize_columns(data);
  std::vector<CiQuery> pairs;
  for (NodeId i = 0; i < scaled.cols(); ++i)
    for (NodeId j = i + 1; j < scaled.cols(); ++j) pairs.push_back({i, j, {}});
  detail::require(!pairs.empty(), "pooled_hsic_threshold: need at least two columns");
  const CiStatistic stat = [&cfg](const Eigen::MatrixXd& d, const CiQuery& q) {
    return hsic_conditional(d.col(q.i), d.col(q.j), Eigen::MatrixXd(d.rows(), 0), cfg);
  };
  return stationary_bootstrap_threshold(scaled, pairs, stat, cfg.bootstrap);
}

}  // namespace tapc

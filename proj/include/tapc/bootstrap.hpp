#pragma once

#include <Eigen/Core>
#include <functional>
#include <span>
#include <vector>

#include "tapc/ci_tests.hpp"
#include "tapc/hsic.hpp"
#include "tapc/rng.hpp"

namespace tapc {

/// Statistic evaluated on a (resampled) data matrix for one query.
using CiStatistic = std::function<double(const Eigen::MatrixXd& data, const CiQuery& q)>;

/// n row indices of a stationary bootstrap sample: blocks start uniformly,
/// lengths are geometric with the given mean, indexing wraps around.
std::vector<Eigen::Index> stationary_bootstrap_indices(Eigen::Index n, double expected_block_length,
                                                       SplitMix64& rng);

/// Null quantile of `stat` for query q by the stationary bootstrap.
///
/// Each replicate resamples the column of q.i with one stationary-bootstrap
/// index stream and all other columns with an independent stream, so the
/// link between X_i and the remaining variables is broken while the serial
/// dependence of every series is kept. Returns the cfg.quantile order
/// statistic of the replicate values (the minimum for quantile 0).
double stationary_bootstrap_threshold(const Eigen::MatrixXd& data, const CiQuery& q, const CiStatistic& stat,
                                      const BootstrapConfig& cfg);

/// As above, replicate b using queries[b % queries.size()]; the quantile is
/// taken over the pooled replicate values.
double stationary_bootstrap_threshold(const Eigen::MatrixXd& data, std::span<const CiQuery> queries,
                                      const CiStatistic& stat, const BootstrapConfig& cfg);

/// Order statistic used by the bootstrap thresholds.
double empirical_quantile(std::vector<double> values, double quantile);

/// z-scores every column; zero-variance columns become zero.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& data);

/// One HSIC threshold for a whole data set: pooled stationary-bootstrap null
/// over every unconditional pair of columns. Data are standardized first.
double pooled_hsic_threshold(const Eigen::MatrixXd& data, const HsicConfig& cfg);

}  // namespace tapc

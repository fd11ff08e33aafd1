#include "tapc/hsic.hpp"

#include <Eigen/Eigenvalues>
#include <limits>

#include "tapc/bootstrap.hpp"
#include "tapc/rng.hpp"

namespace tapc {

void HsicConfig::validate() const {
  detail::require(eps_exponent > 0.0 && eps_exponent < 1.0 / 3.0,
                  "HSIC: eps_exponent must lie in (0, 1/3)");
  if (bandwidth.kind == BandwidthRule::Kind::fixed) {
    detail::require(bandwidth.value > 0.0, "HSIC: fixed bandwidth must be positive");
  }
  detail::require(low_rank_tolerance > 0.0, "HSIC: low_rank_tolerance must be positive");
  if (threshold == HsicThreshold::fixed) {
    detail::require(gamma >= 0.0, "HSIC: gamma must be non-negative");
  } else {
    bootstrap.validate();
  }
}

Eigen::VectorXd kernel_smooth(const Eigen::VectorXd& x, const Eigen::MatrixXd& z, const HsicConfig& cfg) {
  const Eigen::Index n = x.rows();
  detail::require(z.rows() == n, "kernel_smooth: row counts differ");
  const double mean = x.mean();
  const Eigen::VectorXd xc = x.array() - mean;
  if (z.cols() == 0) return Eigen::VectorXd::Constant(n, mean);
  const double h = detail::bandwidth_for(z, cfg.bandwidth, true);
  const Eigen::MatrixXd f = detail::centered_kernel_factor(z, h, cfg.low_rank_tolerance);
  if (f.cols() == 0) return Eigen::VectorXd::Constant(n, mean);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f.transpose() * f);
  const Eigen::VectorXd s2 = eig.eigenvalues().cwiseMax(0.0);
  const Eigen::VectorXd proj = eig.eigenvectors().transpose() * (f.transpose() * xc);
  const auto dn = static_cast<double>(n);
  double best_score = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best;
  for (const double scale : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    const double lambda = scale * dn;
    const Eigen::VectorXd coef = proj.array() / (s2.array() + lambda);
    const Eigen::VectorXd fit = f * (eig.eigenvectors() * coef);
    const double dof = (s2.array() / (s2.array() + lambda)).sum();
    if (dof >= dn - 1.0) continue;
    const double score = dn * (xc - fit).squaredNorm() / ((dn - dof) * (dn - dof));
    if (score < best_score) {
      best_score = score;
      best = fit;
    }
  }
  if (best.size() == 0) return Eigen::VectorXd::Constant(n, mean);
  return best.array() + mean;
}

double hsic_residual_bootstrap_threshold(const Eigen::VectorXd& x, const Eigen::MatrixXd& z,
                                         const Resolvent<double>& ryz, const Resolvent<double>& rz,
                                         const HsicConfig& cfg, std::uint64_t seed) {
  const BootstrapConfig& b = cfg.bootstrap;
  b.validate();
  const Eigen::Index n = x.rows();
  if (static_cast<double>(n) < 10.0 * b.expected_block_length) {
    throw InvalidArgument("bootstrap: need n >= 10 * expected_block_length");
  }
  const Eigen::VectorXd fit = kernel_smooth(x, z, cfg);
  const Eigen::VectorXd residual = x - fit;
  Eigen::MatrixXd xz(n, 1 + z.cols());
  xz.rightCols(z.cols()) = z;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(b.num_replicates));
  for (int r = 0; r < b.num_replicates; ++r) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(r));
    const auto idx = stationary_bootstrap_indices(n, b.expected_block_length, rng);
    for (Eigen::Index t = 0; t < n; ++t) xz(t, 0) = fit(t) + residual(idx[static_cast<std::size_t>(t)]);
    values.push_back(hsic_from_resolvents(block_resolvent(xz, cfg), ryz, rz));
  }
  return empirical_quantile(std::move(values), b.quantile);
}

CiOutcome hsic_ci_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::MatrixXd& z_in,
                       const HsicConfig& cfg) {
  cfg.validate();
  // A constant conditioning column carries no information; dropping it keeps
  // the decision identical to the query without it.
  std::vector<Eigen::Index> informative;
  for (Eigen::Index c = 0; c < z_in.cols(); ++c) {
    if (z_in.col(c).maxCoeff() > z_in.col(c).minCoeff()) informative.push_back(c);
  }
  const Eigen::MatrixXd z = z_in(Eigen::all, informative);
  const double statistic = hsic_conditional(x, y, z, cfg);
  double threshold = cfg.gamma;
  if (cfg.threshold != HsicThreshold::fixed && z.cols() > 0) {
    Eigen::MatrixXd yz(y.rows(), 1 + z.cols());
    yz << y, z;
    threshold = hsic_residual_bootstrap_threshold(x, z, block_resolvent(yz, cfg), block_resolvent(z, cfg), cfg,
                                                  cfg.bootstrap.seed);
  } else if (cfg.threshold != HsicThreshold::fixed) {
    Eigen::MatrixXd joint(x.rows(), 2);
    joint << x, y;
    const CiStatistic stat = [&cfg](const Eigen::MatrixXd& d, const CiQuery&) {
      return hsic_conditional(d.col(0), d.col(1), Eigen::MatrixXd(d.rows(), 0), cfg);
    };
    threshold = stationary_bootstrap_threshold(joint, CiQuery{0, 1, {}}, stat, cfg.bootstrap);
  }
  return {statistic, threshold, statistic <= threshold};
}

}  // namespace tapc

#pragma once

// Kernel conditional-dependence statistic built from centered Gram matrices
// and their regularized resolvents R = G (G + n eps I)^{-1}.

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tapc/ci_tests.hpp"
#include "tapc/error.hpp"

namespace tapc {

struct BandwidthRule {
  enum class Kind { median_heuristic, fixed };
  Kind kind = Kind::median_heuristic;
  double value = 1.0;

  static BandwidthRule median() { return {}; }
  static BandwidthRule fixed(double h) { return {Kind::fixed, h}; }
};

struct BootstrapConfig {
  int num_replicates = 200;
  double expected_block_length = 5.0;
  double quantile = 0.95;
  std::uint64_t seed = 0;

  void validate() const;
};

/// How the HSIC threshold is obtained.
///  - fixed: `gamma` as given.
///  - bootstrap_per_test: stationary-bootstrap null quantile for every query.
///  - bootstrap_pooled: one null quantile per data set, pooled over all
///    unconditional variable pairs, then used as a fixed gamma.
enum class HsicThreshold { fixed, bootstrap_per_test, bootstrap_pooled };

/// exact forms n x n resolvents; low_rank uses a pivoted incomplete Cholesky
/// factor of each kernel matrix and evaluates the traces in factor space.
enum class HsicSolver { low_rank, exact };

struct HsicConfig {
  BandwidthRule bandwidth = BandwidthRule::median();
  double eps_exponent = 0.25;  // eps_n = n^{-eps_exponent}
  HsicThreshold threshold = HsicThreshold::bootstrap_per_test;
  double gamma = 0.01;
  BootstrapConfig bootstrap;
  HsicSolver solver = HsicSolver::low_rank;
  /// Incomplete Cholesky stops once the residual kernel trace is below
  /// low_rank_tolerance * n.
  double low_rank_tolerance = 1e-7;

  void validate() const;
};

namespace detail {

template <typename Derived>
typename Derived::Scalar median_pairwise_distance(const Eigen::MatrixBase<Derived>& samples) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = samples.rows();
  std::vector<Scalar> dist;
  dist.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) dist.push_back((samples.row(a) - samples.row(b)).norm());
  if (dist.empty()) return Scalar(0);
  // Lower median keeps the value an actual pairwise distance.
  const auto mid = dist.begin() + static_cast<std::ptrdiff_t>((dist.size() - 1) / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  return *mid;
}

/// Kernel bandwidth for a block. With `zero_spread_guard`, identical points
/// under the median rule get h = 1 (their centered Gram matrix is zero for
/// any h); otherwise they raise "zero bandwidth".
template <typename Derived>
typename Derived::Scalar bandwidth_for(const Eigen::MatrixBase<Derived>& samples, const BandwidthRule& rule,
                                       bool zero_spread_guard) {
  using Scalar = typename Derived::Scalar;
  if (rule.kind == BandwidthRule::Kind::fixed) {
    if (!(rule.value > 0.0)) throw DegenerateData("zero bandwidth: fixed bandwidth must be positive");
    return static_cast<Scalar>(rule.value);
  }
  const Scalar h = median_pairwise_distance(samples);
  if (h > Scalar(0)) return h;
  if (zero_spread_guard) return Scalar(1);
  throw DegenerateData("zero bandwidth: all points identical under the median heuristic");
}

template <typename Derived>
MatrixX<typename Derived::Scalar> gaussian_kernel(const Eigen::MatrixBase<Derived>& samples,
                                                  typename Derived::Scalar h) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = samples.rows();
  const Scalar scale = Scalar(-0.5) / (h * h);
  MatrixX<Scalar> k(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    k(a, a) = Scalar(1);
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const Scalar v = std::exp(scale * (samples.row(a) - samples.row(b)).squaredNorm());
      k(a, b) = v;
      k(b, a) = v;
    }
  }
  return k;
}

/// Double centering H K H.
template <typename Scalar>
MatrixX<Scalar> double_center(const MatrixX<Scalar>& k) {
  const VectorX<Scalar> row_mean = k.rowwise().mean();
  const VectorX<Scalar> col_mean = k.colwise().mean().transpose();
  const Scalar grand = k.mean();
  MatrixX<Scalar> g = k;
  g.colwise() -= row_mean;
  g.rowwise() -= col_mean.transpose();
  g.array() += grand;
  return ((g + g.transpose()) / Scalar(2)).eval();
}

/// Column-centered pivoted incomplete Cholesky factor F with F F^T ~ H K H.
template <typename Derived>
MatrixX<typename Derived::Scalar> centered_kernel_factor(const Eigen::MatrixBase<Derived>& samples,
                                                         typename Derived::Scalar h, double tolerance) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = samples.rows();
  const Scalar scale = Scalar(-0.5) / (h * h);
  VectorX<Scalar> residual = VectorX<Scalar>::Ones(n);
  MatrixX<Scalar> factor(n, std::min<Eigen::Index>(n, 32));
  Eigen::Index rank = 0;
  const Scalar stop = static_cast<Scalar>(tolerance) * static_cast<Scalar>(n);
  while (rank < n && residual.sum() > stop) {
    Eigen::Index pivot = 0;
    const Scalar pivot_value = residual.maxCoeff(&pivot);
    if (!(pivot_value > Scalar(0))) break;
    if (rank == factor.cols()) factor.conservativeResize(Eigen::NoChange, std::min<Eigen::Index>(n, 2 * rank));
    VectorX<Scalar> column(n);
    for (Eigen::Index a = 0; a < n; ++a) {
      column(a) = std::exp(scale * (samples.row(a) - samples.row(pivot)).squaredNorm());
    }
    if (rank > 0) column.noalias() -= factor.leftCols(rank) * factor.row(pivot).head(rank).transpose();
    column /= std::sqrt(pivot_value);
    factor.col(rank) = column;
    residual -= column.cwiseAbs2();
    residual = residual.cwiseMax(Scalar(0));
    residual(pivot) = Scalar(0);
    ++rank;
  }
  MatrixX<Scalar> out = factor.leftCols(rank);
  out.rowwise() -= out.colwise().mean();
  return out;
}

}  // namespace detail

/// Centered Gram matrix of a Gaussian RBF kernel, k(x,y) = exp(-|x-y|^2 / (2h^2)).
/// Rows of `samples` are observations.
template <typename Derived>
MatrixX<typename Derived::Scalar> centered_gram(const Eigen::MatrixBase<Derived>& samples,
                                                const BandwidthRule& rule = BandwidthRule::median()) {
  detail::require(samples.rows() >= 2, "centered_gram: need at least 2 samples");
  const auto h = detail::bandwidth_for(samples, rule, false);
  return detail::double_center(detail::gaussian_kernel(samples, h));
}

/// Regularized resolvent R = G (G + c I)^{-1} of one block, stored either as
/// a dense symmetric matrix or as a factor U with R = U U^T.
template <typename Scalar>
class Resolvent {
 public:
  static Resolvent zero(Eigen::Index n) {
    Resolvent r;
    r.low_rank_ = true;
    r.u_ = MatrixX<Scalar>::Zero(n, 0);
    return r;
  }

  static Resolvent from_gram(const MatrixX<Scalar>& gram, Scalar reg) {
    MatrixX<Scalar> shifted = gram;
    shifted.diagonal().array() += reg;
    const Eigen::LLT<MatrixX<Scalar>> llt(shifted);
    if (llt.info() != Eigen::Success) throw DegenerateData("resolvent: regularized Gram matrix not positive definite");
    MatrixX<Scalar> r = llt.solve(gram);
    Resolvent out;
    out.low_rank_ = false;
    out.full_ = (r + r.transpose()) / Scalar(2);
    return out;
  }

  /// From F with G = F F^T: R = F (F^T F + c I)^{-1} F^T = U U^T, U = F C^{-T}.
  static Resolvent from_factor(const MatrixX<Scalar>& factor, Scalar reg) {
    Resolvent out;
    out.low_rank_ = true;
    if (factor.cols() == 0) {
      out.u_ = factor;
      return out;
    }
    MatrixX<Scalar> inner = factor.transpose() * factor;
    inner.diagonal().array() += reg;
    const Eigen::LLT<MatrixX<Scalar>> llt(inner);
    if (llt.info() != Eigen::Success) throw DegenerateData("resolvent: regularized factor system not positive definite");
    // U^T = C^{-1} F^T with inner = C C^T.
    out.u_ = llt.matrixL().solve(factor.transpose()).transpose();
    return out;
  }

  bool low_rank() const noexcept { return low_rank_; }
  const MatrixX<Scalar>& factor() const noexcept { return u_; }
  const MatrixX<Scalar>& dense() const noexcept { return full_; }
  Eigen::Index rows() const noexcept { return low_rank_ ? u_.rows() : full_.rows(); }

  MatrixX<Scalar> to_dense() const { return low_rank_ ? MatrixX<Scalar>(u_ * u_.transpose()) : full_; }

 private:
  bool low_rank_ = true;
  MatrixX<Scalar> u_;
  MatrixX<Scalar> full_;
};

/// Resolvent of the block `samples` under `cfg` (bandwidth, eps_n, solver).
template <typename Derived>
Resolvent<typename Derived::Scalar> block_resolvent(const Eigen::MatrixBase<Derived>& samples,
                                                    const HsicConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = samples.rows();
  if (samples.cols() == 0) return Resolvent<Scalar>::zero(n);
  const Scalar h = detail::bandwidth_for(samples, cfg.bandwidth, true);
  const Scalar reg = static_cast<Scalar>(n) * static_cast<Scalar>(std::pow(static_cast<double>(n), -cfg.eps_exponent));
  if (cfg.solver == HsicSolver::exact) {
    return Resolvent<Scalar>::from_gram(detail::double_center(detail::gaussian_kernel(samples, h)), reg);
  }
  return Resolvent<Scalar>::from_factor(detail::centered_kernel_factor(samples, h, cfg.low_rank_tolerance), reg);
}

/// Tr[R_Y R_X - 2 R_Y R_X R_Z + R_Y R_Z R_X R_Z] for resolvents of the
/// augmented blocks (X,Z), (Y,Z) and of Z. All three must use one storage.
template <typename Scalar>
Scalar hsic_from_resolvents(const Resolvent<Scalar>& rx, const Resolvent<Scalar>& ry, const Resolvent<Scalar>& rz) {
  detail::require(rx.rows() == ry.rows() && ry.rows() == rz.rows(), "hsic: resolvent sizes differ");
  if (rx.low_rank() && ry.low_rank() && rz.low_rank()) {
    const MatrixX<Scalar>& ux = rx.factor();
    const MatrixX<Scalar>& uy = ry.factor();
    const MatrixX<Scalar>& uz = rz.factor();
    const MatrixX<Scalar> a = uy.transpose() * ux;
    if (uz.cols() == 0) return a.squaredNorm();
    const MatrixX<Scalar> b = ux.transpose() * uz;
    const MatrixX<Scalar> c = uz.transpose() * uy;
    const MatrixX<Scalar> bc = b * c;
    // Tr[C A B] = Tr[A (B C)].
    const Scalar cross = (a.transpose().array() * bc.array()).sum();
    return a.squaredNorm() - Scalar(2) * cross + bc.squaredNorm();
  }
  const MatrixX<Scalar> x = rx.to_dense();
  const MatrixX<Scalar> y = ry.to_dense();
  const MatrixX<Scalar> z = rz.to_dense();
  const Scalar first = (y.array() * x.array()).sum();  // symmetric: Tr[YX] = sum(Y .* X)
  if (z.cols() == 0 || z.isZero()) return first;
  const MatrixX<Scalar> xz = x * z;
  const Scalar second = (y.array() * xz.transpose().array()).sum();
  const MatrixX<Scalar> zxz = z * xz;
  const Scalar third = (y.array() * zxz.transpose().array()).sum();
  return first - Scalar(2) * second + third;
}

/// Conditional-dependence statistic of x and y given the columns of z
/// (z may have zero columns). Uses augmented blocks (x,z) and (y,z).
template <typename DX, typename DY, typename DZ>
typename DX::Scalar hsic_conditional(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
                                     const Eigen::MatrixBase<DZ>& z, const HsicConfig& cfg) {
  using Scalar = typename DX::Scalar;
  const Eigen::Index n = x.rows();
  detail::require(n >= 4, "hsic_conditional: need at least 4 samples");
  detail::require(y.rows() == n && (z.cols() == 0 || z.rows() == n), "hsic_conditional: row counts differ");
  MatrixX<Scalar> xx(n, x.cols() + z.cols());
  MatrixX<Scalar> yy(n, y.cols() + z.cols());
  xx << x, z;
  yy << y, z;
  const auto rx = block_resolvent(xx, cfg);
  const auto ry = block_resolvent(yy, cfg);
  const auto rz = z.cols() == 0 ? Resolvent<Scalar>::zero(n) : block_resolvent(z, cfg);
  return hsic_from_resolvents(rx, ry, rz);
}

/// Kernel ridge fit of x on z (Gaussian kernel of z, ridge chosen by
/// generalized cross-validation over a small grid), including the mean.
Eigen::VectorXd kernel_smooth(const Eigen::VectorXd& x, const Eigen::MatrixXd& z, const HsicConfig& cfg);

/// Null quantile for a conditional query by residual bootstrap: x is split
/// into its kernel fit on z and a residual, the residual is resampled with
/// the stationary bootstrap, and the statistic is recomputed against the
/// fixed (y,z) and z resolvents. Independent of y by construction while the
/// dependence of x on z is kept.
double hsic_residual_bootstrap_threshold(const Eigen::VectorXd& x, const Eigen::MatrixXd& z,
                                         const Resolvent<double>& ryz, const Resolvent<double>& rz,
                                         const HsicConfig& cfg, std::uint64_t seed);

/// HSIC decision: dependent iff the statistic exceeds the threshold. The
/// threshold is cfg.gamma when fixed. In the bootstrap modes an
/// unconditional query uses a stationary-bootstrap null in which x is
/// resampled independently of y, a conditional one the residual bootstrap.
CiOutcome hsic_ci_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::MatrixXd& z,
                       const HsicConfig& cfg);

}  // namespace tapc

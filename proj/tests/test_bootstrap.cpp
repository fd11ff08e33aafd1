#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "tapc/bootstrap.hpp"
#include "tapc/error.hpp"
#include "tapc/rng.hpp"

using namespace tapc;

namespace {

double abs_correlation(const Eigen::MatrixXd& d, const CiQuery& q) {
  const Eigen::VectorXd a = d.col(q.i).array() - d.col(q.i).mean();
  const Eigen::VectorXd b = d.col(q.j).array() - d.col(q.j).mean();
  return std::abs(a.dot(b)) / std::sqrt(a.squaredNorm() * b.squaredNorm());
}

Eigen::MatrixXd normal_pair(Eigen::Index n, SplitMix64& rng) {
  Eigen::MatrixXd d(n, 2);
  for (Eigen::Index t = 0; t < n; ++t) d.row(t) << rng.normal(), rng.normal();
  return d;
}

}  // namespace

TEST_CASE("RNG is fixed across platforms") {
  SplitMix64 a(0);
  // Reference SplitMix64 outputs for seed 0.
  CHECK(a() == 0xe220a8397b1dcdafULL);
  CHECK(a() == 0x6e789e6aa1b965f4ULL);
  SplitMix64 b(42), c(42);
  for (int i = 0; i < 10; ++i) CHECK(b.normal() == c.normal());
  CHECK(SplitMix64::stream(1, 0)() != SplitMix64::stream(1, 1)());
  SplitMix64 d(3);
  for (int i = 0; i < 1000; ++i) {
    const auto v = d.below(7);
    REQUIRE(v < 7);
    const double u = d.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("stationary bootstrap indices") {
  SplitMix64 rng(1);
  const auto idx = stationary_bootstrap_indices(1000, 10.0, rng);
  REQUIRE(idx.size() == 1000);
  int restarts = 0;
  for (std::size_t t = 1; t < idx.size(); ++t) {
    REQUIRE(idx[t] >= 0);
    REQUIRE(idx[t] < 1000);
    if (idx[t] != (idx[t - 1] + 1) % 1000) ++restarts;
  }
  // restart probability 1/10, so about 100 blocks
  CHECK(restarts > 60);
  CHECK(restarts < 140);
  SplitMix64 again(1);
  CHECK(stationary_bootstrap_indices(1000, 10.0, again) == idx);
}

TEST_CASE("empirical quantile") {
  CHECK(empirical_quantile({3.0}, 0.95) == 3.0);
  CHECK(empirical_quantile({4.0, 1.0, 3.0, 2.0}, 0.0) == 1.0);
  CHECK(empirical_quantile({4.0, 1.0, 3.0, 2.0}, 0.5) == 2.0);
  CHECK(empirical_quantile({4.0, 1.0, 3.0, 2.0}, 1.0) == 4.0);
  CHECK_THROWS_AS(empirical_quantile({}, 0.5), InvalidArgument);
}

TEST_CASE("degenerate replicate counts and quantiles") {
  SplitMix64 rng(2);
  const Eigen::MatrixXd d = normal_pair(100, rng);
  BootstrapConfig cfg;
  cfg.num_replicates = 1;
  std::vector<double> seen;
  const CiStatistic record = [&seen](const Eigen::MatrixXd& m, const CiQuery& q) {
    seen.push_back(abs_correlation(m, q));
    return seen.back();
  };
  const double single = stationary_bootstrap_threshold(d, CiQuery{0, 1, {}}, record, cfg);
  REQUIRE(seen.size() == 1);
  CHECK(single == seen[0]);

  cfg.num_replicates = 20;
  cfg.quantile = 0.0;
  seen.clear();
  const double lo = stationary_bootstrap_threshold(d, CiQuery{0, 1, {}}, record, cfg);
  CHECK(lo == *std::min_element(seen.begin(), seen.end()));

  cfg.expected_block_length = 20.0;
  CHECK_THROWS_AS(stationary_bootstrap_threshold(d, CiQuery{0, 1, {}}, record, cfg), InvalidArgument);
}

TEST_CASE("bootstrap threshold has the nominal rejection rate on fresh null data") {
  SplitMix64 rng(3);
  const Eigen::MatrixXd base = normal_pair(500, rng);
  BootstrapConfig cfg;
  cfg.num_replicates = 500;
  cfg.quantile = 0.95;
  cfg.seed = 9;
  const double gamma = stationary_bootstrap_threshold(base, CiQuery{0, 1, {}}, abs_correlation, cfg);
  int rejected = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXd fresh = normal_pair(500, rng);
    rejected += abs_correlation(fresh, {0, 1, {}}) > gamma ? 1 : 0;
  }
  const double rate = 100.0 * rejected / trials;
  CHECK(rate >= 2.0);
  CHECK(rate <= 8.0);
}

TEST_CASE("bootstrap keeps the null even for dependent data") {
  SplitMix64 rng(4);
  Eigen::MatrixXd d = normal_pair(400, rng);
  d.col(1) = d.col(0) + 0.1 * d.col(1);
  BootstrapConfig cfg;
  cfg.num_replicates = 200;
  const double gamma = stationary_bootstrap_threshold(d, CiQuery{0, 1, {}}, abs_correlation, cfg);
  CHECK(gamma < 0.2);
  CHECK(abs_correlation(d, {0, 1, {}}) > 0.9);
}

TEST_CASE("standardize columns") {
  Eigen::MatrixXd d(4, 2);
  d << 1, 7, 2, 7, 3, 7, 6, 7;
  const Eigen::MatrixXd s = standardize_columns(d);
  CHECK(std::abs(s.col(0).mean()) < 1e-14);
  CHECK(s.col(0).squaredNorm() / 4.0 == doctest::Approx(1.0));
  CHECK(s.col(1).isZero());
}

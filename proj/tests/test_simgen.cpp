#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tapc/error.hpp"
#include "tapc/simgen.hpp"

using namespace tapc;

namespace {

SimConfig make(Paradigm p, double eta = 1.0, int n = 1000, std::uint64_t seed = 0) {
  SimConfig c;
  c.paradigm = p;
  c.eta = eta;
  c.n = n;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("paradigm names round trip") {
  for (Paradigm p : {Paradigm::linear_var, Paradigm::nonlinear_var, Paradigm::contemporaneous_varma, Paradigm::ctrnn})
    CHECK(parse_paradigm(paradigm_name(p)) == p);
  CHECK_THROWS_AS(parse_paradigm("garch"), ConfigError);
}

TEST_CASE("shape, finiteness and reproducibility") {
  for (Paradigm p : {Paradigm::linear_var, Paradigm::nonlinear_var, Paradigm::contemporaneous_varma, Paradigm::ctrnn}) {
    const DataMatrix a = simulate(make(p, 1.5, 300, 7));
    const DataMatrix b = simulate(make(p, 1.5, 300, 7));
    CHECK(a.cols() == 4);
    CHECK(a.rows() == (p == Paradigm::ctrnn ? 367 : 300));
    CHECK(a.values.allFinite());
    CHECK(a.values == b.values);
    CHECK(a.values != simulate(make(p, 1.5, 300, 8)).values);
  }
  SimConfig burn = make(Paradigm::linear_var, 1.0, 100, 3);
  burn.burn_in = 20;
  CHECK(simulate(burn).rows() == 100);
  CHECK_THROWS(simulate(make(Paradigm::linear_var, 0.0)));
  CHECK_THROWS(simulate(make(Paradigm::linear_var, 1.0, 1)));
}

TEST_CASE("linear VAR") {
  const DataMatrix tiny = gen_linear_var(make(Paradigm::linear_var, 1e-9, 50));
  for (Eigen::Index t = 1; t < tiny.rows(); ++t) CHECK(tiny.values(t, 2) == doctest::Approx(1.0).epsilon(1e-6));

  const DataMatrix d = gen_linear_var(make(Paradigm::linear_var, 1.0, 10000, 5));
  CHECK(std::abs(d.values.col(0).mean() - 1.0) < 0.05);
  CHECK(std::abs(d.values.col(1).mean() + 1.0) < 0.05);

  // halves agree within 3 standard errors
  for (Eigen::Index c = 0; c < 4; ++c) {
    const Eigen::VectorXd first = d.values.col(c).head(5000), second = d.values.col(c).tail(5000);
    const double var = (d.values.col(c).array() - d.values.col(c).mean()).square().mean();
    CHECK(std::abs(first.mean() - second.mean()) < 3.0 * std::sqrt(2.0 * var / 5000.0));
  }
  CHECK(ground_truth(Paradigm::linear_var) == RolledGraph(4, {{0, 2}, {1, 2}, {2, 3}}));
}

TEST_CASE("nonlinear VAR") {
  const double eta = 2.5;
  const DataMatrix d = gen_nonlinear_var(make(Paradigm::nonlinear_var, eta, 2000, 9));
  CHECK(d.values.leftCols(2).minCoeff() >= 0.0);
  CHECK(d.values.leftCols(2).maxCoeff() <= eta);
  for (Eigen::Index t = 1; t < d.rows(); ++t) {
    const double f3 = 4.0 * std::sin(d.values(t - 1, 0)) + 3.0 * std::cos(d.values(t - 1, 1));
    const double f4 = 2.0 * std::sin(d.values(t - 1, 2));
    REQUIRE(std::abs(f3) <= 7.0);
    const double u3 = d.values(t, 2) - f3, u4 = d.values(t, 3) - f4;
    REQUIRE(u3 >= 0.0);
    REQUIRE(u3 <= eta);
    REQUIRE(u4 >= 0.0);
    REQUIRE(u4 <= eta);
  }

  SimConfig nested = make(Paradigm::nonlinear_var, 1.0, 200, 1);
  nested.nested_nonlinearity = true;
  const DataMatrix n = simulate(nested);
  for (Eigen::Index t = 1; t < n.rows(); ++t) {
    const double u = n.values(t, 2) - 4.0 * std::sin(n.values(t - 1, 0) + 3.0 * std::cos(n.values(t - 1, 1)));
    REQUIRE(u >= 0.0);
    REQUIRE(u <= 1.0);
  }
  CHECK(ground_truth(Paradigm::nonlinear_var) == ground_truth(Paradigm::linear_var));
}

TEST_CASE("contemporaneous VARMA") {
  const DataMatrix tiny = gen_contemporaneous_varma(make(Paradigm::contemporaneous_varma, 1e-9, 50));
  for (Eigen::Index t = 1; t < tiny.rows(); ++t) {
    const double expect = 2.0 * tiny.values(t - 1, 0) + tiny.values(t - 1, 1) + 1.0;
    CHECK(tiny.values(t, 2) == doctest::Approx(expect).epsilon(1e-6));
  }
  // X3 loads 2 e1 at the same time point and X1 = 1 + e1, so cov = 2 eta^2.
  const DataMatrix d = gen_contemporaneous_varma(make(Paradigm::contemporaneous_varma, 1.0, 20000, 2));
  const Eigen::VectorXd a = d.values.col(2).array() - d.values.col(2).mean();
  const Eigen::VectorXd b = d.values.col(0).array() - d.values.col(0).mean();
  CHECK(a.dot(b) / static_cast<double>(d.rows() - 1) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(ground_truth(Paradigm::contemporaneous_varma) == ground_truth(Paradigm::linear_var));
}

TEST_CASE("CTRNN") {
  SimConfig cfg = make(Paradigm::ctrnn);
  CHECK(simulate(cfg).rows() == static_cast<Eigen::Index>(std::floor(1000.0 / std::numbers::e)));

  // no synapses and a constant unit drive: u = 1 - exp(-t / 10) up to Euler error
  cfg.ctrnn_weight = 0.0;
  cfg.eta = 1e-12;
  const DataMatrix u = simulate(cfg);
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const double t = std::round((k + 1) * std::numbers::e / kCtrnnStepMs) * kCtrnnStepMs;
    const double exact = 1.0 - std::exp(-t / kCtrnnTimeConstantMs);
    REQUIRE(std::abs(u.values(k, 0) - exact) < 2e-3);
    if (t >= 50.0) REQUIRE(std::abs(u.values(k, 3) - 1.0) < 0.01);
  }

  RolledGraph truth(4, {{0, 2}, {1, 2}, {2, 3}, {0, 0}, {1, 1}, {2, 2}, {3, 3}});
  CHECK(ground_truth(Paradigm::ctrnn) == truth);
}

TEST_CASE("CSV writer") {
  const DataMatrix d = simulate(make(Paradigm::linear_var, 1.0, 3, 4));
  const std::string csv = to_csv(d);
  CHECK(csv.rfind("X1,X2,X3,X4\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

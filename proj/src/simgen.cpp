#include "tapc/simgen.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "tapc/error.hpp"
#include "tapc/rng.hpp"

namespace tapc {

namespace {

DataMatrix finish(Eigen::MatrixXd values, int burn_in) {
  Eigen::MatrixXd kept = values.bottomRows(values.rows() - burn_in);
  return make_data(std::move(kept));
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::string_view paradigm_name(Paradigm p) {
  switch (p) {
    case Paradigm::linear_var: return "linear-var";
    case Paradigm::nonlinear_var: return "nonlinear-var";
    case Paradigm::contemporaneous_varma: return "contemporaneous-varma";
    case Paradigm::ctrnn: return "ctrnn";
  }
  return "unknown";
}

Paradigm parse_paradigm(std::string_view name) {
  for (Paradigm p : {Paradigm::linear_var, Paradigm::nonlinear_var, Paradigm::contemporaneous_varma,
                     Paradigm::ctrnn}) {
    if (paradigm_name(p) == name) return p;
  }
  throw ConfigError("unknown paradigm '" + std::string(name) +
                    "' (expected linear-var, nonlinear-var, contemporaneous-varma or ctrnn)");
}

void SimConfig::validate() const {
  detail::require(eta > 0.0 && std::isfinite(eta), "simulation: eta must be positive");
  detail::require(burn_in >= 0, "simulation: burn_in must be non-negative");
  if (paradigm == Paradigm::ctrnn) {
    detail::require(ctrnn_duration_ms >= 2.0 * std::numbers::e, "simulation: CTRNN duration too short");
    detail::require(std::isfinite(ctrnn_weight), "simulation: CTRNN weight must be finite");
  } else {
    detail::require(n >= 2, "simulation: n must be >= 2");
  }
}

DataMatrix gen_linear_var(const SimConfig& cfg) {
  cfg.validate();
  SplitMix64 rng(cfg.seed);
  const int total = cfg.n + cfg.burn_in;
  Eigen::MatrixXd x(total, kSimVariables);
  Eigen::Vector4d prev;
  for (int v = 0; v < kSimVariables; ++v) prev(v) = rng.normal(0.0, cfg.eta);
  for (int t = 0; t < total; ++t) {
    Eigen::Vector4d e;
    for (int v = 0; v < kSimVariables; ++v) e(v) = rng.normal(0.0, cfg.eta);
    Eigen::Vector4d cur;
    cur(0) = 1.0 + e(0);
    cur(1) = -1.0 + e(1);
    cur(2) = 2.0 * prev(0) + prev(1) + e(2);
    cur(3) = 2.0 * prev(2) + e(3);
    x.row(t) = cur.transpose();
    prev = cur;
  }
  return finish(std::move(x), cfg.burn_in);
}

DataMatrix gen_nonlinear_var(const SimConfig& cfg) {
  cfg.validate();
  SplitMix64 rng(cfg.seed);
  const int total = cfg.n + cfg.burn_in;
  Eigen::MatrixXd x(total, kSimVariables);
  Eigen::Vector4d prev;
  for (int v = 0; v < kSimVariables; ++v) prev(v) = rng.uniform(0.0, cfg.eta);
  for (int t = 0; t < total; ++t) {
    Eigen::Vector4d u;
    for (int v = 0; v < kSimVariables; ++v) u(v) = rng.uniform(0.0, cfg.eta);
    Eigen::Vector4d cur;
    cur(0) = u(0);
    cur(1) = u(1);
    cur(2) = cfg.nested_nonlinearity ? 4.0 * std::sin(prev(0) + 3.0 * std::cos(prev(1))) + u(2)
                                     : 4.0 * std::sin(prev(0)) + 3.0 * std::cos(prev(1)) + u(2);
    cur(3) = 2.0 * std::sin(prev(2)) + u(3);
    x.row(t) = cur.transpose();
    prev = cur;
  }
  return finish(std::move(x), cfg.burn_in);
}

DataMatrix gen_contemporaneous_varma(const SimConfig& cfg) {
  cfg.validate();
  const Eigen::Vector4d c(1.0, -1.0, 1.0, 2.0);
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  a(2, 0) = 2.0;
  a(2, 1) = 1.0;
  a(3, 2) = 2.0;
  Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
  b(3, 0) = 2.0;
  b(3, 1) = 1.0;
  Eigen::Matrix4d m;
  m << 1, 0, 0, 0,
       0, 1, 0, 0,
       2, 1, 1, 0,
       2, 1, 1, 1;

  SplitMix64 rng(cfg.seed);
  auto draw = [&rng, &cfg] {
    Eigen::Vector4d e;
    for (int v = 0; v < kSimVariables; ++v) e(v) = rng.normal(0.0, cfg.eta);
    return e;
  };
  const int total = cfg.n + cfg.burn_in;
  Eigen::MatrixXd x(total, kSimVariables);
  Eigen::Vector4d prev = draw();
  Eigen::Vector4d prev_noise = draw();
  for (int t = 0; t < total; ++t) {
    const Eigen::Vector4d e = draw();
    const Eigen::Vector4d cur = c + a * prev + b * prev_noise + m * e;
    x.row(t) = cur.transpose();
    prev = cur;
    prev_noise = e;
  }
  return finish(std::move(x), cfg.burn_in);
}

DataMatrix gen_ctrnn(const SimConfig& cfg) {
  cfg.validate();
  Eigen::Matrix4d w = Eigen::Matrix4d::Zero();  // w(i, j): from unit i to unit j
  w(0, 2) = cfg.ctrnn_weight;
  w(1, 2) = cfg.ctrnn_weight;
  w(2, 3) = cfg.ctrnn_weight;

  const double gap = std::numbers::e;
  const auto samples = static_cast<int>(std::floor(cfg.ctrnn_duration_ms / gap));
  const int burn = cfg.burn_in;
  const int total = samples + burn;
  SplitMix64 rng(cfg.seed);
  Eigen::Vector4d u = Eigen::Vector4d::Zero();
  Eigen::MatrixXd x(total, kSimVariables);
  long step = 0;
  const double rate = kCtrnnStepMs / kCtrnnTimeConstantMs;
  for (int k = 1; k <= total; ++k) {
    const auto target = std::lround(k * gap / kCtrnnStepMs);
    for (; step < target; ++step) {
      const Eigen::Vector4d fire = u.unaryExpr([](double v) { return logistic(v); });
      Eigen::Vector4d input;
      for (int j = 0; j < kSimVariables; ++j) input(j) = rng.normal(1.0, cfg.eta);
      u += rate * (-u + w.transpose() * fire + input);
    }
    x.row(k - 1) = u.transpose();
  }
  return finish(std::move(x), burn);
}

DataMatrix simulate(const SimConfig& cfg) {
  switch (cfg.paradigm) {
    case Paradigm::linear_var: return gen_linear_var(cfg);
    case Paradigm::nonlinear_var: return gen_nonlinear_var(cfg);
    case Paradigm::contemporaneous_varma: return gen_contemporaneous_varma(cfg);
    case Paradigm::ctrnn: return gen_ctrnn(cfg);
  }
  throw InvalidArgument("unknown paradigm");
}

RolledGraph ground_truth(Paradigm p) {
  RolledGraph g(kSimVariables, {{0, 2}, {1, 2}, {2, 3}});
  if (p == Paradigm::ctrnn) {
    for (NodeId v = 0; v < kSimVariables; ++v) g.add_edge(v, v);
  }
  return g;
}

std::string to_csv(const DataMatrix& data) {
  std::ostringstream os;
  for (Eigen::Index c = 0; c < data.cols(); ++c) os << (c ? "," : "") << data.name(c);
  os << '\n';
  char buf[40];
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", data.values(r, c));
      os << (c ? "," : "") << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace tapc

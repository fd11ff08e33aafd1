#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "tapc/ci_tests.hpp"
#include "tapc/graph.hpp"

namespace tapc {

/// The four four-variable benchmark processes; all share the motif
/// 1 -> 3, 2 -> 3, 3 -> 4 (1-based labels).
enum class Paradigm { linear_var, nonlinear_var, contemporaneous_varma, ctrnn };

std::string_view paradigm_name(Paradigm p);
/// Accepts the names printed by paradigm_name(). Throws ConfigError.
Paradigm parse_paradigm(std::string_view name);

struct SimConfig {
  Paradigm paradigm = Paradigm::linear_var;
  double eta = 1.0;           // noise scale
  int n = 1000;               // time points (ignored by ctrnn)
  std::uint64_t seed = 0;
  int burn_in = 0;            // leading rows generated and discarded
  /// Nonlinear VAR only: X3 = 4 sin(X1 + 3 cos(X2)) + U instead of
  /// 4 sin(X1) + 3 cos(X2) + U.
  bool nested_nonlinearity = false;
  double ctrnn_duration_ms = 1000.0;
  double ctrnn_weight = 10.0;  // shared weight of the three motif synapses

  void validate() const;
};

inline constexpr int kSimVariables = 4;

/// X1 = 1 + e1, X2 = -1 + e2, X3 = 2 X1' + X2' + e3, X4 = 2 X3' + e4 with
/// ' the previous time point and e ~ N(0, eta^2).
DataMatrix gen_linear_var(const SimConfig& cfg);

/// X1, X2 ~ U(0, eta); X3 = 4 sin(X1') + 3 cos(X2') + U(0, eta);
/// X4 = 2 sin(X3') + U(0, eta).
DataMatrix gen_nonlinear_var(const SimConfig& cfg);

/// X_t = c + A X_{t-1} + B e_{t-1} + M e_t with lower-triangular M, so the
/// motif also holds among the variables at a fixed time.
DataMatrix gen_contemporaneous_varma(const SimConfig& cfg);

/// Four firing-rate units, tau_j du_j/dt = -u_j + sum_i w_ij s(u_i) + I_j(t),
/// w_13 = w_23 = w_34 = 10, tau_j = 10 ms, logistic s, I_j ~ N(1, eta^2)
/// redrawn every Euler step (dt = 0.1 ms) from u = 0. Sampled every
/// e ms (nearest step) over the duration, first sample at t = e.
DataMatrix gen_ctrnn(const SimConfig& cfg);

DataMatrix simulate(const SimConfig& cfg);

inline constexpr double kCtrnnStepMs = 0.1;
inline constexpr double kCtrnnTimeConstantMs = 10.0;

/// Rolled motif of a paradigm; the ctrnn truth adds the four self-loops.
RolledGraph ground_truth(Paradigm p);

/// Header X1..Xp, one row per time point, doubles printed with 17
/// significant digits.
std::string to_csv(const DataMatrix& data);

}  // namespace tapc

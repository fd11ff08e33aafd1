#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tapc/ci_tests.hpp"
#include "tapc/evaluation.hpp"
#include "tapc/pc.hpp"
#include "tapc/run_config.hpp"
#include "tapc/simgen.hpp"
#include "tapc/tpc.hpp"

namespace tapc {

/// Discovery method names used by `reproduce`: the base algorithm and the
/// CI backend (pchs = pc with HSIC and so on).
struct Method {
  enum class Algorithm { pc, tpcs, tpcns } algorithm = Algorithm::tpcs;
  bool hsic = false;

  std::string name() const;
  static Method parse(std::string_view name);
};

/// CI settings taken from a configuration (alpha or gamma, HSIC options,
/// skeleton options); backend chosen by `test` unless overridden.
PcConfig pc_config_from(const RunConfig& cfg, CiBackend backend);
PcConfig pc_config_from(const RunConfig& cfg);
TpcnsConfig tpcns_config_from(const RunConfig& cfg, const PcConfig& pc);

/// Rolled estimate of one method on one series. `pc` runs on the raw
/// series (window of one time point); tpcs and tpcns use the configured
/// window. `seed` drives the tpcns subsample starts.
RolledGraph estimate(const DataMatrix& data, const Method& m, const RunConfig& cfg, std::uint64_t seed);

/// Per-replicate data seed used by the sweep.
std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t rep);

struct CellResult {
  EdgeConfusion pooled;
  std::vector<RolledGraph> estimates;
};

/// One (method, eta, alpha) cell of a simulation sweep over `reps` series;
/// alpha sets the Gaussian level and the HSIC bootstrap quantile 1 - alpha.
CellResult run_cell(const RunConfig& cfg, Paradigm paradigm, const Method& m, double eta, double alpha, int reps);

/// Command entry points. Progress goes to `log`; evaluate writes its table
/// to `out` when no output path is configured. ConfigError marks
/// usage/configuration problems, any other Error a runtime failure.
void cmd_simulate(const RunConfig& cfg, std::ostream& log);
void cmd_discover(const RunConfig& cfg, std::ostream& log);
void cmd_evaluate(const RunConfig& cfg, std::ostream& out);
void cmd_reproduce(const RunConfig& cfg, std::ostream& log);
void run_command(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Exit status: 0 ok, 1 runtime error, 2 usage or configuration error.
enum ExitCode : int { exit_ok = 0, exit_runtime = 1, exit_usage = 2 };

/// Single-line JSON error record: {"error": kind, "message": text, "exit": code}.
std::string error_record(std::string_view kind, std::string_view message, int code);

}  // namespace tapc

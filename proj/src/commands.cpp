#include "tapc/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "tapc/data_io.hpp"
#include "tapc/error.hpp"
#include "tapc/graph_io.hpp"
#include "tapc/rng.hpp"

namespace tapc {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string Method::name() const {
  std::string base = algorithm == Algorithm::pc ? "pc" : algorithm == Algorithm::tpcs ? "tpcs" : "tpcns";
  return hsic ? base + "hs" : base;
}

Method Method::parse(std::string_view name) {
  for (const auto alg : {Algorithm::pc, Algorithm::tpcs, Algorithm::tpcns}) {
    for (const bool h : {false, true}) {
      const Method m{alg, h};
      if (m.name() == name) return m;
    }
  }
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (expected pc, pchs, tpcs, tpcshs, tpcns or tpcnshs)");
}

namespace {

CiBackend parse_backend(const std::string& name) {
  if (name == "gaussian") return CiBackend::gaussian;
  if (name == "hsic") return CiBackend::hsic;
  if (name == "oracle") return CiBackend::oracle;
  throw ConfigError("unknown test '" + name + "' (expected gaussian, hsic or oracle)");
}

Method::Algorithm parse_algorithm(const std::string& name) {
  if (name == "pc") return Method::Algorithm::pc;
  if (name == "tpcs") return Method::Algorithm::tpcs;
  if (name == "tpcns") return Method::Algorithm::tpcns;
  throw ConfigError("unknown method '" + name + "' (expected pc, tpcs or tpcns)");
}

WindowConfig window_for(const RunConfig& cfg, Method::Algorithm alg) {
  if (alg == Method::Algorithm::pc) return {1, 1};
  WindowConfig w{static_cast<int>(cfg.integer("tau")), static_cast<int>(cfg.integer("stride"))};
  if (w.tau < 1 || w.stride < 1) throw ConfigError("tau and stride must be >= 1");
  return w;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::vector<std::string> formats_of(const RunConfig& cfg) {
  auto formats = cfg.list("formats");
  for (const auto& f : formats) {
    if (f != "dot" && f != "json" && f != "csv") throw ConfigError("unknown output format '" + f + "'");
  }
  return formats;
}

bool wants(const std::vector<std::string>& formats, std::string_view f) {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

std::string stamped_json(const std::string& body, const RunConfig& cfg) {
  json doc = json::parse(body);
  doc["fingerprint"] = cfg.fingerprint();
  return doc.dump() + "\n";
}

std::string stamped_dot(const std::string& body, const RunConfig& cfg) {
  return "// " + cfg.comment_line().substr(2) + "\n" + body;
}

std::string stamped_csv(const std::string& body, const RunConfig& cfg) { return cfg.comment_line() + "\n" + body; }

fs::path require_path(const RunConfig& cfg, std::string_view key, std::string_view command) {
  const std::string& v = cfg.get(key);
  if (v.empty()) throw ConfigError(std::string(command) + ": missing required --" + std::string(key));
  return v;
}

template <typename G>
void emit_graph(const fs::path& dir, const std::string& stem, const G& g, const std::vector<std::string>& formats,
                const RunConfig& cfg) {
  if (wants(formats, "dot")) write_text_atomic(dir / (stem + ".dot"), stamped_dot(to_dot(g, stem), cfg));
  if (wants(formats, "json")) write_text_atomic(dir / (stem + ".json"), stamped_json(to_json(g), cfg));
}

RolledGraph load_truth(const std::string& spec) {
  for (const auto p : {Paradigm::linear_var, Paradigm::nonlinear_var, Paradigm::contemporaneous_varma,
                       Paradigm::ctrnn}) {
    if (paradigm_name(p) == spec) return ground_truth(p);
  }
  return rolled_from_json(read_text(spec));
}

}  // namespace

PcConfig pc_config_from(const RunConfig& cfg, CiBackend backend) {
  PcConfig pc;
  pc.backend = backend;
  if (const auto gamma = cfg.optional_real("gamma")) {
    pc.gaussian = GaussianCiConfig::with_gamma(*gamma);
  } else {
    pc.gaussian = GaussianCiConfig::with_alpha(cfg.real("alpha"));
  }
  const std::string& mode = cfg.get("hsic_threshold");
  if (mode == "fixed") pc.hsic.threshold = HsicThreshold::fixed;
  else if (mode == "bootstrap") pc.hsic.threshold = HsicThreshold::bootstrap_per_test;
  else if (mode == "pooled") pc.hsic.threshold = HsicThreshold::bootstrap_pooled;
  else throw ConfigError("unknown hsic_threshold '" + mode + "' (expected fixed, bootstrap or pooled)");
  const std::string& solver = cfg.get("hsic_solver");
  if (solver == "low-rank") pc.hsic.solver = HsicSolver::low_rank;
  else if (solver == "exact") pc.hsic.solver = HsicSolver::exact;
  else throw ConfigError("unknown hsic_solver '" + solver + "' (expected low-rank or exact)");
  pc.hsic.gamma = cfg.real("hsic_gamma");
  pc.hsic.bootstrap.num_replicates = static_cast<int>(cfg.integer("bootstrap_replicates"));
  pc.hsic.bootstrap.expected_block_length = cfg.real("block_length");
  pc.hsic.bootstrap.quantile = 1.0 - cfg.real("alpha");
  pc.hsic.bootstrap.seed = cfg.unsigned_integer("seed");
  if (!cfg.get("max_cond").empty()) pc.skeleton.max_conditioning = static_cast<int>(cfg.integer("max_cond"));
  pc.skeleton.stable = cfg.boolean("stable");
  try {
    pc.gaussian.validate();
    pc.hsic.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return pc;
}

PcConfig pc_config_from(const RunConfig& cfg) { return pc_config_from(cfg, parse_backend(cfg.get("test"))); }

TpcnsConfig tpcns_config_from(const RunConfig& cfg, const PcConfig& pc) {
  TpcnsConfig t;
  t.window_length = static_cast<int>(cfg.integer("L"));
  t.num_subsamples = static_cast<int>(cfg.integer("subsamples"));
  t.freq_cutoff = cfg.real("cutoff");
  t.pc = pc;
  t.window = window_for(cfg, Method::Algorithm::tpcns);
  t.seed = cfg.unsigned_integer("seed");
  try {
    t.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return t;
}

std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t rep) { return SplitMix64::stream(master, rep)(); }

RolledGraph estimate(const DataMatrix& data, const Method& m, const RunConfig& cfg, std::uint64_t seed) {
  PcConfig pc = pc_config_from(cfg, m.hsic ? CiBackend::hsic : CiBackend::gaussian);
  pc.hsic.bootstrap.seed = seed;
  if (m.algorithm == Method::Algorithm::tpcns) {
    TpcnsConfig t = tpcns_config_from(cfg, pc);
    t.seed = seed;
    return tpcns(data, t).rolled;
  }
  return tpc(data, window_for(cfg, m.algorithm), pc).rolled;
}

CellResult run_cell(const RunConfig& cfg, Paradigm paradigm, const Method& m, double eta, double alpha, int reps) {
  if (reps < 1) throw ConfigError("reproduce: reps must be >= 1");
  RunConfig cell = cfg;
  cell.set("alpha", format_double(alpha));
  cell.set("gamma", "");
  const std::uint64_t master = cfg.unsigned_integer("seed");
  SimConfig sim;
  sim.paradigm = paradigm;
  sim.eta = eta;
  sim.n = static_cast<int>(cfg.integer("n"));
  sim.nested_nonlinearity = cfg.boolean("nested");
  const RolledGraph truth = ground_truth(paradigm);
  const bool loops = cfg.boolean("self_loops");

  CellResult out;
  for (int r = 0; r < reps; ++r) {
    sim.seed = replicate_seed(master, static_cast<std::uint64_t>(r));
    const DataMatrix data = simulate(sim);
    RolledGraph est = estimate(data, m, cell, replicate_seed(sim.seed, 1));
    out.pooled += confusion(est, truth, loops);
    out.estimates.push_back(std::move(est));
  }
  return out;
}

void cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  SimConfig sim;
  sim.paradigm = parse_paradigm(cfg.get("paradigm"));
  sim.eta = cfg.real("eta");
  sim.n = static_cast<int>(cfg.integer("n"));
  sim.seed = cfg.unsigned_integer("seed");
  sim.nested_nonlinearity = cfg.boolean("nested");
  try {
    sim.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  const fs::path out = require_path(cfg, "out", "simulate");
  const DataMatrix data = simulate(sim);
  write_text_atomic(out, stamped_csv(to_csv(data), cfg));
  log << "wrote " << data.rows() << " x " << data.cols() << " series to " << out.string() << '\n';
}

void cmd_discover(const RunConfig& cfg, std::ostream& log) {
  const auto alg = parse_algorithm(cfg.get("method"));
  const auto formats = formats_of(cfg);
  PcConfig pc = pc_config_from(cfg);
  const DataMatrix data = ingest_csv(require_path(cfg, "in", "discover"));
  const fs::path dir = require_path(cfg, "out", "discover");
  if (pc.backend == CiBackend::oracle) {
    if (cfg.get("truth").empty()) throw ConfigError("discover: the oracle test needs --truth (unrolled DAG JSON)");
    pc.truth = dag_from_json(read_text(cfg.get("truth")));
  }
  try {
    pc.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }

  if (alg == Method::Algorithm::tpcns) {
    const TpcnsConfig t = tpcns_config_from(cfg, pc);
    const TpcnsResult r = tpcns(data, t);
    emit_graph(dir, "rolled", r.rolled, formats, cfg);
    if (wants(formats, "csv")) {
      write_text_atomic(dir / "edge_frequency.csv", stamped_csv(edge_frequency_csv(r.edge_freq), cfg));
    }
    log << "tpcns: " << r.rolled.edge_count() << " rolled edges from " << t.num_subsamples << " subsamples\n";
  } else {
    const TpcResult r = tpc(data, window_for(cfg, alg), pc);
    emit_graph(dir, "unrolled", r.unrolled, formats, cfg);
    emit_graph(dir, "rolled", r.rolled, formats, cfg);
    if (wants(formats, "csv")) {
      write_text_atomic(dir / "decisions.csv", stamped_csv(decision_log_csv(r.decisions), cfg));
    }
    for (const auto& d : r.diagnostics) log << "note: " << d << '\n';
    log << cfg.get("method") << ": " << r.rolled.edge_count() << " rolled edges, " << r.decisions.size()
        << " CI tests\n";
  }
  write_text_atomic(dir / "run.cfg", cfg.canonical());
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  const RolledGraph est = rolled_from_json(read_text(require_path(cfg, "est", "evaluate")));
  const std::string truth_spec = require_path(cfg, "truth", "evaluate").string();
  const RolledGraph truth = load_truth(truth_spec);
  const EdgeConfusion c = confusion(est, truth, cfg.boolean("self_loops"));

  std::vector<TprMode> modes;
  const std::string& mode = cfg.get("tpr_mode");
  if (mode == "both") modes = {TprMode::condition_positives, TprMode::paper_formula};
  else modes = {parse_tpr_mode(mode)};

  std::ostringstream table;
  table << cfg.comment_line() << '\n' << metrics_csv_header() << ",tp,fp,tn,fn\n";
  for (const TprMode m : modes) {
    MetricsRow row{cfg.get("method"), truth_spec, cfg.real("eta"), cfg.real("alpha"), metrics(c, m)};
    table << metrics_csv_line(row) << ',' << c.tp << ',' << c.fp << ',' << c.tn << ',' << c.fn << '\n';
  }
  if (cfg.get("out").empty()) out << table.str();
  else write_text_atomic(cfg.get("out"), table.str());
}

void cmd_reproduce(const RunConfig& cfg, std::ostream& log) {
  const Paradigm paradigm = parse_paradigm(cfg.get("paradigm"));
  std::vector<Method> methods;
  for (const auto& name : cfg.list("methods")) methods.push_back(Method::parse(name));
  const auto etas = cfg.real_list("etas");
  const auto alphas = cfg.real_list("alphas");
  const long reps = cfg.integer("reps");
  if (methods.empty() || etas.empty() || alphas.empty()) throw ConfigError("reproduce: empty sweep grid");
  if (reps < 1) throw ConfigError("reproduce: reps must be >= 1");
  const fs::path dir = require_path(cfg, "out", "reproduce");
  const int p = kSimVariables;

  std::ostringstream table;
  table << cfg.comment_line() << '\n' << metrics_csv_header() << '\n';
  for (const Method& m : methods) {
    for (const double eta : etas) {
      for (const double alpha : alphas) {
        const CellResult cell = run_cell(cfg, paradigm, m, eta, alpha, static_cast<int>(reps));
        for (const TprMode mode : {TprMode::condition_positives, TprMode::paper_formula}) {
          MetricsRow row{m.name(), std::string(paradigm_name(paradigm)), eta, alpha, metrics(cell.pooled, mode)};
          table << metrics_csv_line(row) << '\n';
        }
        const std::string stem = m.name() + "_eta" + format_double(eta) + "_alpha" + format_double(alpha);
        write_text_atomic(dir / ("frequency_" + stem + ".csv"),
                          stamped_csv(frequency_csv(edge_frequency(cell.estimates, p)), cfg));
        const MetricsReport r = metrics(cell.pooled);
        log << stem << ": cs=" << (r.cs ? format_double(*r.cs) : "NA") << '\n';
      }
    }
  }
  write_text_atomic(dir / "metrics.csv", table.str());
  write_text_atomic(dir / "run.cfg", cfg.canonical());
}

void run_command(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const std::string& command = cfg.get("command");
  if (command == "simulate") cmd_simulate(cfg, log);
  else if (command == "discover") cmd_discover(cfg, log);
  else if (command == "evaluate") cmd_evaluate(cfg, out);
  else if (command == "reproduce") cmd_reproduce(cfg, log);
  else throw ConfigError("unknown command '" + command + "'");
}

std::string error_record(std::string_view kind, std::string_view message, int code) {
  json rec;
  rec["error"] = std::string(kind);
  rec["message"] = std::string(message);
  rec["exit"] = code;
  return rec.dump();
}

}  // namespace tapc

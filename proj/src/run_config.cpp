#include "tapc/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tapc/error.hpp"

namespace tapc {

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"command", "", "simulate | discover | evaluate | reproduce"},
      {"profile", "", "named default bundle: river-runoff"},
      {"paradigm", "linear-var", "linear-var | nonlinear-var | contemporaneous-varma | ctrnn"},
      {"eta", "1", "noise scale of the simulation"},
      {"n", "1000", "simulated time points (ctrnn uses its fixed 1000 ms duration)"},
      {"nested", "false", "nonlinear-var: X3 = 4 sin(X1 + 3 cos(X2)) + U"},
      {"seed", "0", "master seed"},
      {"in", "", "input CSV (discover)"},
      {"out", "", "output file (simulate) or directory"},
      {"truth", "", "truth graph JSON, or a paradigm name (evaluate)"},
      {"est", "", "estimated rolled graph JSON (evaluate)"},
      {"method", "tpcs", "pc | tpcs | tpcns"},
      {"test", "gaussian", "gaussian | hsic | oracle"},
      {"alpha", "0.05", "significance level; HSIC bootstrap quantile is 1 - alpha"},
      {"gamma", "", "fixed Gaussian threshold on |z|, overrides alpha"},
      {"tau", "2", "window length in time points"},
      {"stride", "2", "window stride r"},
      {"L", "50", "tpcns window length in embedded rows"},
      {"subsamples", "50", "tpcns subsample count"},
      {"cutoff", "0.4", "tpcns edge frequency cutoff in [0,1]"},
      {"max_cond", "", "largest conditioning set size (default p - 2)"},
      {"stable", "false", "order-independent skeleton search"},
      {"hsic_threshold", "fixed", "fixed | bootstrap | pooled"},
      {"hsic_gamma", "0.01", "fixed HSIC threshold"},
      {"hsic_solver", "low-rank", "low-rank | exact"},
      {"bootstrap_replicates", "200", "stationary bootstrap replicates"},
      {"block_length", "5", "expected stationary bootstrap block length"},
      {"formats", "dot,json,csv", "subset of dot, json, csv"},
      {"self_loops", "true", "count self-loops in the edge universe"},
      {"tpr_mode", "condition-positives", "condition-positives | paper-formula | both"},
      {"methods", "pc,tpcs,tpcns", "reproduce: pc, pchs, tpcs, tpcshs, tpcns, tpcnshs"},
      {"etas", "1", "reproduce: noise grid"},
      {"alphas", "0.05", "reproduce: alpha grid"},
      {"reps", "25", "reproduce: simulated series per cell"},
  };
  return schema;
}

namespace {

const ConfigKey* find_key(std::string_view key) {
  for (const auto& k : config_schema())
    if (k.name == key) return &k;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, const std::string& value, std::string_view expected) {
  throw ConfigError("config key '" + std::string(key) + "': expected " + std::string(expected) + ", got '" +
                    value + "'");
}

template <typename T>
bool parse_full(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& k : config_schema()) values_.emplace(std::string(k.name), std::string(k.default_value));
}

void RunConfig::set(std::string_view key, std::string_view value) {
  if (!find_key(key)) throw ConfigError("unknown config key '" + std::string(key) + "'");
  values_[std::string(key)] = std::string(trim(value));
}

const std::string& RunConfig::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  return it->second;
}

bool RunConfig::is_default(std::string_view key) const {
  const ConfigKey* k = find_key(key);
  return k && get(key) == k->default_value;
}

double RunConfig::real(std::string_view key) const {
  const std::string& v = get(key);
  double out = 0.0;
  if (!parse_full(std::string_view(v), out) || !std::isfinite(out)) bad_value(key, v, "a number");
  return out;
}

std::optional<double> RunConfig::optional_real(std::string_view key) const {
  if (get(key).empty()) return std::nullopt;
  return real(key);
}

long RunConfig::integer(std::string_view key) const {
  const std::string& v = get(key);
  long out = 0;
  if (!parse_full(std::string_view(v), out)) bad_value(key, v, "an integer");
  return out;
}

std::uint64_t RunConfig::unsigned_integer(std::string_view key) const {
  const std::string& v = get(key);
  std::uint64_t out = 0;
  if (!parse_full(std::string_view(v), out)) bad_value(key, v, "a non-negative integer");
  return out;
}

bool RunConfig::boolean(std::string_view key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

std::vector<std::string> RunConfig::list(std::string_view key) const {
  std::vector<std::string> out;
  const std::string& v = get(key);
  if (v.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    const auto item = trim(std::string_view(v).substr(start, comma == std::string::npos ? comma : comma - start));
    if (item.empty()) bad_value(key, v, "a comma-separated list without empty items");
    out.emplace_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> RunConfig::real_list(std::string_view key) const {
  std::vector<double> out;
  for (const auto& item : list(key)) {
    double x = 0.0;
    if (!parse_full(std::string_view(item), x) || !std::isfinite(x)) bad_value(key, get(key), "a list of numbers");
    out.push_back(x);
  }
  return out;
}

void RunConfig::apply_profile(std::string_view name) {
  if (name.empty()) return;
  if (name != "river-runoff") throw ConfigError("unknown profile '" + std::string(name) + "'");
  // Lag 2 with stride 4: three time points per window.
  set("profile", name);
  set("method", "tpcns");
  set("test", "gaussian");
  set("alpha", "0.05");
  set("tau", "3");
  set("stride", "4");
  set("L", "50");
  set("subsamples", "50");
  set("cutoff", "0.1");
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& k : config_schema()) {
    out += k.name;
    out += '=';
    out += get(k.name);
    out += '\n';
  }
  return out;
}

std::string RunConfig::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunConfig::comment_line() const {
  std::string out = "# tapc " + get("command") + " fingerprint=" + fingerprint();
  for (const auto& k : config_schema()) {
    if (k.name == "command" || is_default(k.name)) continue;
    out += ' ';
    out += k.name;
    out += '=';
    out += get(k.name);
  }
  return out;
}

RunConfig parse_run_config(std::string_view text, std::string_view source) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key=value");
    const auto key = trim(body.substr(0, eq));
    try {
      cfg.set(key, body.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cfg;
}

}  // namespace tapc

// Command-line front end: every configuration key is also a flag
// (underscores become dashes). Values are applied in the order defaults,
// --config file, --profile, explicit flags.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "tapc/commands.hpp"
#include "tapc/data_io.hpp"
#include "tapc/error.hpp"

namespace {

std::string flag_name(std::string_view key) {
  std::string out(key);
  for (char& c : out)
    if (c == '_') c = '-';
  return out;
}

struct Invocation {
  std::string config_path;
  std::map<std::string, std::string> flags;
};

void add_command(CLI::App& app, const std::string& name, const std::string& help, Invocation& inv) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", inv.config_path, "key=value configuration file");
  for (const auto& key : tapc::config_schema()) {
    if (key.name == "command") continue;
    const std::string k(key.name);
    sub->add_option_function<std::string>(
        "--" + flag_name(key.name), [&inv, k](const std::string& v) { inv.flags[k] = v; }, std::string(key.help));
  }
}

int fail(std::string_view kind, std::string_view message, int code) {
  std::cerr << tapc::error_record(kind, message, code) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-aware PC causal discovery for time series"};
  app.require_subcommand(1);
  Invocation inv;
  add_command(app, "simulate", "generate a benchmark series as CSV", inv);
  add_command(app, "discover", "estimate a causal graph from a CSV series", inv);
  add_command(app, "evaluate", "score an estimated rolled graph against a truth graph", inv);
  add_command(app, "reproduce", "simulation sweep writing metrics tables", inv);
  add_command(app, "run", "execute the command named in --config", inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), tapc::exit_usage);
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    tapc::RunConfig cfg;
    if (!inv.config_path.empty()) {
      cfg = tapc::parse_run_config(tapc::read_text(inv.config_path), inv.config_path);
    }
    if (command != "run") cfg.set("command", command);
    if (cfg.get("command").empty()) throw tapc::ConfigError("run: the configuration names no command");
    if (const auto it = inv.flags.find("profile"); it != inv.flags.end()) cfg.apply_profile(it->second);
    else cfg.apply_profile(cfg.get("profile"));
    for (const auto& [key, value] : inv.flags) cfg.set(key, value);
    tapc::run_command(cfg, std::cout, std::cerr);
  } catch (const tapc::ConfigError& e) {
    return fail("config", e.what(), tapc::exit_usage);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), tapc::exit_runtime);
  }
  return tapc::exit_ok;
}

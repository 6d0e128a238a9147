#include "graftlab/cli.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using graftlab::cli::RunConfig;

constexpr const char* kKeys[] = {"ell",   "s",    "a",    "outer-bc", "modes",  "tol",
                                 "solver-tol", "seed", "configs", "amplitude", "field",
                                 "out",   "param", "from", "to",       "steps",  "t",
                                 "fd-step", "nodes", "kind"};

struct Flags {
  std::string config;
  std::map<std::string, std::string> values;
};

void add_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "key = value config file");
  for (const char* key : kKeys) {
    cmd->add_option(std::string("--") + key, flags.values[key], "overrides '" + std::string(key) + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graftlab: numerical lab for the grafted collar"};
  app.require_subcommand(1);
  Flags flags;
  using Command = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands{
      {"verify", "run the identity suite and write a JSON report", graftlab::cli::cmd_verify},
      {"sweep", "sweep one chart parameter and write CSV rows", graftlab::cli::cmd_sweep},
      {"geodesic", "compare the geodesic oracle with the closed-form variation",
       graftlab::cli::cmd_geodesic},
      {"chart", "dump the chart and its invariants as JSON", graftlab::cli::cmd_chart},
      {"modes", "dump hyperbolic profiles or spectral coefficients as CSV",
       graftlab::cli::cmd_modes}};
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_flags(sub, flags);
    subs.emplace_back(sub, fn);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? graftlab::cli::kExitPass : graftlab::cli::kExitConfig;
  }

  for (const auto& [sub, fn] : subs) {
    if (!sub->parsed()) continue;
    RunConfig config;
    try {
      if (!flags.config.empty()) config = graftlab::cli::load_config(flags.config);
      for (const char* key : kKeys) {
        if (sub->count(std::string("--") + key) > 0) {
          graftlab::cli::set_key(config, key, flags.values[key]);
        }
      }
      graftlab::cli::validate(config);
    } catch (const graftlab::cli::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return graftlab::cli::kExitConfig;
    }
    return fn(config, std::cout);
  }
  return graftlab::cli::kExitConfig;
}

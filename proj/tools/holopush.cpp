#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holopush/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"holopush: proper holomorphic maps from the disc into strongly pseudoconvex domains"};
  app.require_subcommand(1);

  std::string config, out, map, dir;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "run the pipeline and write a run directory");
  run->add_option("--config", config, "run config (JSON)")->required();
  run->add_option("--out", out, "output directory")->required();
  run->add_option("--set", overrides, "override a config entry, key.path=value")->take_all();

  auto* verify = app.add_subcommand("verify", "re-verify a stored map and print the report");
  verify->add_option("--map", map, "map dump (map.json of a run)")->required();
  verify->add_option("--config", config, "run config (JSON)")->required();

  auto* figures = app.add_subcommand("figures", "regenerate figures from a run directory");
  figures->add_option("--dir", dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : holopush::kExitStage;
  }

  if (*run) return holopush::cmd_run(config, out, overrides, std::cerr);
  if (*verify) return holopush::cmd_verify(map, config, std::cout, std::cerr);
  return holopush::cmd_figures(dir, std::cerr);
}

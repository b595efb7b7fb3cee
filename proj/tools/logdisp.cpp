#include <CLI11.hpp>
#include <iostream>

#include "logdisp/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"logdisp: numerical laboratory for logarithmic-Schrodinger dispersion"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a scenario from a config file");
  run->add_option("config", config_path, "config file path")->required();

  auto* selftest = app.add_subcommand("self-test", "run the full invariant suite");
  auto* list = app.add_subcommand("list-scenarios", "print known scenario names");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return logdisp::run_scenario(config_path);
  if (selftest->parsed()) return logdisp::self_test();
  if (list->parsed()) {
    for (const auto& name : logdisp::scenario_names()) std::cout << name << "\n";
    return 0;
  }
  return 1;
}

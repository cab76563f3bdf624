#include <iostream>

#include <CLI11.hpp>

#include "gradex/runner.hpp"

namespace {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const gradex::ConfigError*>(&e)) return 2;
  if (dynamic_cast<const gradex::GeometryError*>(&e)) return 3;
  if (dynamic_cast<const gradex::ModelError*>(&e)) return 3;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return 2;
  return 3;
}

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const gradex::ConfigError*>(&e)) return "config";
  if (dynamic_cast<const gradex::GeometryError*>(&e)) return "geometry";
  if (dynamic_cast<const gradex::ModelError*>(&e)) return "model";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "argument";
  return "internal";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gradex: gradient-constrained boundary extensions, anisotropic distances, and "
      "supremal level calibration on discretized domains"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  bool override_admissibility = false, json_errors = false;

  const std::vector<std::string> commands = {"support",    "distance", "extend",
                                             "uniqueness", "supremal", "verify"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "scenario JSON file")
        ->required(name != "verify");
    sub->add_option("--out", out_dir, "output directory (default: out)");
    sub->add_flag("--override-admissibility", override_admissibility,
                  "proceed with an inadmissible boundary datum");
    sub->add_flag("--json-errors", json_errors, "report errors as JSON on stdout");
  }

  CLI11_PARSE(app, argc, argv);
  std::string command = app.get_subcommands().front()->get_name();

  try {
    gradex::ScenarioConfig config;
    if (!config_path.empty()) {
      config = gradex::load_scenario_file(config_path);
    } else {
      // verify without a config runs the default suite on built-in scenarios
      config.field = gradex::presets::unit_ball_field();
    }
    gradex::RunOptions options;
    options.out_dir = out_dir;
    options.override_admissibility = override_admissibility;
    gradex::RunOutcome outcome = gradex::run_scenario(config, command, options);
    std::cout << outcome.report;
    return outcome.ok ? 0 : 1;
  } catch (const std::exception& e) {
    if (json_errors) {
      gradex::json j{{"error", {{"type", error_type(e)}, {"message", e.what()}}}};
      std::cout << j.dump() << std::endl;
    } else {
      std::cerr << "error: " << e.what() << std::endl;
    }
    return exit_code_for(e);
  }
}

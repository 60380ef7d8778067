// semilevy simulate|classify|skeleton|lln --config <file> --out <dir>

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "semilevy/semilevy.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Semi-Levy process simulation and recurrence classification"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  for (const char* name : {"simulate", "classify", "skeleton", "lln"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->required();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const std::string command_name = app.get_subcommands().front()->get_name();
  try {
    std::ifstream in(config_path, std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();
    semilevy::RunConfig cfg = semilevy::parse_config(text.str());
    const auto command = semilevy::parse_command(command_name);
    if (cfg.command && cfg.command != command) {
      std::cerr << "error: config requests command '" << semilevy::to_string(*cfg.command)
                << "' but '" << command_name << "' was invoked\n";
      return 1;
    }
    cfg.command = command;
    cfg.out = out_dir;
    const auto result = semilevy::run(cfg, out_dir);
    std::cout << result.summary << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return semilevy::exit_code_for(e);
  }
}

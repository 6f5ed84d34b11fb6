// Command-line front end: one subcommand per study, every config key as a flag.
#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <string>

#include "fnlw/commands.hpp"
#include "fnlw/config.hpp"

namespace {

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Wick-ordered fractional wave equation on the 2-torus"};
  app.require_subcommand(1);

  struct Parsed {
    std::string config_file;
    std::map<std::string, std::string> values;
  };
  std::map<std::string, Parsed> parsed;
  for (const std::string& name : fnlw::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    Parsed& p = parsed[name];
    sub->add_option("--config", p.config_file, "key = value file applied over the defaults")
        ->check(CLI::ExistingFile);
    for (const std::string& key : fnlw::RunConfig::keys()) {
      if (key == "version") continue;
      sub->add_option(flag_name(key), p.values[key])->type_name("VALUE");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const Parsed& p = parsed[command];
  try {
    fnlw::RunConfig config = fnlw::RunConfig::defaults(command);
    if (!p.config_file.empty()) config = fnlw::RunConfig::load_file(p.config_file, command, config);
    for (const auto& [key, value] : p.values)
      if (sub->count(flag_name(key)) > 0) config.set(key, value);
    const fnlw::CommandResult result = fnlw::run_command(command, config, std::cout);
    std::cout << command << ": " << (result.passed ? "passed" : "FAILED") << "\n";
    return result.passed ? 0 : 1;
  } catch (const fnlw::ConfigError& e) {
    std::cerr << "fnlw " << command << ": " << e.what() << "\nRun with --help for the list of flags.\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fnlw " << command << ": " << e.what() << "\n";
    return 1;
  }
}

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "subflow/error.hpp"
#include "subflow/parallel.hpp"
#include "subflow/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Convolution-type derivatives, subordinators and time-changed semigroups"};
  app.set_version_flag("--version", std::string(subflow::kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<unsigned> threads;
  app.add_option("--threads", threads, "Worker threads (default: SUBFLOW_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  auto commands = subflow::cli::register_commands(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (threads) {
    subflow::set_max_threads(*threads);
  } else if (const char* env = std::getenv("SUBFLOW_THREADS")) {
    try {
      subflow::set_max_threads(static_cast<unsigned>(std::stoul(env)));
    } catch (const std::exception&) {
      std::cerr << "subflow: ConfigError: SUBFLOW_THREADS must be a positive integer\n";
      return 2;
    }
  }

  try {
    for (auto& c : commands) {
      if (c.app->parsed()) return c.run();
    }
  } catch (const subflow::Error& e) {
    std::cerr << "subflow: " << e.what() << '\n';
    return subflow::is_numerical(e.kind()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "subflow: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

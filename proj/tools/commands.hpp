#pragma once

#include <functional>
#include <vector>

#include "CLI11.hpp"

namespace subflow::cli {

struct Command {
  CLI::App* app = nullptr;
  std::function<int()> run;
};

/// Adds every subcommand to `app`; the returned handlers run after parsing.
std::vector<Command> register_commands(CLI::App& app);

}  // namespace subflow::cli

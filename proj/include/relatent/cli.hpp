#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relatent/latent.hpp"
#include "relatent/synthetic.hpp"

namespace relatent {

enum ExitCode : int { exit_ok = 0, exit_parse_error = 2, exit_config_error = 3, exit_runtime_error = 4 };

enum class Command { generate, learn, explain, analyze, sweep };

struct RunConfig {
  Command command = Command::learn;
  std::filesystem::path schema;
  std::filesystem::path facts;
  std::filesystem::path interps;
  std::filesystem::path out;
  std::vector<std::size_t> depths;
  double theta = 0.3;
  std::optional<double> alpha;
  std::vector<double> alphas{0.9, 0.8, 0.7, 0.6, 0.5};
  KPolicy k;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_fanout;
  bool print = false;
  SyntheticSpec synthetic;  // generate only

  // Throws ConfigError when a required value is missing or out of range.
  void validate() const;
};

// Executes one command; every artifact goes to config.out. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (args[0] is the program name) and runs the command.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relatent

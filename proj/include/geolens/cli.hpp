#pragma once

#include <iosfwd>
#include <string>

#include "geolens/config.hpp"

namespace geolens {

// Exit-code contract of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitClaimFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInternalError = 3;

// Writes `content` to a temporary sibling and renames it over `path`.
// Throws ConfigError when the location is not writable.
void write_file_atomically(const std::string& path, const std::string& content);

// Subcommands. They return an exit code and throw ConfigError or
// PreconditionError for invalid input; nothing is written in that case.
int cmd_profile(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, bool expect_counterexample, std::ostream& out);
int cmd_radii(const RunConfig& config, std::ostream& out);
int cmd_counterexample(const RunConfig& config, std::ostream& out);
int cmd_speculate(const RunConfig& config, std::ostream& out);

// Parses arguments (subcommand, --config, --seed, --grid, --budget, --out,
// --expect-counterexample), dispatches and maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geolens

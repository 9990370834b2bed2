#pragma once

// Command-line front end. Every command writes results to `out` and
// diagnostics to `err` and returns one of the stable exit codes below.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rlml::cli {

enum class ExitCode : int {
  Ok = 0,
  ValidationFailed = 1,
  ParseFailed = 2,
  UsageError = 3,
  IoError = 4,
};

enum class Format { Text, Structured };

struct ValidateOptions {
  std::string path;
  std::optional<std::string> env_file;
};

struct RunOptions {
  std::string path;
  std::uint64_t seed = 0;
  std::optional<std::string> env_file;
  std::optional<std::string> save;
  std::optional<std::string> resume;  // continue training from a saved model
  std::optional<std::string> returns_csv;
  Format format = Format::Text;
};

struct CompareOptions {
  std::string path;
  std::uint64_t seed = 0;
  std::optional<std::string> env_file;
  std::optional<std::string> returns_csv_dir;
  Format format = Format::Text;
  bool sequential = false;
};

struct GenOptions {
  std::string path;
  std::string target;
  std::string out_dir = ".";
  std::optional<std::string> env_file;
};

struct RolloutOptions {
  std::string path;
  std::string saved_model;
  std::string start;
  std::optional<std::string> env_file;
};

ExitCode cmd_validate(const ValidateOptions& opts, std::ostream& out, std::ostream& err);
ExitCode cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
ExitCode cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err);
ExitCode cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err);
ExitCode cmd_rollout(const RolloutOptions& opts, std::ostream& out, std::ostream& err);

// Parses `args` (args[0] is the program name) and dispatches.
// `--seed` accepts an unsigned integer or `random`; it defaults to 0.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlml::cli

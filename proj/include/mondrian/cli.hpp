#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mondrian::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBudget = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConsistency = 3;

enum class Command { Solve, Perfect, Census, Rough, Chain, VerifyOeis };
enum class OutputFormat { Text, Json, Csv };

struct RunConfig {
  Command command = Command::Solve;
  std::optional<std::uint64_t> n;
  std::vector<std::uint64_t> x;  // census accepts a comma-separated list of checkpoints
  std::optional<std::uint64_t> z;
  std::optional<std::int64_t> from;
  std::optional<std::int64_t> to;
  std::uint64_t node_budget = 100'000'000;
  OutputFormat format = OutputFormat::Text;
  std::optional<std::string> output_path;
  int workers = 1;
  std::optional<std::string> bfile;
};

/// Bad command line. Carries the text to print on stderr.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was requested; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// argv without the program name. env_threads stands in for the
/// MONDRIAN_THREADS variable, which sets the worker count unless --workers
/// is given.
RunConfig parse_args(const std::vector<std::string>& args,
                     const std::optional<std::string>& env_threads);

/// Reads MONDRIAN_THREADS from the environment.
RunConfig parse_args(const std::vector<std::string>& args);

/// Runs the command. Results go to `out` (or --out), diagnostics to `err`.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + dispatch with exit statuses 0/1/2/3.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mondrian::cli

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hlsr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitLintFail = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitError = 3;
inline constexpr int kExitDrift = 4;

/// Flags shared by every subcommand; unset fields leave the config alone.
struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> llm;
  std::optional<std::string> cc;
  std::optional<std::string> synthesis;
  std::optional<std::string> out;
  std::optional<std::string> corpus;
  bool json = false;
};

struct LintFlags {
  std::string path;
  std::vector<std::string> rules;  // empty: all
  bool json = false;
};

struct RunFlags {
  CommonFlags common;
  std::string input;
  std::string top;
  std::optional<std::string> plan;
  std::optional<std::string> plan_file;
  std::optional<std::string> mock;
  std::optional<std::string> equiv;
  std::optional<std::string> prelude;
  std::optional<unsigned long long> seed;
};

struct BenchFlags {
  CommonFlags common;
  std::optional<std::vector<std::string>> entries;  // absent: every hands-free entry
  bool mock = false;
  std::optional<unsigned long long> seed;
  int jobs = 1;
};

struct ReplayFlags {
  CommonFlags common;
  std::string session;
};

int cmd_lint(const LintFlags& f, std::ostream& out, std::ostream& err);
int cmd_run(const RunFlags& f, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchFlags& f, std::ostream& out, std::ostream& err);
int cmd_replay(const ReplayFlags& f, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hlsr::cli

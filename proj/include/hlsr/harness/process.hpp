#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlsr::harness {

class ToolMissing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProcessOptions {
  std::string cwd;         // empty = inherit
  double timeout = 20.0;   // seconds; the whole process group is killed on expiry
  std::size_t max_output = 8u << 20;  // per stream, excess is dropped
};

struct ProcessResult {
  int exit_code = -1;  // valid when !signaled && !timed_out
  bool signaled = false;
  int signal = 0;
  bool timed_out = false;
  std::string out;
  std::string err;
  bool ok() const { return !signaled && !timed_out && exit_code == 0; }
};

/// Searches PATH unless `name` contains a slash.
std::optional<std::string> resolve_executable(const std::string& name);

/// Whitespace split with single/double quote grouping.
std::vector<std::string> split_command(const std::string& cmd);

/// Throws ToolMissing when argv[0] cannot be resolved.
ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& opts = {});

}  // namespace hlsr::harness

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hlsr/harness/harness.hpp"
#include "hlsr/lint/lint.hpp"
#include "hlsr/prompt/render.hpp"

namespace hlsr::orch {

using prompt::ErrorClass;

/// Result of one failed (or passed) check, as produced by its tool.
struct CheckOutcome {
  enum class Stage { Compile, Equivalence, Lint, ExternalHls };
  Stage stage = Stage::Compile;
  bool passed = false;
  std::string tool_output;
  std::vector<lint::RuleId> blocking_rules;  // Lint stage
};

/// Compile -> Compile; Equivalence (mismatch, crash, timeout) -> Functional;
/// Lint or external HLS -> Synthesis.
ErrorClass classify(const CheckOutcome& outcome);

struct SynthesisMode {
  bool external = false;
  std::string command;  // run as `<command> <candidate file>`
};

/// "builtin" or "external:<cmd>". Throws std::invalid_argument.
SynthesisMode parse_synthesis_mode(const std::string& text);
std::string to_string(const SynthesisMode& m);

struct SynthesisResult {
  bool ok = false;
  std::string details;
  std::optional<lint::LintReport> report;  // always present unless the checker could not parse the code
  bool fell_back = false;                  // external tool missing, builtin verdict used
  std::string warning;
};

/// Lints the candidate; in external mode also runs the tool, whose exit status
/// decides `ok`. A missing tool falls back to the lint gate with a warning.
SynthesisResult synthesis_check(const std::string& candidate, const SynthesisMode& mode, double timeout = 60.0,
                                const std::string& scratch_dir = {});

/// Blocking rule kinds in a report, sorted and unique.
std::vector<lint::RuleId> blocking_rules(const lint::LintReport& report);

/// 1-based candidate line numbers cited by compiler diagnostics for `file`.
std::vector<int> diagnostic_lines(const std::string& diagnostics, const std::string& file = "candidate.c");

}  // namespace hlsr::orch

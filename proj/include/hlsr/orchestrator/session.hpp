#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hlsr/prompt/plan.hpp"
#include "hlsr/prompt/render.hpp"

namespace hlsr::orch {

using prompt::ErrorClass;

enum class SessionStatus { Succeeded, FailedBudget, FailedError };
std::string_view to_string(SessionStatus s);
std::optional<SessionStatus> parse_status(std::string_view s);

enum class IterationKind { Step, Repair, Test };
std::string_view to_string(IterationKind k);

struct IterationRecord {
  std::string step_id;
  IterationKind kind = IterationKind::Step;
  int attempt = 0;  // repair attempt within the step, 0 for forward prompts
  std::string prompt;
  std::string response;
  std::vector<std::string> alternatives;  // further sampled responses, in order
  std::optional<std::string> candidate;
  bool compile_ok = false;
  std::optional<bool> functional_ok;
  std::optional<bool> synthesis_ok;
  std::optional<ErrorClass> error_class;
  std::string diagnostics;
  std::vector<std::string> blocking_rules;
  double duration = 0;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

/// Verdicts on final_code, re-checked by replay.
struct FinalVerdict {
  bool compile_ok = false;
  bool equivalence_passed = false;
  long vectors_run = 0;
  bool lint_gate = false;
  std::vector<std::string> blocking_rules;
  friend bool operator==(const FinalVerdict&, const FinalVerdict&) = default;
};

struct Session {
  std::string id;
  std::string input_path;  // where the input was read from, if a file
  std::string input_source;
  nlohmann::json equivalence;  // the EquivalenceSpec used
  std::string prelude;
  std::string top_function;
  prompt::TransformPlan plan;
  std::vector<IterationRecord> iterations;
  SessionStatus status = SessionStatus::FailedError;
  std::optional<std::string> final_code;  // Succeeded: the result; FailedBudget: best candidate
  int prompt_count = 0;
  std::optional<FinalVerdict> verdict;
  std::string error;
  std::vector<std::string> warnings;
};

nlohmann::json to_json(const IterationRecord& r);
IterationRecord iteration_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Session& s);
/// Throws std::invalid_argument on malformed input.
Session session_from_json(const nlohmann::json& j);

}  // namespace hlsr::orch

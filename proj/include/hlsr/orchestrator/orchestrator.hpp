#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "hlsr/harness/harness.hpp"
#include "hlsr/llm/client.hpp"
#include "hlsr/orchestrator/checks.hpp"
#include "hlsr/orchestrator/session.hpp"
#include "hlsr/prompt/plan.hpp"

namespace hlsr::orch {

/// The session cannot start: bad input, unknown top function, bad config.
class SessionSetupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Budgets {
  int max_repairs_per_step = 5;
  int max_total_prompts = 30;
  double per_check_timeout = 20.0;
  /// Throws SessionSetupError.
  void validate() const;
};

struct SessionConfig {
  llm::ModelConfig model;
  Budgets budgets;
  std::shared_ptr<llm::ChatBackend> backend;
  std::shared_ptr<harness::Harness> harness;
  harness::EquivalenceSpec spec;
  std::string prelude;
  SynthesisMode synthesis;
  std::function<double()> clock;  // seconds; empty = steady clock
  std::string session_id;         // empty = derived from top function and input
  std::string input_path;
  std::map<std::string, std::string> hints;  // step id -> human hint for its repairs
};

/// Runs the plan with the compile -> equivalence -> lint double loop and
/// bounded repairs. Throws SessionSetupError before any prompt is sent;
/// every later failure is reported through Session::status.
Session run_session(const std::string& source, const std::string& top, const prompt::TransformPlan& plan,
                    const SessionConfig& cfg);

/// Compiles `code` against `source`, runs the equivalence harness and the
/// lint gate. Harness setup failures propagate.
FinalVerdict verify(const std::string& source, const std::string& code, const harness::EquivalenceSpec& spec,
                    const std::string& prelude, harness::Harness& h);

}  // namespace hlsr::orch

#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hlsr/lint/lint.hpp"

namespace hlsr::prompt {

using lint::RuleId;

enum class PlanKind { Streaming, Desoftware, LoopArray, Minimal };

std::string_view to_string(PlanKind k);
std::optional<PlanKind> parse_plan_kind(std::string_view s);

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TransformStep {
  std::string id;
  std::string goal;
  std::string template_text;
  std::set<RuleId> expected_effect;
  bool produces_test = false;
  int alternatives = 1;  // responses sampled per prompt; the first passing one is kept
};

struct TransformPlan {
  PlanKind kind = PlanKind::Minimal;
  std::vector<TransformStep> steps;

  const TransformStep* find(std::string_view id) const;
  /// The plan's Repair step, or a built-in repair step when the plan has none.
  const TransformStep& repair_step() const;
};

struct PlanOptions {
  bool offline_math_script = false;  // OfflineMath also asks for a script computing constants
};

inline constexpr std::string_view kTaskIntro = "TaskIntro";
inline constexpr std::string_view kRepair = "Repair";

/// Exactly the three built-in methodologies: Streaming, Desoftware, LoopArray.
std::map<PlanKind, TransformPlan> builtin_plans(const PlanOptions& opts = {});
TransformPlan minimal_plan();
TransformPlan builtin_plan(PlanKind kind, const PlanOptions& opts = {});

/// Throws PlanError when the plan breaks an invariant.
void validate(const TransformPlan& plan);

nlohmann::json to_json(const TransformPlan& plan);
TransformPlan plan_from_json(const nlohmann::json& j);
TransformPlan load_plan_file(const std::string& path);

/// Picks a plan from lint findings. `unit` supplies loop facts for the
/// streaming pattern (an unbounded loop that scans a global array).
TransformPlan select_plan(const lint::LintReport& report, std::optional<PlanKind> override_kind,
                          const lint::SourceUnit* unit = nullptr, const PlanOptions& opts = {});

}  // namespace hlsr::prompt

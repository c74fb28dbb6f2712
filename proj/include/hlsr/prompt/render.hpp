#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hlsr/prompt/plan.hpp"

namespace hlsr::prompt {

enum class ErrorClass { Compile, Functional, Synthesis };

std::string_view to_string(ErrorClass c);
std::optional<ErrorClass> parse_error_class(std::string_view s);

class MissingPlaceholder : public std::runtime_error {
 public:
  explicit MissingPlaceholder(const std::string& name)
      : std::runtime_error("template placeholder {" + name + "} cannot be resolved"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

struct RepairContext {
  ErrorClass error_class = ErrorClass::Compile;
  std::string message;
  std::vector<int> affected_lines;  // 1-based lines of the code being repaired
  std::optional<std::string> hint;  // human-authored, wins over the built-in hint
  std::optional<RuleId> rule;       // Synthesis failures: the first blocking rule
};

/// Placeholders: {code}, {function}, {context}. `{{` and `}}` are literal braces.
std::string render_template(std::string_view tmpl, std::string_view code, std::optional<std::string_view> function,
                            std::optional<std::string_view> context);

std::string render_prompt(const TransformStep& step, std::string_view code, std::optional<std::string_view> context,
                          std::optional<std::string_view> function = std::nullopt);

/// attempt 1: error only; 2: adds the affected lines; 3+: adds a hint.
std::string render_repair(const TransformStep& repair_step, const RepairContext& ctx, std::string_view code,
                          int attempt, std::optional<std::string_view> function = std::nullopt);

/// Built-in fallback hint for a failure.
std::string default_hint(const RepairContext& ctx);

/// Placeholder names used by a template, in order of first use.
std::vector<std::string> placeholders(std::string_view tmpl);

}  // namespace hlsr::prompt

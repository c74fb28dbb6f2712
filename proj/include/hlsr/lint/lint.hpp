#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hlsr/lint/source_unit.hpp"

namespace hlsr::lint {

enum class RuleId { Recur, DynMem, PtrParam, Vla, Loop, Io, FnPtr, Math };

enum class Severity { Blocking, Advisory };

std::string_view to_string(RuleId r);
std::optional<RuleId> parse_rule(std::string_view s);
const std::set<RuleId>& all_rules();

struct Violation {
  RuleId rule = RuleId::Recur;
  std::string function;  // "<global>" for file-scope findings
  SourceLoc loc;
  std::string detail;
  Severity severity = Severity::Blocking;
};

struct LintReport {
  std::vector<Violation> violations;
  std::vector<Note> notes;

  bool gate() const;
  std::size_t blocking_count() const;
  bool has(RuleId r, bool blocking_only = false) const;
};

/// Never throws. `rules` selects which checks run.
LintReport lint(const SourceUnit& unit, const std::set<RuleId>& rules = all_rules());

std::string format_text(const LintReport& report, std::string_view path);
std::string format_json(const LintReport& report);

}  // namespace hlsr::lint

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hlsr/orchestrator/session.hpp"

namespace hlsr::cli {

struct ReportRow {
  std::string name;
  int prompt_count = 0;
  std::string status;                     // Succeeded | FailedBudget | FailedError
  std::optional<bool> equivalence_passed;  // absent: never verified
  std::optional<bool> lint_gate;
  std::optional<int> expected_prompts;
  std::string error;
};

struct RunReport {
  std::vector<ReportRow> rows;

  int total_prompts() const;
  int count(const std::string& status) const;
};

ReportRow row_from_session(const std::string& name, const orch::Session& s);

inline constexpr const char* kNoHls = "n/a (requires external HLS)";

std::string to_markdown(const RunReport& r);
std::string to_csv(const RunReport& r);
nlohmann::json to_json(const RunReport& r);

}  // namespace hlsr::cli

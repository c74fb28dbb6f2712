#include "hlsr/cli/report.hpp"

#include <sstream>

namespace hlsr::cli {

namespace {

std::string tri(const std::optional<bool>& b) {
  if (!b) return "n/a";
  return *b ? "pass" : "fail";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

}  // namespace

int RunReport::total_prompts() const {
  int n = 0;
  for (const auto& r : rows) n += r.prompt_count;
  return n;
}

int RunReport::count(const std::string& status) const {
  int n = 0;
  for (const auto& r : rows) n += r.status == status;
  return n;
}

ReportRow row_from_session(const std::string& name, const orch::Session& s) {
  ReportRow r;
  r.name = name;
  r.prompt_count = s.prompt_count;
  r.status = std::string(orch::to_string(s.status));
  if (s.verdict) {
    r.equivalence_passed = s.verdict->equivalence_passed;
    r.lint_gate = s.verdict->lint_gate;
  }
  r.error = s.error;
  return r;
}

std::string to_markdown(const RunReport& r) {
  std::ostringstream o;
  o << "| Design | #Prompts | Status | Equivalence | LintGate | Area | Latency |\n";
  o << "|---|---:|---|---|---|---|---|\n";
  for (const auto& row : r.rows)
    o << "| " << md_cell(row.name) << " | " << row.prompt_count << " | " << row.status << " | "
      << tri(row.equivalence_passed) << " | " << tri(row.lint_gate) << " | " << kNoHls << " | " << kNoHls << " |\n";
  int eq = 0, gate = 0;
  for (const auto& row : r.rows) {
    eq += row.equivalence_passed.value_or(false);
    gate += row.lint_gate.value_or(false);
  }
  o << "| **Total** | " << r.total_prompts() << " | " << r.count("Succeeded") << "/" << r.rows.size()
    << " succeeded | " << eq << "/" << r.rows.size() << " | " << gate << "/" << r.rows.size() << " | | |\n";
  bool any_error = false;
  for (const auto& row : r.rows) any_error = any_error || !row.error.empty();
  if (any_error) {
    o << "\n";
    for (const auto& row : r.rows)
      if (!row.error.empty()) o << "- " << row.name << ": " << md_cell(row.error) << "\n";
  }
  return o.str();
}

std::string to_csv(const RunReport& r) {
  std::ostringstream o;
  o << "Design,#Prompts,Status,Equivalence,LintGate,Area,Latency\n";
  for (const auto& row : r.rows)
    o << csv_field(row.name) << "," << row.prompt_count << "," << row.status << "," << tri(row.equivalence_passed)
      << "," << tri(row.lint_gate) << "," << kNoHls << "," << kNoHls << "\n";
  o << "Total," << r.total_prompts() << "," << r.count("Succeeded") << "/" << r.rows.size() << " succeeded,,,,\n";
  return o.str();
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json j = {{"name", row.name}, {"prompt_count", row.prompt_count}, {"status", row.status}};
    j["equivalence_passed"] = row.equivalence_passed ? nlohmann::json(*row.equivalence_passed) : nlohmann::json();
    j["lint_gate"] = row.lint_gate ? nlohmann::json(*row.lint_gate) : nlohmann::json();
    j["area"] = kNoHls;
    j["latency"] = kNoHls;
    if (row.expected_prompts) j["expected_prompts"] = *row.expected_prompts;
    if (!row.error.empty()) j["error"] = row.error;
    rows.push_back(j);
  }
  return {{"rows", rows},
          {"totals",
           {{"entries", r.rows.size()},
            {"prompts", r.total_prompts()},
            {"succeeded", r.count("Succeeded")},
            {"failed_budget", r.count("FailedBudget")},
            {"failed_error", r.count("FailedError")}}}};
}

}  // namespace hlsr::cli

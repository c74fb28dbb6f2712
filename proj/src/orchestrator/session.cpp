#include "hlsr/orchestrator/session.hpp"

#include <stdexcept>

namespace hlsr::orch {

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::Succeeded: return "Succeeded";
    case SessionStatus::FailedBudget: return "FailedBudget";
    case SessionStatus::FailedError: return "FailedError";
  }
  return "FailedError";
}

std::optional<SessionStatus> parse_status(std::string_view s) {
  for (auto st : {SessionStatus::Succeeded, SessionStatus::FailedBudget, SessionStatus::FailedError})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

std::string_view to_string(IterationKind k) {
  switch (k) {
    case IterationKind::Step: return "step";
    case IterationKind::Repair: return "repair";
    case IterationKind::Test: return "test";
  }
  return "step";
}

namespace {

IterationKind parse_kind(const std::string& s) {
  for (auto k : {IterationKind::Step, IterationKind::Repair, IterationKind::Test})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown iteration kind '" + s + "'");
}

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> get_opt(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

nlohmann::json to_json(const IterationRecord& r) {
  return {{"step_id", r.step_id},
          {"kind", to_string(r.kind)},
          {"attempt", r.attempt},
          {"prompt", r.prompt},
          {"response", r.response},
          {"alternatives", r.alternatives},
          {"candidate", opt(r.candidate)},
          {"compile_ok", r.compile_ok},
          {"functional_ok", opt(r.functional_ok)},
          {"synthesis_ok", opt(r.synthesis_ok)},
          {"error_class", r.error_class ? nlohmann::json(std::string(prompt::to_string(*r.error_class)))
                                        : nlohmann::json(nullptr)},
          {"diagnostics", r.diagnostics},
          {"blocking_rules", r.blocking_rules},
          {"duration", r.duration}};
}

IterationRecord iteration_from_json(const nlohmann::json& j) {
  IterationRecord r;
  r.step_id = j.at("step_id").get<std::string>();
  r.kind = parse_kind(j.at("kind").get<std::string>());
  r.attempt = j.at("attempt").get<int>();
  r.prompt = j.at("prompt").get<std::string>();
  r.response = j.at("response").get<std::string>();
  r.alternatives = j.value("alternatives", std::vector<std::string>{});
  r.candidate = get_opt<std::string>(j, "candidate");
  r.compile_ok = j.at("compile_ok").get<bool>();
  r.functional_ok = get_opt<bool>(j, "functional_ok");
  r.synthesis_ok = get_opt<bool>(j, "synthesis_ok");
  if (auto ec = get_opt<std::string>(j, "error_class")) {
    r.error_class = prompt::parse_error_class(*ec);
    if (!r.error_class) throw std::invalid_argument("unknown error class '" + *ec + "'");
  }
  r.diagnostics = j.value("diagnostics", "");
  r.blocking_rules = j.value("blocking_rules", std::vector<std::string>{});
  r.duration = j.value("duration", 0.0);
  return r;
}

nlohmann::json to_json(const Session& s) {
  nlohmann::json its = nlohmann::json::array();
  for (const auto& r : s.iterations) its.push_back(to_json(r));
  nlohmann::json verdict = nullptr;
  if (s.verdict)
    verdict = {{"compile_ok", s.verdict->compile_ok},
               {"equivalence_passed", s.verdict->equivalence_passed},
               {"vectors_run", s.verdict->vectors_run},
               {"lint_gate", s.verdict->lint_gate},
               {"blocking_rules", s.verdict->blocking_rules}};
  return {{"id", s.id},
          {"input_path", s.input_path},
          {"input", s.input_source},
          {"equivalence", s.equivalence},
          {"prelude", s.prelude},
          {"top", s.top_function},
          {"plan_kind", std::string(prompt::to_string(s.plan.kind))},
          {"plan", prompt::to_json(s.plan)},
          {"iterations", its},
          {"status", std::string(to_string(s.status))},
          {"prompt_count", s.prompt_count},
          {"final_code", opt(s.final_code)},
          {"verdict", verdict},
          {"error", s.error},
          {"warnings", s.warnings}};
}

Session session_from_json(const nlohmann::json& j) {
  try {
    Session s;
    s.id = j.at("id").get<std::string>();
    s.input_path = j.value("input_path", "");
    s.input_source = j.at("input").get<std::string>();
    s.equivalence = j.value("equivalence", nlohmann::json(nullptr));
    s.prelude = j.value("prelude", "");
    s.top_function = j.at("top").get<std::string>();
    s.plan = prompt::plan_from_json(j.at("plan"));
    for (const auto& r : j.at("iterations")) s.iterations.push_back(iteration_from_json(r));
    auto st = parse_status(j.at("status").get<std::string>());
    if (!st) throw std::invalid_argument("unknown status " + j.at("status").dump());
    s.status = *st;
    s.prompt_count = j.at("prompt_count").get<int>();
    s.final_code = get_opt<std::string>(j, "final_code");
    if (j.contains("verdict") && !j.at("verdict").is_null()) {
      const auto& v = j.at("verdict");
      FinalVerdict f;
      f.compile_ok = v.at("compile_ok").get<bool>();
      f.equivalence_passed = v.at("equivalence_passed").get<bool>();
      f.vectors_run = v.at("vectors_run").get<long>();
      f.lint_gate = v.at("lint_gate").get<bool>();
      f.blocking_rules = v.at("blocking_rules").get<std::vector<std::string>>();
      s.verdict = f;
    }
    s.error = j.value("error", "");
    s.warnings = j.value("warnings", std::vector<std::string>{});
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed session: ") + e.what());
  } catch (const prompt::PlanError& e) {
    throw std::invalid_argument(std::string("malformed session plan: ") + e.what());
  }
}

}  // namespace hlsr::orch

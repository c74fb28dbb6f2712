#include "hlsr/orchestrator/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "hlsr/llm/conversation.hpp"
#include "hlsr/lint/lexer.hpp"
#include "hlsr/lint/source_unit.hpp"
#include "hlsr/prompt/extract.hpp"
#include "hlsr/prompt/render.hpp"

namespace hlsr::orch {

void Budgets::validate() const {
  if (max_repairs_per_step < 1) throw SessionSetupError("max_repairs_per_step must be positive");
  if (max_total_prompts < 1) throw SessionSetupError("max_total_prompts must be positive");
  if (max_total_prompts < max_repairs_per_step)
    throw SessionSetupError("max_total_prompts must be at least max_repairs_per_step");
  if (!(per_check_timeout > 0)) throw SessionSetupError("per_check_timeout must be positive");
}

namespace {

using lint::RuleId;

std::vector<std::string> rule_names(const std::vector<RuleId>& rules) {
  std::vector<std::string> out;
  for (RuleId r : rules) out.emplace_back(lint::to_string(r));
  return out;
}

std::string short_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08llx", static_cast<unsigned long long>(h >> 32));
  return buf;
}

std::string head(const std::string& text, std::size_t max_lines) {
  std::istringstream in(text);
  std::string line, out;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (n++ == max_lines) {
      out += "...\n";
      break;
    }
    out += line + "\n";
  }
  return out;
}

std::string findings(const lint::LintReport& report) {
  std::ostringstream os;
  bool any = false;
  for (const auto& v : report.violations) {
    if (v.severity != lint::Severity::Blocking) continue;
    if (!any) os << "An HLS compatibility check reports:\n";
    any = true;
    os << "- line " << v.loc.line << ": " << v.detail << " (" << v.function << ")\n";
  }
  return os.str();
}

// Everything learned about one candidate.
struct Evaluation {
  std::optional<std::string> code;
  bool compile_ok = false;
  std::optional<bool> functional_ok;
  std::optional<bool> synthesis_ok;
  std::optional<ErrorClass> error_class;
  std::string diagnostics;
  prompt::RepairContext repair;
  std::vector<RuleId> blocking;
  std::optional<harness::EquivalenceReport> equivalence;
  bool accepted = false;
  bool success = false;
};

class SessionRunner {
 public:
  SessionRunner(const std::string& source, const std::string& top, const prompt::TransformPlan& plan,
                const SessionConfig& cfg)
      : source_(source), top_(top), plan_(plan), cfg_(cfg), mode_(cfg.synthesis) {}

  Session run();

 private:
  double now() const {
    if (cfg_.clock) return cfg_.clock();
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
  }

  Evaluation evaluate(const std::string& response, const std::set<RuleId>& targets);
  void consider_best(const Evaluation& e);
  // Sends one prompt and evaluates the answers; returns the chosen evaluation.
  Evaluation exchange(const std::string& step_id, IterationKind kind, int attempt, const std::string& prompt_text,
                      const std::vector<std::string>& keys, int alternatives, const std::set<RuleId>& targets);
  bool budget_left() const { return static_cast<int>(session_.iterations.size()) < cfg_.budgets.max_total_prompts; }

  const std::string& source_;
  const std::string& top_;
  const prompt::TransformPlan& plan_;
  const SessionConfig& cfg_;
  SynthesisMode mode_;

  Session session_;
  llm::Conversation conv_;
  std::string current_code_;
  std::vector<RuleId> current_blocking_;
  std::optional<std::pair<std::string, std::pair<int, bool>>> best_;  // code, (blocking count, compiled)
  std::optional<Evaluation> success_eval_;
};

Evaluation SessionRunner::evaluate(const std::string& response, const std::set<RuleId>& targets) {
  Evaluation e;
  try {
    e.code = prompt::extract_code(response).text;
  } catch (const prompt::NoCodeFound&) {
    e.error_class = ErrorClass::Compile;
    e.diagnostics = "The answer does not contain any C code.";
    e.repair.error_class = ErrorClass::Compile;
    e.repair.message = "Your answer did not contain the code. Reply with the complete code in a single ```c block.";
    return e;
  }

  // Compile leg.
  auto build = cfg_.harness->build(cfg_.spec, source_, *e.code, cfg_.prelude);
  e.compile_ok = build.ok;
  if (!build.ok) {
    e.error_class = classify({CheckOutcome::Stage::Compile, false, build.diagnostics, {}});
    e.diagnostics = head(build.diagnostics, 30);
    e.repair.error_class = *e.error_class;
    e.repair.message = "The code does not compile:\n" + e.diagnostics;
    e.repair.affected_lines = diagnostic_lines(build.diagnostics);
    return e;
  }

  // Functional leg.
  auto rep = cfg_.harness->run_equivalence(build, cfg_.spec);
  e.equivalence = rep;
  e.functional_ok = rep.passed;
  if (!rep.passed) {
    const auto& cx = *rep.counterexample;
    e.error_class = classify({CheckOutcome::Stage::Equivalence, false, rep.detail, {}});
    std::ostringstream os;
    os << "The new code does not behave like the original (" << rep.detail << ").\n";
    std::string input = cx.input;
    if (auto sp = input.find(' '); sp != std::string::npos) {
      if (auto sp2 = input.find(' ', sp + 1); sp2 != std::string::npos) input = input.substr(sp2 + 1);
    }
    os << "Input: " << input << "\n";
    os << "Original result: " << cx.original << "\n";
    os << "New result: " << cx.candidate << "\n";
    e.diagnostics = os.str();
    e.repair.error_class = *e.error_class;
    e.repair.message = e.diagnostics;
    return e;
  }

  // Synthesis leg.
  auto syn = synthesis_check(*e.code, mode_, cfg_.budgets.per_check_timeout, cfg_.harness->scratch_dir());
  if (syn.fell_back) {
    session_.warnings.push_back(syn.warning);
    mode_ = SynthesisMode{};
  }
  e.synthesis_ok = syn.ok;
  std::vector<RuleId> offending;
  if (syn.report) {
    e.blocking = blocking_rules(*syn.report);
    for (RuleId r : e.blocking) {
      bool target = targets.count(r) > 0;
      bool fresh = std::find(current_blocking_.begin(), current_blocking_.end(), r) == current_blocking_.end();
      if (target || fresh) offending.push_back(r);
    }
  }
  bool unparsable = !syn.report;
  e.accepted = offending.empty() && !unparsable;
  e.success = e.accepted && syn.ok;
  if (!e.accepted || !syn.ok) {
    e.error_class = classify({mode_.external ? CheckOutcome::Stage::ExternalHls : CheckOutcome::Stage::Lint, false,
                              syn.details, offending});
  }
  if (!e.accepted) {
    std::ostringstream os;
    if (unparsable) {
      os << syn.details << "\n";
    } else {
      os << "The code is not synthesizable:\n";
      for (const auto& v : syn.report->violations) {
        if (v.severity != lint::Severity::Blocking) continue;
        if (std::find(offending.begin(), offending.end(), v.rule) == offending.end()) continue;
        os << "line " << v.loc.line << ": [" << lint::to_string(v.rule) << "] " << v.function << ": " << v.detail
           << "\n";
        e.repair.affected_lines.push_back(v.loc.line);
      }
      e.repair.rule = offending.front();
    }
    e.diagnostics = os.str();
    e.repair.error_class = ErrorClass::Synthesis;
    e.repair.message = e.diagnostics;
  } else if (!syn.ok) {
    e.diagnostics = syn.details;
  }
  return e;
}

void SessionRunner::consider_best(const Evaluation& e) {
  if (!e.code) return;
  int blocking = std::numeric_limits<int>::max();
  try {
    blocking = static_cast<int>(lint::lint(lint::parse_c(*e.code, "candidate.c")).blocking_count());
  } catch (const lint::SyntaxError&) {
  }
  std::pair<int, bool> key{blocking, e.compile_ok};
  auto better = [](const std::pair<int, bool>& a, const std::pair<int, bool>& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second && !b.second;
  };
  if (!best_ || !better(best_->second, key)) best_ = {*e.code, key};
}

Evaluation SessionRunner::exchange(const std::string& step_id, IterationKind kind, int attempt,
                                   const std::string& prompt_text, const std::vector<std::string>& keys,
                                   int alternatives, const std::set<RuleId>& targets) {
  double started = now();
  IterationRecord rec;
  rec.step_id = step_id;
  rec.kind = kind;
  rec.attempt = attempt;
  rec.prompt = prompt_text;
  conv_.append(llm::Role::User, prompt_text);

  std::vector<llm::Message> answers;
  try {
    llm::RequestMeta meta{keys};
    answers = cfg_.backend->sample_alternatives(conv_, cfg_.model, meta, std::max(1, alternatives));
  } catch (...) {
    rec.diagnostics = "no response";
    rec.duration = now() - started;
    session_.iterations.push_back(std::move(rec));
    throw;
  }

  Evaluation chosen;
  std::size_t chosen_index = 0;
  if (kind == IterationKind::Test) {
    try {
      chosen.code = prompt::extract_code(answers.front().content).text;
    } catch (const prompt::NoCodeFound&) {
    }
    chosen.accepted = true;
  } else {
    for (std::size_t i = 0; i < answers.size(); ++i) {
      Evaluation e = evaluate(answers[i].content, targets);
      consider_best(e);
      if (i == 0) chosen = e;
      if (e.accepted) {
        chosen = std::move(e);
        chosen_index = i;
        break;
      }
    }
  }

  conv_.append(llm::Role::Assistant, answers[chosen_index].content);
  rec.response = answers[chosen_index].content;
  for (std::size_t i = 0; i < answers.size(); ++i)
    if (i != chosen_index) rec.alternatives.push_back(answers[i].content);
  rec.candidate = chosen.code;
  rec.compile_ok = chosen.compile_ok;
  rec.functional_ok = chosen.functional_ok;
  rec.synthesis_ok = chosen.synthesis_ok;
  rec.error_class = chosen.error_class;
  rec.diagnostics = kind == IterationKind::Test ? "test driver stored, not executed" : chosen.diagnostics;
  rec.blocking_rules = rule_names(chosen.blocking);
  rec.duration = now() - started;
  session_.iterations.push_back(std::move(rec));
  session_.prompt_count = static_cast<int>(session_.iterations.size());
  return chosen;
}

Session SessionRunner::run() {
  cfg_.budgets.validate();
  prompt::validate(plan_);
  if (!cfg_.backend) throw SessionSetupError("no LLM backend configured");
  if (!cfg_.harness) throw SessionSetupError("no test harness configured");
  try {
    cfg_.spec.validate();
  } catch (const harness::UnmappableInterface& e) {
    throw SessionSetupError(std::string("equivalence spec: ") + e.what());
  }
  lint::SourceUnit unit;
  try {
    unit = lint::parse_c(source_, cfg_.input_path.empty() ? "input.c" : cfg_.input_path);
  } catch (const lint::SyntaxError& e) {
    throw SessionSetupError(std::string("input does not parse: ") + e.what());
  }
  if (!unit.function(top_)) throw SessionSetupError("top function '" + top_ + "' is not defined in the input");

  session_.id = cfg_.session_id.empty() ? top_ + "-" + short_hash(source_) : cfg_.session_id;
  session_.input_path = cfg_.input_path;
  session_.input_source = source_;
  session_.top_function = top_;
  session_.plan = plan_;
  session_.equivalence = harness::to_json(cfg_.spec);
  session_.prelude = cfg_.prelude;
  session_.status = SessionStatus::FailedBudget;
  conv_ = llm::Conversation(session_.id);

  auto baseline = lint::lint(unit);
  current_code_ = source_;
  current_blocking_ = blocking_rules(baseline);
  std::string context = findings(baseline);

  bool done = false;
  try {
    for (const auto& step : plan_.steps) {
      if (done) break;
      if (step.id == prompt::kRepair) continue;
      bool present = false;
      for (RuleId r : step.expected_effect)
        present = present || std::find(current_blocking_.begin(), current_blocking_.end(), r) != current_blocking_.end();
      if (step.id != prompt::kTaskIntro && !present && !step.expected_effect.empty()) continue;

      if (!budget_left()) {
        session_.error = "total prompt budget exhausted";
        break;
      }
      std::string text = prompt::render_prompt(step, current_code_, context, top_);
      if (step.produces_test) {
        exchange(step.id, IterationKind::Test, 0, text, {step.id}, 1, {});
        continue;
      }

      Evaluation e = exchange(step.id, IterationKind::Step, 0, text, {step.id}, step.alternatives,
                              step.expected_effect);
      int attempt = 0;
      while (!e.accepted) {
        if (attempt >= cfg_.budgets.max_repairs_per_step) {
          session_.error = "repair budget exhausted in step " + step.id;
          done = true;
          break;
        }
        if (!budget_left()) {
          session_.error = "total prompt budget exhausted";
          done = true;
          break;
        }
        ++attempt;
        const auto& repair = plan_.repair_step();
        std::string failed_code = e.code ? *e.code : current_code_;
        if (auto h = cfg_.hints.find(step.id); h != cfg_.hints.end()) e.repair.hint = h->second;
        std::string rtext = prompt::render_repair(repair, e.repair, failed_code, attempt, top_);
        e = exchange(step.id, IterationKind::Repair, attempt, rtext, {step.id + "/" + repair.id, repair.id},
                     repair.alternatives, step.expected_effect);
      }
      if (done) break;

      current_code_ = *e.code;
      current_blocking_ = e.blocking;
      context.clear();
      if (e.success) {
        session_.status = SessionStatus::Succeeded;
        session_.final_code = current_code_;
        success_eval_ = e;
        done = true;
      }
    }
    if (session_.status != SessionStatus::Succeeded && session_.error.empty())
      session_.error = "plan finished without a synthesizable, equivalent candidate";
  } catch (const llm::LlmError& ex) {
    session_.status = SessionStatus::FailedError;
    session_.error = ex.what();
  } catch (const harness::OriginalBuildError& ex) {
    session_.status = SessionStatus::FailedError;
    session_.error = std::string("reference build failed: ") + ex.what();
  } catch (const harness::ToolMissing& ex) {
    session_.status = SessionStatus::FailedError;
    session_.error = ex.what();
  } catch (const harness::UnmappableInterface& ex) {
    session_.status = SessionStatus::FailedError;
    session_.error = ex.what();
  } catch (const std::runtime_error& ex) {
    session_.status = SessionStatus::FailedError;
    session_.error = ex.what();
  }
  session_.prompt_count = static_cast<int>(session_.iterations.size());

  if (session_.status == SessionStatus::Succeeded) {
    FinalVerdict v;
    v.compile_ok = true;
    v.equivalence_passed = true;
    v.vectors_run = success_eval_->equivalence->vectors_run;
    v.lint_gate = true;
    session_.verdict = v;
  } else if (best_) {
    session_.final_code = best_->first;
    if (session_.status == SessionStatus::FailedBudget) {
      try {
        session_.verdict = verify(source_, best_->first, cfg_.spec, cfg_.prelude, *cfg_.harness);
      } catch (const std::exception& ex) {
        session_.warnings.push_back(std::string("could not verify the best candidate: ") + ex.what());
      }
    }
  }
  return session_;
}

}  // namespace

Session run_session(const std::string& source, const std::string& top, const prompt::TransformPlan& plan,
                    const SessionConfig& cfg) {
  SessionRunner runner(source, top, plan, cfg);
  return runner.run();
}

FinalVerdict verify(const std::string& source, const std::string& code, const harness::EquivalenceSpec& spec,
                    const std::string& prelude, harness::Harness& h) {
  FinalVerdict v;
  auto build = h.build(spec, source, code, prelude);
  v.compile_ok = build.ok;
  if (build.ok) {
    auto rep = h.run_equivalence(build, spec);
    v.equivalence_passed = rep.passed;
    v.vectors_run = rep.vectors_run;
  }
  try {
    auto report = lint::lint(lint::parse_c(code, "candidate.c"));
    v.lint_gate = report.gate();
    v.blocking_rules = rule_names(blocking_rules(report));
  } catch (const lint::SyntaxError&) {
    v.lint_gate = false;
  }
  return v;
}

}  // namespace hlsr::orch

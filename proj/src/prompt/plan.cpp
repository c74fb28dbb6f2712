#include "hlsr/prompt/plan.hpp"

#include <fstream>
#include <sstream>

#include "hlsr/prompt/render.hpp"

namespace hlsr::prompt {

namespace {

constexpr std::pair<PlanKind, std::string_view> kKindNames[] = {{PlanKind::Streaming, "Streaming"},
                                                                {PlanKind::Desoftware, "Desoftware"},
                                                                {PlanKind::LoopArray, "LoopArray"},
                                                                {PlanKind::Minimal, "Minimal"}};

const std::string kCodeBlock = "\n\n```c\n{code}```\n";

TransformStep step(std::string id, std::string goal, std::string text, std::set<RuleId> effect,
                   bool produces_test = false) {
  TransformStep s;
  s.id = std::move(id);
  s.goal = std::move(goal);
  s.template_text = std::move(text);
  s.expected_effect = std::move(effect);
  s.produces_test = produces_test;
  return s;
}

TransformStep task_intro() {
  return step("TaskIntro", "Present the code and the target",
              "Hi, I have this code in C that I need to rewrite such that I can use it with an HLS tool to generate "
              "hardware. The top function is {function}. Keep its behavior exactly the same and answer with the "
              "complete code in a single ```c block." +
                  kCodeBlock + "{context}",
              {});
}

TransformStep repair() {
  return step("Repair", "Fix the reported problem",
              "{context}\n\nThis is the code that produced the problem:" + kCodeBlock +
                  "\nFix it and answer with the complete corrected code in a single ```c block.",
              {});
}

TransformStep remove_prints() {
  return step("RemovePrints", "Drop console I/O",
              "Remove every printf and any other standard I/O call from {function} and its helpers. Hardware has no "
              "console; keep everything else as it is." +
                  kCodeBlock,
              {RuleId::Io});
}

TransformStep optimize_types() {
  return step("OptimizeTypes", "Use bit-accurate types",
              "Replace the int and double variables of {function} with ac_int and ac_fixed types of the smallest "
              "width that still holds every value they can take. Do not change the behavior." +
                  kCodeBlock,
              {});
}

TransformStep gen_test(const std::string& what) {
  return step("GenTest", "Write a test driver",
              "Write a main function that tests {function} by passing " + what +
                  " and checks the results against the original implementation." + kCodeBlock,
              {}, true);
}

TransformPlan streaming(const PlanOptions& opts) {
  TransformPlan p;
  p.kind = PlanKind::Streaming;
  std::string offline =
      "The floating point math in {function} cannot be synthesized. Compute offline everything that depends only "
      "on constants, and replace the final p-value computation by a comparison against a precomputed threshold "
      "at p = 0.01.";
  if (opts.offline_math_script)
    offline += " Where a constant needs a numeric computation, write a script that computes it and give me the "
               "resulting value.";
  p.steps = {task_intro(),
             remove_prints(),
             step("StreamingInterface", "Process one bit per call",
                  "Rewrite {function} so that it consumes its input as a stream: remove the epsilon array and add "
                  "a parameter that receives one bit per call. Keep the running state in static variables." +
                      kCodeBlock,
                  {RuleId::Loop, RuleId::DynMem, RuleId::Vla}),
             step("OfflineMath", "Move math offline", offline + kCodeBlock + "{context}", {RuleId::Math}),
             step("AddSignals", "Expose decision outputs",
                  "Add is_random and valid signals as output parameters of {function}: valid is 1 only on the call "
                  "that completes a sequence, and is_random then carries the test decision." +
                      kCodeBlock,
                  {}),
             optimize_types(),
             gen_test("random bits"),
             repair()};
  return p;
}

TransformPlan desoftware() {
  TransformPlan p;
  p.kind = PlanKind::Desoftware;
  p.steps = {task_intro(),
             remove_prints(),
             step("RemovePointers", "Remove pointers",
                  "Rewrite {function} and its helpers without pointers. Pass arrays with a fixed size and inline "
                  "small helpers such as swap functions." +
                      kCodeBlock,
                  {RuleId::PtrParam, RuleId::FnPtr, RuleId::DynMem}),
             step("RemoveRecursion", "Remove recursion",
                  "Rewrite {function} without recursion. Use a loop with an explicit stack kept in an array of "
                  "fixed size." +
                      kCodeBlock,
                  {RuleId::Recur}),
             step("FixArraySizes", "Give arrays static sizes",
                  "Make the size of every array known at compile time, array parameters included." + kCodeBlock,
                  {RuleId::Vla, RuleId::PtrParam}),
             optimize_types(),
             gen_test("random arrays"),
             repair()};
  return p;
}

TransformPlan loop_array() {
  TransformPlan p;
  p.kind = PlanKind::LoopArray;
  p.steps = {task_intro(),
             step("FixedLoopsNoPointers", "Fixed loop bounds, no pointers",
                  "Rewrite {function} so that every for loop has fixed bounds and no pointers are used." + kCodeBlock,
                  {RuleId::Loop, RuleId::PtrParam}),
             step("FixedArrayParams", "Sized array parameters",
                  "Replace the pointer parameters of {function} with array parameters of fixed size." + kCodeBlock,
                  {RuleId::PtrParam, RuleId::Vla}),
             repair()};
  return p;
}

}  // namespace

std::string_view to_string(PlanKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

std::optional<PlanKind> parse_plan_kind(std::string_view s) {
  for (const auto& [kind, name] : kKindNames)
    if (name == s) return kind;
  return std::nullopt;
}

const TransformStep* TransformPlan::find(std::string_view id) const {
  for (const auto& s : steps)
    if (s.id == id) return &s;
  return nullptr;
}

const TransformStep& TransformPlan::repair_step() const {
  static const TransformStep fallback = repair();
  const TransformStep* s = find(kRepair);
  return s ? *s : fallback;
}

std::map<PlanKind, TransformPlan> builtin_plans(const PlanOptions& opts) {
  return {{PlanKind::Streaming, streaming(opts)},
          {PlanKind::Desoftware, desoftware()},
          {PlanKind::LoopArray, loop_array()}};
}

TransformPlan minimal_plan() {
  TransformPlan p;
  p.kind = PlanKind::Minimal;
  p.steps = {task_intro(), repair()};
  return p;
}

TransformPlan builtin_plan(PlanKind kind, const PlanOptions& opts) {
  if (kind == PlanKind::Minimal) return minimal_plan();
  return builtin_plans(opts).at(kind);
}

void validate(const TransformPlan& plan) {
  if (plan.steps.empty()) throw PlanError("plan has no steps");
  if (plan.steps.front().id != kTaskIntro) throw PlanError("first step must be TaskIntro");
  std::set<std::string> ids;
  for (const auto& s : plan.steps) {
    if (s.id.empty()) throw PlanError("step with empty id");
    if (!ids.insert(s.id).second) throw PlanError("duplicate step id '" + s.id + "'");
    if (s.alternatives < 1) throw PlanError("step '" + s.id + "' needs at least one alternative");
    for (const auto& ph : placeholders(s.template_text))
      if (ph != "code" && ph != "function" && ph != "context")
        throw PlanError("step '" + s.id + "' uses unknown placeholder {" + ph + "}");
  }
}

nlohmann::json to_json(const TransformPlan& plan) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : plan.steps) {
    nlohmann::json effect = nlohmann::json::array();
    for (RuleId r : s.expected_effect) effect.push_back(lint::to_string(r));
    steps.push_back({{"id", s.id},
                     {"goal", s.goal},
                     {"template", s.template_text},
                     {"expected_effect", effect},
                     {"produces_test", s.produces_test},
                     {"alternatives", s.alternatives}});
  }
  return {{"kind", to_string(plan.kind)}, {"steps", steps}};
}

TransformPlan plan_from_json(const nlohmann::json& j) {
  TransformPlan p;
  try {
    auto kind = parse_plan_kind(j.at("kind").get<std::string>());
    if (!kind) throw PlanError("unknown plan kind '" + j.at("kind").get<std::string>() + "'");
    p.kind = *kind;
    for (const auto& js : j.at("steps")) {
      TransformStep s;
      s.id = js.at("id").get<std::string>();
      s.goal = js.value("goal", "");
      s.template_text = js.at("template").get<std::string>();
      for (const auto& r : js.value("expected_effect", nlohmann::json::array())) {
        auto rule = lint::parse_rule(r.get<std::string>());
        if (!rule) throw PlanError("unknown rule '" + r.get<std::string>() + "' in step '" + s.id + "'");
        s.expected_effect.insert(*rule);
      }
      s.produces_test = js.value("produces_test", false);
      s.alternatives = js.value("alternatives", 1);
      p.steps.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw PlanError(std::string("malformed plan: ") + e.what());
  }
  validate(p);
  return p;
}

TransformPlan load_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PlanError("cannot read plan file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw PlanError(path + ": " + e.what());
  }
  return plan_from_json(j);
}

TransformPlan select_plan(const lint::LintReport& report, std::optional<PlanKind> override_kind,
                          const lint::SourceUnit* unit, const PlanOptions& opts) {
  if (override_kind) return builtin_plan(*override_kind, opts);
  if (report.has(RuleId::Recur)) return builtin_plan(PlanKind::Desoftware, opts);
  if (report.has(RuleId::PtrParam) || report.has(RuleId::Vla, true)) return builtin_plan(PlanKind::LoopArray, opts);
  bool global_scan = false;
  if (unit) {
    for (const auto& v : report.violations) {
      if (v.rule != RuleId::Loop) continue;
      const lint::FunctionInfo* f = unit->function(v.function);
      if (!f) continue;
      for (const auto& l : f->loops)
        if (l.loc.line == v.loc.line && l.loc.col == v.loc.col && l.scans_global) global_scan = true;
    }
  }
  if (global_scan || report.has(RuleId::Math)) return builtin_plan(PlanKind::Streaming, opts);
  return minimal_plan();
}

}  // namespace hlsr::prompt

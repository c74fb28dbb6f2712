#include <gtest/gtest.h>

#include "hlsr/llm/mock_backend.hpp"
#include "hlsr/orchestrator/orchestrator.hpp"
#include "test_util.hpp"

using namespace hlsr;
using namespace hlsr::orch;
using hlsr::test::Gen;

namespace {

struct Fixture {
  std::string original = test::slurp(test::corpus("aes/shiftrows/original.c"));
  std::string good = test::slurp(test::corpus("aes/shiftrows/handsfree.c"));
  std::string prelude = test::slurp(test::corpus("support/aes_prelude.h"));
  harness::EquivalenceSpec spec = harness::load_spec(test::corpus("aes/shiftrows/equiv.json"));

  std::string broken() const {
    std::string s = good;
    s.erase(s.find("state[3][1] = temp;") + 18, 1);  // drop a semicolon
    return s;
  }
  std::string wrong() const {
    std::string s = good;
    s.replace(s.find("state[0][2] = state[2][2];"), 26, "state[0][2] = state[1][2];");
    return s;
  }
  // Behaves the same, but adds a recursion the original does not have.
  std::string recursive() const {
    std::string s = good;
    s.replace(s.find("void ShiftRows("), 15,
              "static int depth(int n) { return n > 0 ? depth(n - 1) : 0; }\n\nvoid ShiftRows(");
    s.replace(s.find("uint8_t temp;"), 13, "uint8_t temp;\n    temp = depth(2);");
    return s;
  }

  SessionConfig config(llm::Transcript t, int max_repairs = 5, int max_total = 30) const {
    SessionConfig c;
    c.backend = std::make_shared<llm::MockBackend>(std::move(t));
    harness::HarnessConfig hc;
    hc.run_timeout = 5;
    c.harness = std::make_shared<harness::Harness>(hc);
    c.spec = spec;
    c.prelude = prelude;
    c.budgets.max_repairs_per_step = max_repairs;
    c.budgets.max_total_prompts = max_total;
    c.clock = [] { return 0.0; };
    return c;
  }
};

std::string fenced(const std::string& code) { return "Here you go:\n```c\n" + code + "```\n"; }

prompt::TransformPlan loop_array() { return prompt::builtin_plan(prompt::PlanKind::LoopArray); }

}  // namespace

TEST(Checks, ClassifyByStage) {
  CheckOutcome o;
  o.stage = CheckOutcome::Stage::Compile;
  EXPECT_EQ(classify(o), ErrorClass::Compile);
  o.stage = CheckOutcome::Stage::Equivalence;
  EXPECT_EQ(classify(o), ErrorClass::Functional);
  o.stage = CheckOutcome::Stage::Lint;
  EXPECT_EQ(classify(o), ErrorClass::Synthesis);
  o.stage = CheckOutcome::Stage::ExternalHls;
  EXPECT_EQ(classify(o), ErrorClass::Synthesis);
}

TEST(Checks, SynthesisModes) {
  EXPECT_FALSE(parse_synthesis_mode("builtin").external);
  auto m = parse_synthesis_mode("external:vitis_hls -f run.tcl");
  EXPECT_TRUE(m.external);
  EXPECT_EQ(m.command, "vitis_hls -f run.tcl");
  EXPECT_EQ(to_string(m), "external:vitis_hls -f run.tcl");
  EXPECT_THROW(parse_synthesis_mode("external:"), std::invalid_argument);
  EXPECT_THROW(parse_synthesis_mode("catapult"), std::invalid_argument);
}

TEST(Checks, SynthesisCheckBuiltinAndExternal) {
  std::string rec = "int f(int n) { return n ? f(n - 1) : 0; }\n";
  std::string ok = "int f(int a[4]) { return a[0]; }\n";
  auto r = synthesis_check(rec, {});
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.report);
  EXPECT_EQ(blocking_rules(*r.report), std::vector<lint::RuleId>{lint::RuleId::Recur});
  EXPECT_TRUE(synthesis_check(ok, {}).ok);

  EXPECT_TRUE(synthesis_check(rec, {true, "true"}).ok);  // the external tool decides
  EXPECT_FALSE(synthesis_check(ok, {true, "false"}).ok);
  auto missing = synthesis_check(rec, {true, "hlsr-no-such-hls-tool"});
  EXPECT_TRUE(missing.fell_back);
  EXPECT_FALSE(missing.ok);
  EXPECT_FALSE(missing.warning.empty());
}

TEST(Checks, DiagnosticLines) {
  std::string d = "candidate.c:7:1: error: expected ';'\nhx_adapter.cpp:3:2: error: x\ncandidate.c:12:5: note: y\n"
                  "candidate.c:7:9: error: again\n";
  EXPECT_EQ(diagnostic_lines(d), (std::vector<int>{7}));  // errors only, each line once
}

TEST(Budgets, Validation) {
  EXPECT_NO_THROW(Budgets{}.validate());
  EXPECT_THROW((Budgets{0, 30, 20}).validate(), SessionSetupError);
  EXPECT_THROW((Budgets{5, 3, 20}).validate(), SessionSetupError);
}

TEST(SessionJson, RejectsMalformed) {
  EXPECT_THROW(session_from_json(nlohmann::json::object()), std::invalid_argument);
  Session s;
  s.id = "x";
  s.plan = prompt::minimal_plan();
  auto j = to_json(s);
  j["status"] = "Maybe";
  EXPECT_THROW(session_from_json(j), std::invalid_argument);
}

// Session -> JSON -> Session is lossless for arbitrary field contents.
TEST(SessionJsonProperty, RoundTripIsLossless) {
  Gen g(99);
  for (int trial = 0; trial < 150; ++trial) {
    Session s;
    s.id = g.ident();
    s.input_path = g.coin() ? "" : "dir/" + g.ident() + ".c";
    s.input_source = g.text(200);
    s.equivalence = {{"mode", "BitExact"}, {"seed", g.range(0, 1 << 30)}};
    s.prelude = g.text(50);
    s.top_function = g.ident();
    s.plan = prompt::builtin_plan(g.pick(std::vector<prompt::PlanKind>{
        prompt::PlanKind::Streaming, prompt::PlanKind::Desoftware, prompt::PlanKind::LoopArray,
        prompt::PlanKind::Minimal}));
    int n = static_cast<int>(g.range(0, 6));
    for (int i = 0; i < n; ++i) {
      IterationRecord r;
      r.step_id = s.plan.steps[static_cast<std::size_t>(g.range(0, static_cast<long long>(s.plan.steps.size()) - 1))].id;
      r.kind = g.pick(std::vector<IterationKind>{IterationKind::Step, IterationKind::Repair, IterationKind::Test});
      r.attempt = static_cast<int>(g.range(0, 5));
      r.prompt = g.text(300);
      r.response = g.text(300);
      if (g.coin(30)) r.alternatives = {g.text(20), g.text(20)};
      if (g.coin()) r.candidate = g.text(100);
      r.compile_ok = g.coin();
      if (g.coin()) r.functional_ok = g.coin();
      if (g.coin()) r.synthesis_ok = g.coin();
      if (g.coin()) r.error_class = g.pick(std::vector<ErrorClass>{ErrorClass::Compile, ErrorClass::Functional,
                                                                     ErrorClass::Synthesis});
      r.diagnostics = g.text(80);
      if (g.coin()) r.blocking_rules = {"R-RECUR", "R-PTRPARAM"};
      r.duration = static_cast<double>(g.range(0, 100000)) / 1000.0;
      s.iterations.push_back(r);
    }
    s.status = g.pick(std::vector<SessionStatus>{SessionStatus::Succeeded, SessionStatus::FailedBudget,
                                                 SessionStatus::FailedError});
    if (g.coin()) s.final_code = g.text(100);
    s.prompt_count = n;
    if (g.coin()) s.verdict = FinalVerdict{g.coin(), g.coin(), static_cast<long>(g.range(0, 20000)), g.coin(),
                                           {"R-LOOP"}};
    s.error = g.coin() ? "" : g.text(40);
    if (g.coin()) s.warnings = {g.text(30)};

    Session back = session_from_json(nlohmann::json::parse(to_json(s).dump()));
    ASSERT_EQ(back.iterations, s.iterations);
    ASSERT_EQ(back.final_code, s.final_code);
    ASSERT_EQ(back.verdict, s.verdict);
    ASSERT_EQ(back.input_source, s.input_source);
    ASSERT_EQ(back.status, s.status);
    ASSERT_EQ(back.warnings, s.warnings);
    ASSERT_EQ(to_json(back), to_json(s));
  }
}

TEST(RunSession, SucceedsInOnePrompt) {
  Fixture f;
  auto cfg = f.config(llm::Transcript{{{"TaskIntro", {fenced(f.good)}}}});
  Session s = run_session(f.original, "ShiftRows", loop_array(), cfg);
  EXPECT_EQ(s.status, SessionStatus::Succeeded) << s.error;
  EXPECT_EQ(s.prompt_count, 1);
  ASSERT_TRUE(s.final_code);
  EXPECT_EQ(*s.final_code, f.good);
  ASSERT_TRUE(s.verdict);
  EXPECT_TRUE(s.verdict->equivalence_passed);
  EXPECT_EQ(s.verdict->vectors_run, 1005);
  EXPECT_EQ(s.id.rfind("ShiftRows-", 0), 0u);
  EXPECT_NE(s.iterations[0].prompt.find(f.original), std::string::npos);
  EXPECT_NE(s.iterations[0].prompt.find("ShiftRows"), std::string::npos);

  // Success is sound: the stored code passes an independent re-check.
  harness::Harness h;
  FinalVerdict v = verify(f.original, *s.final_code, f.spec, f.prelude, h);
  EXPECT_EQ(v, *s.verdict);
}

TEST(RunSession, ClassifiesEachFailureAndRepairs) {
  Fixture f;
  llm::Transcript t{{{"TaskIntro", {fenced(f.broken())}},
                     {"TaskIntro/Repair", {fenced(f.wrong()), fenced(f.recursive()), "No code, sorry.",
                                           fenced(f.good)}}}};
  auto cfg = f.config(t);
  cfg.hints["TaskIntro"] = "HUMAN HINT";
  Session s = run_session(f.original, "ShiftRows", loop_array(), cfg);
  ASSERT_EQ(s.status, SessionStatus::Succeeded) << s.error;
  ASSERT_EQ(s.iterations.size(), 5u);
  EXPECT_EQ(s.iterations[0].error_class, ErrorClass::Compile);
  EXPECT_FALSE(s.iterations[0].compile_ok);
  EXPECT_EQ(s.iterations[1].error_class, ErrorClass::Functional);
  EXPECT_EQ(s.iterations[1].functional_ok, false);
  EXPECT_EQ(s.iterations[2].error_class, ErrorClass::Synthesis);
  EXPECT_EQ(s.iterations[2].blocking_rules, std::vector<std::string>{"R-RECUR"});
  EXPECT_EQ(s.iterations[3].error_class, ErrorClass::Compile);
  EXPECT_FALSE(s.iterations[3].candidate);
  EXPECT_FALSE(s.iterations[4].error_class);

  // Repair prompts carry the previous failure, escalating with the attempt.
  EXPECT_NE(s.iterations[1].prompt.find("[Compile error]"), std::string::npos);
  EXPECT_NE(s.iterations[1].prompt.find("candidate.c:"), std::string::npos);
  EXPECT_NE(s.iterations[2].prompt.find("[Functional error]"), std::string::npos);
  EXPECT_NE(s.iterations[2].prompt.find("Input:"), std::string::npos);
  EXPECT_NE(s.iterations[3].prompt.find("R-RECUR"), std::string::npos);
  EXPECT_NE(s.iterations[3].prompt.find("Hint: HUMAN HINT"), std::string::npos);
  for (int i = 1; i < 5; ++i) {
    EXPECT_EQ(s.iterations[i].kind, IterationKind::Repair);
    EXPECT_EQ(s.iterations[i].attempt, i);
  }
}

TEST(RunSession, StepRepairBudgetEndsSession) {
  Fixture f;
  llm::Transcript t{{{"TaskIntro", {fenced(f.broken())}}, {"TaskIntro/Repair", {fenced(f.broken())}}}};
  t.entries[1].responses.assign(10, fenced(f.wrong()));
  auto cfg = f.config(t, 3, 30);
  Session s = run_session(f.original, "ShiftRows", loop_array(), cfg);
  EXPECT_EQ(s.status, SessionStatus::FailedBudget);
  EXPECT_EQ(s.prompt_count, 4);
  EXPECT_NE(s.error.find("repair budget"), std::string::npos) << s.error;
  ASSERT_TRUE(s.final_code);
  EXPECT_EQ(*s.final_code, f.wrong());  // compiles, unlike the first answer
  ASSERT_TRUE(s.verdict);
  EXPECT_TRUE(s.verdict->compile_ok);
  EXPECT_FALSE(s.verdict->equivalence_passed);
}

TEST(RunSession, TotalPromptBudget) {
  Fixture f;
  llm::Transcript t{{{"TaskIntro", {fenced(f.wrong())}}, {"TaskIntro/Repair", {}}}};
  t.entries[1].responses.assign(10, fenced(f.wrong()));
  auto cfg = f.config(t, 4, 4);
  Session s = run_session(f.original, "ShiftRows", loop_array(), cfg);
  EXPECT_EQ(s.status, SessionStatus::FailedBudget);
  EXPECT_LE(s.prompt_count, 4);
}

TEST(RunSession, ExhaustedTranscriptIsError) {
  Fixture f;
  auto cfg = f.config(llm::Transcript{{{"TaskIntro", {fenced(f.broken())}}}});
  Session s = run_session(f.original, "ShiftRows", loop_array(), cfg);
  EXPECT_EQ(s.status, SessionStatus::FailedError);
  EXPECT_NE(s.error.find("transcript"), std::string::npos) << s.error;
  // The unanswered repair request stays in the log.
  ASSERT_EQ(s.prompt_count, 2);
  EXPECT_EQ(s.iterations[1].diagnostics, "no response");
}

TEST(RunSession, SetupErrorsBeforeAnyPrompt) {
  Fixture f;
  auto backend = std::make_shared<llm::MockBackend>(llm::Transcript{{{"TaskIntro", {fenced(f.good)}}}});
  auto cfg = f.config({});
  cfg.backend = backend;
  EXPECT_THROW(run_session(f.original, "NoSuchFunction", loop_array(), cfg), SessionSetupError);
  EXPECT_THROW(run_session("int broken( {", "ShiftRows", loop_array(), cfg), SessionSetupError);
  cfg.budgets.max_repairs_per_step = 0;
  EXPECT_THROW(run_session(f.original, "ShiftRows", loop_array(), cfg), SessionSetupError);
  EXPECT_EQ(backend->served(), 0u);
}

TEST(RunSession, DeterministicUnderReplay) {
  Fixture f;
  llm::Transcript t{{{"TaskIntro", {fenced(f.wrong())}}, {"TaskIntro/Repair", {fenced(f.good)}}}};
  Session a = run_session(f.original, "ShiftRows", loop_array(), f.config(t));
  Session b = run_session(f.original, "ShiftRows", loop_array(), f.config(t));
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_EQ(a.status, SessionStatus::Succeeded);
}

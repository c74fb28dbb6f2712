#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "hlsr/cli/commands.hpp"
#include "hlsr/cli/config.hpp"
#include "hlsr/cli/corpus.hpp"
#include "hlsr/cli/report.hpp"
#include "hlsr/cli/session_store.hpp"
#include "hlsr/harness/process.hpp"
#include "hlsr/llm/mock_backend.hpp"
#include "hlsr/orchestrator/orchestrator.hpp"
#include "test_util.hpp"

using namespace hlsr;
using namespace hlsr::cli;
namespace fs = std::filesystem;

namespace {

EnvLookup fake_env(std::map<std::string, std::string> vars) {
  return [vars](const std::string& k) -> std::optional<std::string> {
    auto it = vars.find(k);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

struct Cli {
  int code = -1;
  std::string out, err;
};

Cli hlsr_cmd(std::vector<std::string> args) {
  args.insert(args.begin(), "hlsr");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream o, e;
  Cli r;
  r.code = main_entry(static_cast<int>(argv.size()), argv.data(), o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

// Fresh temp dir per test; the user's config and HLSR_* variables are masked.
class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hlsr-cli-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "xdg");
    ::setenv("XDG_CONFIG_HOME", (dir_ / "xdg").c_str(), 1);
    for (const char* v : {"HLSR_CONFIG", "HLSR_LLM", "HLSR_ENDPOINT", "HLSR_CC", "HLSR_SYNTHESIS", "HLSR_CORPUS",
                          "HLSR_OUT"})
      ::unsetenv(v);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& rel) const { return (dir_ / rel).string(); }
  std::string write(const std::string& rel, const std::string& text) const {
    fs::create_directories((dir_ / rel).parent_path());
    write_atomic(path(rel), text);
    return path(rel);
  }
  // Copy of the bundled corpus that tests may damage.
  std::string corpus_copy() const {
    fs::copy(HLSR_TEST_CORPUS, dir_ / "corpus", fs::copy_options::recursive);
    return path("corpus");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ConfigLayersFileThenEnvThenFlags) {
  std::string f = write("c.json", R"({"cc_command": "file-cc", "output_dir": "file-out",
                                      "budgets": {"max_repairs_per_step": 3}})");
  Config file_only = load_config(f, fake_env({}));
  EXPECT_EQ(file_only.cc_command, "file-cc");
  EXPECT_EQ(file_only.output_dir, "file-out");
  EXPECT_EQ(file_only.budgets.max_repairs_per_step, 3);
  EXPECT_EQ(file_only.budgets.max_total_prompts, 30);  // default kept

  Config env = load_config(f, fake_env({{"HLSR_CC", "env-cc"}, {"HLSR_OUT", "env-out"}}));
  EXPECT_EQ(env.cc_command, "env-cc");
  EXPECT_EQ(env.output_dir, "env-out");
  EXPECT_EQ(env.budgets.max_repairs_per_step, 3);

  // A flag beats both: bench with no entries still writes its report into --out.
  ::setenv("HLSR_OUT", path("env-out").c_str(), 1);
  auto r = hlsr_cmd({"bench", "--entries", "", "--config", f, "--out", path("flag-out")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(path("flag-out/report.md")));
  EXPECT_FALSE(fs::exists(path("env-out")));
  r = hlsr_cmd({"bench", "--entries", "", "--config", f});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(path("env-out/report.csv")));
}

TEST_F(CliTest, ConfigRejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(merge_config({}, {{"colour", "blue"}}), ConfigError);
  EXPECT_THROW(merge_config({}, {{"model", {{"temprature", 0.5}}}}), ConfigError);
  EXPECT_THROW(merge_config({}, {{"budgets", {{"max_repairs", 2}}}}), ConfigError);
  EXPECT_THROW(merge_config({}, {{"synthesis", "catapult"}}), ConfigError);
  EXPECT_THROW(merge_config({}, {{"budgets", {{"max_repairs_per_step", 0}}}}).validate(), ConfigError);
  std::string f = write("bad.json", R"({"colour": 1})");
  auto r = hlsr_cmd({"lint", test::corpus("aes/shiftrows/golden.c")});
  EXPECT_EQ(r.code, kExitOk);  // lint needs no config
  r = hlsr_cmd({"bench", "--entries", "", "--config", f});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("colour"), std::string::npos) << r.err;
  EXPECT_THROW(load_config(path("missing.json"), fake_env({})), ConfigError);
}

TEST_F(CliTest, ConfigJsonRoundTrips) {
  Config c;
  c.cc_command = "clang++";
  c.hints["RemoveRecursion"] = "use an explicit stack";
  c.budgets.max_total_prompts = 12;
  Config back = merge_config({}, to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, DefaultPathResolution) {
  EXPECT_EQ(default_config_path(fake_env({{"HLSR_CONFIG", "/a/c.json"}, {"XDG_CONFIG_HOME", "/x"}})), "/a/c.json");
  EXPECT_EQ(default_config_path(fake_env({{"XDG_CONFIG_HOME", "/x"}, {"HOME", "/h"}})), "/x/hlsr/config.json");
  EXPECT_EQ(default_config_path(fake_env({{"HOME", "/h"}})), "/h/.config/hlsr/config.json");
}

TEST(Config, LlmChoice) {
  Config c;
  apply_llm_choice(c, "none");
  EXPECT_TRUE(c.llm_disabled);
  apply_llm_choice(c, "gemini/gemini-1.5-pro");
  EXPECT_FALSE(c.llm_disabled);
  EXPECT_EQ(c.model.provider, "gemini");
  EXPECT_EQ(c.model.model, "gemini-1.5-pro");
  EXPECT_EQ(c.model.api_key_ref, "GEMINI_API_KEY");
  EXPECT_THROW(apply_llm_choice(c, "gpt4"), ConfigError);
  EXPECT_THROW(apply_llm_choice(c, "acme/model"), ConfigError);
}

TEST_F(CliTest, WriteAtomicReplacesWithoutLeftovers) {
  std::string p = write("w/file.txt", "one");
  write_atomic(p, "two");
  EXPECT_EQ(read_file(p), "two");
  int n = 0;
  for (const auto& e : fs::directory_iterator(path("w"))) n += e.is_regular_file();
  EXPECT_EQ(n, 1);
  write_atomic(path("new/dir/f"), "x");  // parents are created
  EXPECT_EQ(read_file(path("new/dir/f")), "x");
  write("ro/keep", "");
  fs::permissions(path("ro"), fs::perms::owner_read | fs::perms::owner_exec);
  if (::geteuid() != 0) EXPECT_THROW(write_atomic(path("ro/f"), "x"), IoError);
  fs::permissions(path("ro"), fs::perms::owner_all);
  EXPECT_THROW(read_file(path("absent")), IoError);
  EXPECT_EQ(session_file_name("AES ShiftRows/1"), "AES_ShiftRows_1.json");
}

TEST(Report, TablesCarryTotalsAndNa) {
  RunReport r;
  r.rows.push_back({"QuickSort", 6, "Succeeded", true, true, 6, ""});
  r.rows.push_back({"Broken,One", 2, "FailedError", std::nullopt, std::nullopt, std::nullopt, "transcript exhausted"});
  EXPECT_EQ(r.total_prompts(), 8);
  EXPECT_EQ(r.count("Succeeded"), 1);

  std::string md = to_markdown(r);
  EXPECT_EQ(md.rfind("| Design | #Prompts | Status | Equivalence | LintGate | Area | Latency |\n", 0), 0u);
  EXPECT_NE(md.find("| QuickSort | 6 | Succeeded | pass | pass | " + std::string(kNoHls)), std::string::npos);
  EXPECT_NE(md.find("| FailedError | n/a | n/a |"), std::string::npos);
  EXPECT_NE(md.find("| **Total** | 8 | 1/2 succeeded"), std::string::npos);
  EXPECT_NE(md.find("- Broken,One: transcript exhausted"), std::string::npos);

  std::string csv = to_csv(r);
  EXPECT_EQ(csv.rfind("Design,#Prompts,Status,Equivalence,LintGate,Area,Latency\n", 0), 0u);
  EXPECT_NE(csv.find("\"Broken,One\",2,FailedError,n/a,n/a,"), std::string::npos);
  EXPECT_NE(csv.find("Total,8,1/2 succeeded"), std::string::npos);

  auto j = to_json(r);
  EXPECT_EQ(j["totals"]["prompts"], 8);
  EXPECT_TRUE(j["rows"][1]["equivalence_passed"].is_null());
  EXPECT_EQ(j["rows"][0]["area"], kNoHls);
}

TEST(Corpus, BundledCorpusIsComplete) {
  Corpus c = load_corpus(HLSR_TEST_CORPUS);
  ASSERT_EQ(c.entries.size(), 10u);
  std::vector<std::string> hf;
  for (const auto* e : c.hands_free()) {
    hf.push_back(e->name);
    EXPECT_EQ(e->transcript_origin, "reconstructed") << e->name;
    EXPECT_TRUE(e->expected_prompts.has_value());
  }
  EXPECT_EQ(hf, (std::vector<std::string>{"QuickSort", "AES-AddRoundKey", "AES-ShiftRows", "AES-MixColumns",
                                          "AES-SubBytes"}));
  for (const auto& e : c.entries) {
    for (const auto& p : {e.original, e.golden, e.handsfree, e.equivalence, e.prelude, e.transcript})
      if (!p.empty()) EXPECT_TRUE(fs::exists(p)) << e.name << ": " << p;
    EXPECT_TRUE(fs::path(e.original).is_absolute());
  }
  ASSERT_NE(c.find("NIST-Monobit"), nullptr);
  EXPECT_EQ(c.find("NIST-Monobit")->plan_kind, prompt::PlanKind::Streaming);
  EXPECT_EQ(c.find("nope"), nullptr);
  EXPECT_THROW(load_corpus("/nonexistent/corpus"), CorpusError);
}

TEST_F(CliTest, CorpusRejectsMissingFiles) {
  std::string root = corpus_copy();
  fs::remove(root + "/aes/shiftrows/golden.c");
  EXPECT_THROW(load_corpus(root), CorpusError);
  write("corpus/corpus.json", R"({"entries": [{"name": "X"}]})");
  EXPECT_THROW(load_corpus(root), CorpusError);
}

TEST_F(CliTest, SessionSurvivesSaveAndLoad) {
  orch::SessionConfig c;
  std::string good = test::slurp(test::corpus("aes/shiftrows/handsfree.c"));
  c.backend = std::make_shared<llm::MockBackend>(llm::Transcript{{{"TaskIntro", {"```c\n" + good + "```\n"}}}});
  c.harness = std::make_shared<harness::Harness>();
  c.spec = harness::load_spec(test::corpus("aes/shiftrows/equiv.json"));
  c.prelude = test::slurp(test::corpus("support/aes_prelude.h"));
  c.clock = [] { return 0.0; };
  auto s = orch::run_session(test::slurp(test::corpus("aes/shiftrows/original.c")), "ShiftRows",
                             prompt::builtin_plan(prompt::PlanKind::LoopArray), c);
  ASSERT_EQ(s.status, orch::SessionStatus::Succeeded) << s.error;
  std::string p = path("s/" + session_file_name(s.id));
  fs::create_directories(path("s"));
  save_session(s, p);
  auto back = load_session(p);
  EXPECT_EQ(orch::to_json(back), orch::to_json(s));
  EXPECT_EQ(serialize(back), read_file(p));
  write("s/bad.json", "{\"id\": 3");
  EXPECT_ANY_THROW(load_session(path("s/bad.json")));
}

TEST_F(CliTest, BenchIsolatesAFailingEntry) {
  std::string root = corpus_copy();
  write("corpus/aes/shiftrows/transcript.json", "[]");
  auto r = hlsr_cmd({"bench", "--mock", "--corpus", root, "--out", path("out"), "--entries",
                "AES-ShiftRows,AES-SubBytes,AES-MixColumns", "--jobs", "2", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = nlohmann::json::parse(read_file(path("out/report.json")));
  ASSERT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["rows"][0]["name"], "AES-ShiftRows");
  EXPECT_EQ(j["rows"][0]["status"], "FailedError");
  EXPECT_TRUE(j["rows"][0].contains("error"));
  EXPECT_EQ(j["rows"][1]["status"], "Succeeded");
  EXPECT_EQ(j["rows"][2]["status"], "Succeeded");
  EXPECT_EQ(j["rows"][1]["prompt_count"], 1);
  EXPECT_EQ(nlohmann::json::parse(r.out), j);
  EXPECT_TRUE(fs::exists(path("out/sessions/AES-SubBytes.json")));

  r = hlsr_cmd({"bench", "--mock", "--corpus", root, "--out", path("out2"), "--entries", "NoSuchEntry"});
  EXPECT_EQ(r.code, kExitError);
}

TEST_F(CliTest, ReplayReportsDriftAfterTampering) {
  std::string root = corpus_copy();
  auto r = hlsr_cmd({"bench", "--mock", "--corpus", root, "--out", path("out"), "--entries", "AES-ShiftRows"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::string session = path("out/sessions/AES-ShiftRows.json");
  r = hlsr_cmd({"replay", session});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("verdict reproduced"), std::string::npos);

  // Reverse the first row rotation in the original: the stored answer no longer matches.
  std::string orig = root + "/aes/shiftrows/original.c";
  std::string text = read_file(orig);
  write_atomic(orig, text + "\n/* edited */\n");
  r = hlsr_cmd({"replay", session});
  EXPECT_EQ(r.code, kExitDrift);
  EXPECT_NE(r.out.find("VerdictDrift"), std::string::npos);
  EXPECT_NE(r.out.find("changed since the session"), std::string::npos);

  fs::remove(orig);
  r = hlsr_cmd({"replay", session});
  EXPECT_EQ(r.code, kExitDrift);
  EXPECT_NE(r.out.find("input unavailable"), std::string::npos);
}

TEST_F(CliTest, ReplayOfExhaustedBudgetShowsBestCandidate) {
  std::string good = test::slurp(test::corpus("aes/shiftrows/handsfree.c"));
  std::string wrong = good;
  wrong.replace(wrong.find("state[0][2] = state[2][2];"), 26, "state[0][2] = state[1][2];");
  std::string resp = "```c\n" + wrong + "```\n";
  orch::SessionConfig c;
  c.backend = std::make_shared<llm::MockBackend>(
      llm::Transcript{{{"TaskIntro", {resp}}, {"TaskIntro/Repair", {resp, resp}}}});
  c.harness = std::make_shared<harness::Harness>();
  c.spec = harness::load_spec(test::corpus("aes/shiftrows/equiv.json"));
  c.prelude = test::slurp(test::corpus("support/aes_prelude.h"));
  c.budgets.max_repairs_per_step = 1;
  c.input_path = test::corpus("aes/shiftrows/original.c");
  c.clock = [] { return 0.0; };
  auto s = orch::run_session(test::slurp(c.input_path), "ShiftRows",
                             prompt::builtin_plan(prompt::PlanKind::LoopArray), c);
  ASSERT_EQ(s.status, orch::SessionStatus::FailedBudget) << s.error;
  std::string p = path("budget.json");
  save_session(s, p);
  auto r = hlsr_cmd({"replay", p});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("best candidate of"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("outputs differ"), std::string::npos) << r.out;
}

TEST_F(CliTest, LintAndRunExitCodes) {
  EXPECT_EQ(hlsr_cmd({"lint", test::corpus("quicksort/original.c")}).code, kExitLintFail);
  EXPECT_EQ(hlsr_cmd({"lint", test::corpus("quicksort/golden.c")}).code, kExitOk);
  EXPECT_EQ(hlsr_cmd({"lint", path("missing.c")}).code, kExitError);
  EXPECT_EQ(hlsr_cmd({"lint", test::corpus("quicksort/original.c"), "--rules", "R-NOPE"}).code, kExitError);
  auto r = hlsr_cmd({"lint", test::corpus("quicksort/original.c"), "--rules", "R-RECUR", "--json"});
  EXPECT_EQ(r.code, kExitLintFail);
  EXPECT_TRUE(nlohmann::json::accept(r.out)) << r.out;
  write("broken.c", "int f( {");
  EXPECT_EQ(hlsr_cmd({"lint", path("broken.c")}).code, kExitError);

  r = hlsr_cmd({"run", test::corpus("aes/shiftrows/original.c"), "--top", "ShiftRows", "--llm", "none", "--out",
           path("o")});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("configuration error"), std::string::npos) << r.err;
  EXPECT_EQ(hlsr_cmd({"run", path("x.c")}).code, kExitError);  // --top missing
  EXPECT_EQ(hlsr_cmd({"frobnicate"}).code, kExitError);

  r = hlsr_cmd({"run", test::corpus("aes/shiftrows/original.c"), "--top", "ShiftRows", "--mock",
           test::corpus("aes/shiftrows/transcript.json"), "--out", path("o")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("Succeeded after 1 prompt"), std::string::npos) << r.out;
}

// The installed binary behaves like main_entry.
TEST_F(CliTest, BinaryExitCodes) {
  auto lint = harness::run_process({HLSR_BIN, "lint", test::corpus("quicksort/original.c")});
  EXPECT_EQ(lint.exit_code, kExitLintFail);
  EXPECT_NE(lint.out.find("R-RECUR"), std::string::npos);
  auto help = harness::run_process({HLSR_BIN, "--help"});
  EXPECT_EQ(help.exit_code, 0);
  EXPECT_NE(help.out.find("replay"), std::string::npos);
}

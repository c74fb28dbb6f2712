#include "hlsr/cli/commands.hpp"

#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hlsr/cli/config.hpp"
#include "hlsr/cli/corpus.hpp"
#include "hlsr/cli/report.hpp"
#include "hlsr/cli/session_store.hpp"
#include "hlsr/harness/process.hpp"
#include "hlsr/lint/lexer.hpp"
#include "hlsr/lint/lint.hpp"
#include "hlsr/llm/http_backend.hpp"
#include "hlsr/llm/mock_backend.hpp"
#include "hlsr/orchestrator/orchestrator.hpp"

namespace hlsr::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

Config resolve_config(const CommonFlags& f) {
  Config c = load_config(f.config_path, process_env());
  if (f.llm) apply_llm_choice(c, *f.llm);
  if (f.cc) c.cc_command = *f.cc;
  if (f.synthesis) {
    try {
      c.synthesis = orch::parse_synthesis_mode(*f.synthesis);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--synthesis: ") + e.what());
    }
  }
  if (f.out) c.output_dir = *f.out;
  if (f.corpus) c.corpus_root = *f.corpus;
  c.validate();
  return c;
}

std::shared_ptr<llm::ChatBackend> make_backend(const Config& c, const std::string& mock_transcript) {
  if (!mock_transcript.empty()) {
    try {
      return std::make_shared<llm::MockBackend>(llm::load_transcript(mock_transcript));
    } catch (const llm::TranscriptParseError& e) {
      throw ConfigError(e.what());
    }
  }
  if (c.llm_disabled) throw ConfigError("no LLM configured: pass --mock <transcript> or --llm <provider>/<model>");
  if (!process_env()(c.model.api_key_ref))
    throw ConfigError("API key variable " + c.model.api_key_ref + " is not set");
  return std::make_shared<llm::HttpBackend>(std::shared_ptr<llm::HttpTransport>(llm::make_httplib_transport()));
}

std::shared_ptr<harness::Harness> make_harness(const Config& c) {
  harness::HarnessConfig hc;
  hc.cc_command = c.cc_command;
  hc.compile_timeout = c.compile_timeout;
  hc.run_timeout = c.run_timeout;
  return std::make_shared<harness::Harness>(hc);
}

orch::SessionConfig session_config(const Config& c, bool frozen_clock) {
  orch::SessionConfig sc;
  sc.model = c.model;
  sc.budgets = c.budgets;
  sc.synthesis = c.synthesis;
  sc.hints = c.hints;
  if (frozen_clock) sc.clock = [] { return 0.0; };
  return sc;
}

const CorpusEntry* entry_for_input(const Config& c, const std::string& input) {
  try {
    static thread_local std::optional<Corpus> cache;
    if (!cache || cache->root != fs::absolute(c.corpus_root).lexically_normal().string())
      cache = load_corpus(c.corpus_root);
    std::error_code ec;
    for (const auto& e : cache->entries)
      if (fs::equivalent(e.original, input, ec)) return &e;
  } catch (const CorpusError&) {
  }
  return nullptr;
}

void print_session_summary(const orch::Session& s, const std::string& path, std::ostream& out) {
  out << "session " << s.id << ": " << orch::to_string(s.status) << " after " << s.prompt_count << " prompt"
      << (s.prompt_count == 1 ? "" : "s") << "\n";
  if (s.verdict)
    out << "  equivalence: " << (s.verdict->equivalence_passed ? "pass" : "fail") << " (" << s.verdict->vectors_run
        << " vectors), lint gate: " << (s.verdict->lint_gate ? "pass" : "fail") << "\n";
  if (!s.error.empty()) out << "  error: " << s.error << "\n";
  for (const auto& w : s.warnings) out << "  warning: " << w << "\n";
  out << "  saved " << path << "\n";
}

int exit_for(orch::SessionStatus s) {
  switch (s) {
    case orch::SessionStatus::Succeeded: return kExitOk;
    case orch::SessionStatus::FailedBudget: return kExitBudget;
    case orch::SessionStatus::FailedError: return kExitError;
  }
  return kExitError;
}

// One bench entry, isolated: every failure becomes a FailedError row.
ReportRow bench_entry(const CorpusEntry& e, const Config& c, const BenchFlags& f, const std::string& session_dir) {
  ReportRow row;
  row.name = e.name;
  row.status = std::string(orch::to_string(orch::SessionStatus::FailedError));
  row.expected_prompts = e.expected_prompts;
  try {
    if (e.equivalence.empty()) throw std::runtime_error("entry has no equivalence spec");
    if (f.mock && e.transcript.empty()) throw std::runtime_error("entry has no mock transcript");
    std::string source = read_file(e.original);
    harness::EquivalenceSpec spec = harness::load_spec(e.equivalence);
    if (f.seed) spec.seed = *f.seed;
    orch::SessionConfig sc = session_config(c, f.mock);
    sc.backend = make_backend(c, f.mock ? e.transcript : std::string());
    sc.harness = make_harness(c);
    sc.spec = spec;
    sc.prelude = e.prelude.empty() ? std::string() : read_file(e.prelude);
    sc.input_path = e.original;
    prompt::PlanOptions po;
    po.offline_math_script = c.offline_math_script;
    orch::Session s = orch::run_session(source, e.top, prompt::builtin_plan(e.plan_kind, po), sc);
    save_session(s, (fs::path(session_dir) / session_file_name(e.name)).string());
    row = row_from_session(e.name, s);
    row.expected_prompts = e.expected_prompts;
  } catch (const std::exception& ex) {
    row.error = ex.what();
  }
  return row;
}

}  // namespace

int cmd_lint(const LintFlags& f, std::ostream& out, std::ostream& err) {
  std::set<lint::RuleId> rules;
  for (const auto& r : f.rules) {
    auto id = lint::parse_rule(r);
    if (!id) {
      err << "error: unknown rule " << r << "\n";
      return kExitError;
    }
    rules.insert(*id);
  }
  if (rules.empty()) rules = lint::all_rules();
  try {
    std::string text = read_file(f.path);
    lint::SourceUnit unit = lint::parse_c(text, f.path);
    lint::LintReport report = lint::lint(unit, rules);
    out << (f.json ? lint::format_json(report) + "\n" : lint::format_text(report, f.path));
    return report.gate() ? kExitOk : kExitLintFail;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const lint::SyntaxError& e) {
    err << f.path << ": " << e.what() << "\n";
  }
  return kExitError;
}

int cmd_run(const RunFlags& f, std::ostream& out, std::ostream& err) {
  try {
    Config c = resolve_config(f.common);
    std::string source = read_file(f.input);
    const CorpusEntry* entry = entry_for_input(c, f.input);

    std::string equiv = f.equiv ? *f.equiv : (entry ? entry->equivalence : std::string());
    if (equiv.empty())
      throw ConfigError("no equivalence spec for " + f.input + ": pass --equiv <spec.json>");
    harness::EquivalenceSpec spec = harness::load_spec(equiv);
    if (f.seed) spec.seed = *f.seed;
    std::string prelude_path = f.prelude ? *f.prelude : (entry ? entry->prelude : std::string());

    prompt::PlanOptions po;
    po.offline_math_script = c.offline_math_script;
    prompt::TransformPlan plan;
    if (f.plan_file) {
      plan = prompt::load_plan_file(*f.plan_file);
    } else {
      std::optional<prompt::PlanKind> kind;
      if (f.plan) {
        kind = prompt::parse_plan_kind(*f.plan);
        if (!kind) throw ConfigError("unknown plan " + *f.plan);
      }
      lint::SourceUnit unit = lint::parse_c(source, f.input);
      plan = prompt::select_plan(lint::lint(unit), kind, &unit, po);
    }

    orch::SessionConfig sc = session_config(c, f.mock.has_value());
    sc.backend = make_backend(c, f.mock.value_or(""));
    sc.harness = make_harness(c);
    sc.spec = spec;
    sc.prelude = prelude_path.empty() ? std::string() : read_file(prelude_path);
    sc.input_path = f.input;
    orch::Session s = orch::run_session(source, f.top, plan, sc);

    std::string path = (fs::path(c.output_dir) / "sessions" / session_file_name(s.id)).string();
    save_session(s, path);
    if (f.common.json)
      out << serialize(s);
    else
      print_session_summary(s, path, out);
    return exit_for(s.status);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
  } catch (const orch::SessionSetupError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const lint::SyntaxError& e) {
    err << f.input << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

int cmd_bench(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  try {
    Config c = resolve_config(f.common);
    std::vector<const CorpusEntry*> selected;
    Corpus corpus;
    if (!f.entries || !f.entries->empty()) corpus = load_corpus(c.corpus_root);
    if (!f.entries) {
      selected = corpus.hands_free();
    } else {
      for (const auto& name : *f.entries) {
        const CorpusEntry* e = corpus.find(name);
        if (!e) throw ConfigError("unknown corpus entry " + name);
        selected.push_back(e);
      }
    }
    if (!f.mock && !selected.empty()) make_backend(c, "");  // surface a missing key before any work
    if (f.jobs < 1) throw ConfigError("--jobs must be positive");

    std::string session_dir = (fs::path(c.output_dir) / "sessions").string();
    fs::create_directories(session_dir);
    RunReport report;
    report.rows.resize(selected.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < selected.size(); i = next++)
        report.rows[i] = bench_entry(*selected[i], c, f, session_dir);
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(f.jobs, static_cast<int>(std::max<std::size_t>(selected.size(), 1)));
    for (int i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    write_atomic((fs::path(c.output_dir) / "report.md").string(), to_markdown(report));
    write_atomic((fs::path(c.output_dir) / "report.csv").string(), to_csv(report));
    write_atomic((fs::path(c.output_dir) / "report.json").string(), to_json(report).dump(2) + "\n");
    out << (f.common.json ? to_json(report).dump(2) + "\n" : to_markdown(report));
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

int cmd_replay(const ReplayFlags& f, std::ostream& out, std::ostream& err) {
  try {
    Config c = resolve_config(f.common);
    orch::Session s = load_session(f.session);
    if (!s.final_code) {
      out << "session " << s.id << " (" << orch::to_string(s.status) << ") has no final code";
      if (!s.error.empty()) out << ": " << s.error;
      out << "\n";
      return kExitOk;
    }

    std::vector<std::string> drift;
    std::string source = s.input_source;
    if (!s.input_path.empty()) {
      try {
        source = read_file(s.input_path);
        if (source != s.input_source) drift.push_back("input " + s.input_path + " changed since the session");
      } catch (const IoError& e) {
        drift.push_back(std::string("input unavailable: ") + e.what());
        source = s.input_source;
      }
    }

    harness::EquivalenceSpec spec = harness::spec_from_json(s.equivalence);
    auto h = make_harness(c);
    orch::FinalVerdict now = orch::verify(source, *s.final_code, spec, s.prelude, *h);

    if (s.status == orch::SessionStatus::FailedBudget) {
      out << "best candidate of " << s.id << ":\n";
      for (auto it = s.iterations.rbegin(); it != s.iterations.rend(); ++it) {
        if (it->candidate != s.final_code) continue;
        if (!it->diagnostics.empty()) out << it->diagnostics << (it->diagnostics.back() == '\n' ? "" : "\n");
        break;
      }
      if (!now.blocking_rules.empty()) {
        out << "  blocking:";
        for (const auto& r : now.blocking_rules) out << " " << r;
        out << "\n";
      }
    }

    const orch::FinalVerdict rec = s.verdict.value_or(orch::FinalVerdict{});
    auto cmp = [&](const char* field, auto a, auto b) {
      if (a == b) return;
      std::ostringstream o;
      o << std::boolalpha << field << ": recorded " << a << ", now " << b;
      drift.push_back(o.str());
    };
    if (!s.verdict) drift.push_back("session has no recorded verdict");
    cmp("compile_ok", rec.compile_ok, now.compile_ok);
    cmp("equivalence_passed", rec.equivalence_passed, now.equivalence_passed);
    cmp("vectors_run", rec.vectors_run, now.vectors_run);
    cmp("lint_gate", rec.lint_gate, now.lint_gate);
    auto join = [](const std::vector<std::string>& v) {
      std::string r = "[";
      for (std::size_t i = 0; i < v.size(); ++i) r += (i ? "," : "") + v[i];
      return r + "]";
    };
    cmp("blocking_rules", join(rec.blocking_rules), join(now.blocking_rules));

    if (drift.empty()) {
      out << "session " << s.id << ": verdict reproduced (equivalence " << (now.equivalence_passed ? "pass" : "fail")
          << ", " << now.vectors_run << " vectors, lint gate " << (now.lint_gate ? "pass" : "fail") << ")\n";
      return kExitOk;
    }
    out << "VerdictDrift in session " << s.id << ":\n";
    for (const auto& d : drift) out << "  " << d << "\n";
    return kExitDrift;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

namespace {

void add_common(CLI::App* app, CommonFlags& f, std::string& llm, std::string& cc, std::string& synth,
                std::string& out, std::string& config, std::string& corpus) {
  app->add_option("--config", config, "Config file (default: $XDG_CONFIG_HOME/hlsr/config.json)");
  app->add_option("--llm", llm, "<provider>/<model>, or none");
  app->add_option("--cc", cc, "Host compiler command");
  app->add_option("--synthesis", synth, "builtin or external:<cmd>");
  app->add_option("--out", out, "Output directory");
  app->add_option("--corpus", corpus, "Corpus root");
  app->add_flag("--json", f.json, "Machine-readable output");
}

void take(std::optional<std::string>& dst, CLI::App* app, const char* name, const std::string& v) {
  if (app->count(name)) dst = v;
}

}  // namespace

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"hlsr: refactor C for high-level synthesis with an LLM in a compile/test/lint loop"};
  app.require_subcommand(1);

  LintFlags lf;
  std::string lint_rules;
  auto* lint_cmd = app.add_subcommand("lint", "Check a C file for constructs HLS tools reject");
  lint_cmd->add_option("path", lf.path, "C source file")->required();
  lint_cmd->add_option("--rules", lint_rules, "Comma-separated rule ids (default: all)");
  lint_cmd->add_flag("--json", lf.json, "JSON report");

  RunFlags rf;
  std::string r_llm, r_cc, r_synth, r_out, r_config, r_corpus, r_plan, r_plan_file, r_mock, r_equiv, r_prelude;
  unsigned long long r_seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Refactor one C file");
  run_cmd->add_option("input", rf.input, "C source file")->required();
  run_cmd->add_option("--top", rf.top, "Top function")->required();
  run_cmd->add_option("--plan", r_plan, "Streaming, Desoftware, LoopArray or Minimal");
  run_cmd->add_option("--plan-file", r_plan_file, "Plan JSON file");
  run_cmd->add_option("--mock", r_mock, "Replay LLM answers from a transcript");
  run_cmd->add_option("--equiv", r_equiv, "Equivalence spec JSON");
  run_cmd->add_option("--prelude", r_prelude, "Header text shared by both versions");
  run_cmd->add_option("--seed", r_seed, "Override the equivalence seed");
  add_common(run_cmd, rf.common, r_llm, r_cc, r_synth, r_out, r_config, r_corpus);

  BenchFlags bf;
  std::string b_llm, b_cc, b_synth, b_out, b_config, b_corpus, b_entries;
  unsigned long long b_seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Run corpus entries and write report tables");
  bench_cmd->add_option("--entries", b_entries, "Comma-separated entry names (default: hands-free entries)");
  bench_cmd->add_flag("--mock", bf.mock, "Replay each entry's transcript");
  bench_cmd->add_option("--seed", b_seed, "Override every equivalence seed");
  bench_cmd->add_option("--jobs", bf.jobs, "Entries run in parallel");
  add_common(bench_cmd, bf.common, b_llm, b_cc, b_synth, b_out, b_config, b_corpus);

  ReplayFlags pf;
  std::string p_llm, p_cc, p_synth, p_out, p_config, p_corpus;
  auto* replay_cmd = app.add_subcommand("replay", "Re-verify a saved session");
  replay_cmd->add_option("session", pf.session, "Session JSON")->required();
  add_common(replay_cmd, pf.common, p_llm, p_cc, p_synth, p_out, p_config, p_corpus);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  auto fill = [&](CLI::App* cmd, CommonFlags& f, const std::string& llm, const std::string& cc,
                  const std::string& synth, const std::string& o, const std::string& config,
                  const std::string& corpus) {
    take(f.llm, cmd, "--llm", llm);
    take(f.cc, cmd, "--cc", cc);
    take(f.synthesis, cmd, "--synthesis", synth);
    take(f.out, cmd, "--out", o);
    take(f.config_path, cmd, "--config", config);
    take(f.corpus, cmd, "--corpus", corpus);
  };

  if (lint_cmd->parsed()) {
    lf.rules = split_list(lint_rules);
    return cmd_lint(lf, out, err);
  }
  if (run_cmd->parsed()) {
    fill(run_cmd, rf.common, r_llm, r_cc, r_synth, r_out, r_config, r_corpus);
    take(rf.plan, run_cmd, "--plan", r_plan);
    take(rf.plan_file, run_cmd, "--plan-file", r_plan_file);
    take(rf.mock, run_cmd, "--mock", r_mock);
    take(rf.equiv, run_cmd, "--equiv", r_equiv);
    take(rf.prelude, run_cmd, "--prelude", r_prelude);
    if (run_cmd->count("--seed")) rf.seed = r_seed;
    return cmd_run(rf, out, err);
  }
  if (bench_cmd->parsed()) {
    fill(bench_cmd, bf.common, b_llm, b_cc, b_synth, b_out, b_config, b_corpus);
    if (bench_cmd->count("--entries")) bf.entries = split_list(b_entries);
    if (bench_cmd->count("--seed")) bf.seed = b_seed;
    return cmd_bench(bf, out, err);
  }
  fill(replay_cmd, pf.common, p_llm, p_cc, p_synth, p_out, p_config, p_corpus);
  return cmd_replay(pf, out, err);
}

}  // namespace hlsr::cli

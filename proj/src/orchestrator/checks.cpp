#include "hlsr/orchestrator/checks.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hlsr/lint/lexer.hpp"
#include "hlsr/lint/source_unit.hpp"

namespace hlsr::orch {

ErrorClass classify(const CheckOutcome& outcome) {
  switch (outcome.stage) {
    case CheckOutcome::Stage::Compile: return ErrorClass::Compile;
    case CheckOutcome::Stage::Equivalence: return ErrorClass::Functional;
    case CheckOutcome::Stage::Lint:
    case CheckOutcome::Stage::ExternalHls: return ErrorClass::Synthesis;
  }
  return ErrorClass::Compile;
}

SynthesisMode parse_synthesis_mode(const std::string& text) {
  if (text == "builtin" || text.empty()) return {};
  const std::string prefix = "external:";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) return {true, text.substr(prefix.size())};
  throw std::invalid_argument("synthesis mode must be builtin or external:<command>, got '" + text + "'");
}

std::string to_string(const SynthesisMode& m) { return m.external ? "external:" + m.command : "builtin"; }

std::vector<lint::RuleId> blocking_rules(const lint::LintReport& report) {
  std::set<lint::RuleId> s;
  for (const auto& v : report.violations)
    if (v.severity == lint::Severity::Blocking) s.insert(v.rule);
  return {s.begin(), s.end()};
}

std::vector<int> diagnostic_lines(const std::string& diagnostics, const std::string& file) {
  std::set<int> lines;
  std::istringstream in(diagnostics);
  std::string line;
  const std::string prefix = file + ":";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) != 0) continue;
    if (line.find("error") == std::string::npos) continue;
    std::size_t pos = prefix.size();
    int n = 0;
    bool digits = false;
    while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) {
      n = n * 10 + (line[pos++] - '0');
      digits = true;
    }
    if (digits) lines.insert(n);
  }
  return {lines.begin(), lines.end()};
}

namespace {

std::string tail(const std::string& text, std::size_t max_lines) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) lines.push_back(l);
  std::size_t start = lines.size() > max_lines ? lines.size() - max_lines : 0;
  std::string out;
  for (std::size_t i = start; i < lines.size(); ++i) out += lines[i] + "\n";
  return out;
}

}  // namespace

SynthesisResult synthesis_check(const std::string& candidate, const SynthesisMode& mode, double timeout,
                                const std::string& scratch_dir) {
  SynthesisResult res;
  try {
    auto unit = lint::parse_c(candidate, "candidate.c");
    res.report = lint::lint(unit);
    res.ok = res.report->gate();
    std::ostringstream os;
    for (const auto& v : res.report->violations)
      if (v.severity == lint::Severity::Blocking)
        os << "line " << v.loc.line << ": [" << lint::to_string(v.rule) << "] " << v.function << ": " << v.detail
           << "\n";
    res.details = os.str();
  } catch (const lint::SyntaxError& e) {
    res.ok = false;
    res.details = std::string("the synthesizability checker cannot parse the code: ") + e.what();
  }
  if (!mode.external) return res;

  namespace fs = std::filesystem;
  fs::path dir = scratch_dir.empty() ? fs::temp_directory_path() : fs::path(scratch_dir);
  static std::atomic<long> counter{0};
  fs::path file = dir / ("hls_candidate_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".c");
  {
    std::ofstream out(file);
    out << candidate;
  }
  auto argv = harness::split_command(mode.command);
  argv.push_back(file.string());
  try {
    harness::ProcessOptions opts;
    opts.timeout = timeout;
    auto r = harness::run_process(argv, opts);
    res.ok = r.ok();
    res.details = tail(r.out + r.err, 20);
    if (r.timed_out) res.details += "external HLS tool timed out\n";
    else if (!r.ok()) res.details += "external HLS tool exited with status " + std::to_string(r.exit_code) + "\n";
  } catch (const harness::ToolMissing& e) {
    res.fell_back = true;
    res.warning = std::string(e.what()) + "; using the builtin checker";
  }
  std::error_code ec;
  fs::remove(file, ec);
  return res;
}

}  // namespace hlsr::orch

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "hlsr/lint/call_graph.hpp"
#include "hlsr/lint/lexer.hpp"
#include "hlsr/lint/lint.hpp"
#include "test_util.hpp"

using namespace hlsr::lint;
using hlsr::test::Gen;

namespace {

LintReport lint_text(const std::string& text) { return lint(parse_c(text, "t.c")); }

std::set<RuleId> blocking(const LintReport& r) {
  std::set<RuleId> s;
  for (const auto& v : r.violations)
    if (v.severity == Severity::Blocking) s.insert(v.rule);
  return s;
}

std::set<std::string> functions_with(const LintReport& r, RuleId rule) {
  std::set<std::string> s;
  for (const auto& v : r.violations)
    if (v.rule == rule) s.insert(v.function);
  return s;
}

}  // namespace

TEST(Lexer, SubstitutesObjectMacrosAndDropsDirectives) {
  auto r = lex("#include <stdio.h>\n#define N 16\nint a[N]; // c\n/* block */ int b;");
  std::vector<std::string> texts;
  for (const auto& t : r.tokens)
    if (t.kind != TokenKind::End) texts.push_back(t.text);
  EXPECT_EQ(texts, (std::vector<std::string>{"int", "a", "[", "16", "]", ";", "int", "b", ";"}));
  ASSERT_FALSE(r.notes.empty());
  EXPECT_EQ(r.notes[0].loc.line, 1);
  EXPECT_TRUE(r.defines.count("N"));
  EXPECT_EQ(r.tokens.back().kind, TokenKind::End);
}

TEST(Lexer, IntegerLiteralsKeepValue) {
  auto r = lex("0x1b 017 42u");
  EXPECT_EQ(r.tokens[0].int_value, 0x1b);
  EXPECT_EQ(r.tokens[1].int_value, 15);
  EXPECT_EQ(r.tokens[2].int_value, 42);
}

TEST(Parser, MissingBraceIsSyntaxErrorWithLocation) {
  try {
    parse_c("int f(int x) {\n  return x;\n", "t.c");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_GE(e.loc().line, 2);
  }
}

TEST(Parser, CollectsFunctionFacts) {
  auto u = parse_c("int g(int v[8], int* p, int n) { for (int i = 0; i < 8; i++) v[i] = p[i]; return n; }", "t.c");
  const FunctionInfo* f = u.function("g");
  ASSERT_NE(f, nullptr);
  ASSERT_EQ(f->params.size(), 3u);
  EXPECT_EQ(f->params[0].category, ParamCategory::SizedArray);
  EXPECT_EQ(f->params[1].category, ParamCategory::UnsizedPointer);
  EXPECT_EQ(f->params[2].category, ParamCategory::Scalar);
  ASSERT_EQ(f->loops.size(), 1u);
  EXPECT_EQ(f->loops[0].bound_kind, BoundKind::Constant);
  EXPECT_EQ(f->loops[0].bound_value, 8);
}

TEST(Rules, EachRuleOnMinimalInput) {
  EXPECT_TRUE(blocking(lint_text("int f(int n) { return n ? f(n - 1) : 0; }")).count(RuleId::Recur));
  EXPECT_TRUE(blocking(lint_text("void f(void) { int* p = malloc(4); free(p); }")).count(RuleId::DynMem));
  EXPECT_TRUE(blocking(lint_text("int f(int* a, int n) { return a[n]; }")).count(RuleId::PtrParam));
  EXPECT_TRUE(blocking(lint_text("void f(int n) { int a[n]; a[0] = 0; }")).count(RuleId::Vla));
  EXPECT_TRUE(blocking(lint_text("int f(int n) { int s = 0; for (int i = 0; i < n; i++) s++; return s; }"))
                  .count(RuleId::Loop));
  EXPECT_TRUE(blocking(lint_text("void f(int x) { printf(\"%d\", x); }")).count(RuleId::Io));
  EXPECT_TRUE(blocking(lint_text("int f(int (*g)(int)) { return g(1); }")).count(RuleId::FnPtr));
  auto math = lint_text("double f(double x) { return sqrt(x); }");
  EXPECT_TRUE(math.has(RuleId::Math));
  EXPECT_FALSE(math.has(RuleId::Math, true));  // advisory only
  EXPECT_TRUE(math.gate());
}

TEST(Rules, CleanCodePassesGate) {
  auto r = lint_text("int sum(int a[8]) { int s = 0; for (int i = 0; i < 8; i++) s += a[i]; return s; }");
  EXPECT_TRUE(r.gate());
  EXPECT_EQ(r.blocking_count(), 0u);
}

TEST(Rules, SelectionRestrictsChecks) {
  auto u = parse_c("int f(int* a, int n) { printf(\"x\"); return n ? f(a, n - 1) : a[0]; }", "t.c");
  auto only = lint(u, {RuleId::Io});
  EXPECT_EQ(blocking(only), std::set<RuleId>{RuleId::Io});
}

TEST(Rules, MutualRecursionNamesBothFunctions) {
  auto r = lint_text("int odd(int n);\nint even(int n) { return n == 0 ? 1 : odd(n - 1); }\n"
                     "int odd(int n) { return n == 0 ? 0 : even(n - 1); }\nint top(int n) { return even(n); }");
  EXPECT_EQ(functions_with(r, RuleId::Recur), (std::set<std::string>{"even", "odd"}));
}

TEST(Rules, ReportFormatsCiteRuleAndLocation) {
  auto r = lint_text("int f(int n) {\n  return f(n);\n}");
  std::string text = format_text(r, "t.c");
  EXPECT_NE(text.find("t.c:2:"), std::string::npos);
  EXPECT_NE(text.find("R-RECUR"), std::string::npos);
  auto j = nlohmann::json::parse(format_json(r));
  EXPECT_FALSE(j.at("gate").get<bool>());
  EXPECT_EQ(j.at("violations").at(0).at("rule"), "R-RECUR");
}

TEST(Rules, RuleNamesRoundTrip) {
  for (RuleId r : all_rules()) EXPECT_EQ(parse_rule(to_string(r)), r);
  EXPECT_FALSE(parse_rule("R-NOPE"));
}

TEST(CallGraph, CyclesAndExternals) {
  auto u = parse_c("int a(int x) { return b(x) + printf(\"\"); }\nint b(int x) { return x ? a(x - 1) : 0; }\n"
                   "int c(int x) { return c(x); }\nint d(int x) { return a(x); }",
                   "t.c");
  CallGraph g = build_call_graph(u);
  EXPECT_EQ(g.nodes, (std::vector<std::string>{"a", "b", "c", "d"}));
  EXPECT_TRUE(g.has_edge("d", "a"));
  EXPECT_TRUE(g.externals.count("printf"));
  auto cyc = g.cycles();
  ASSERT_EQ(cyc.size(), 2u);
  EXPECT_EQ(cyc[0], (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(cyc[1], (std::vector<std::string>{"c"}));
}

// Random call graphs rendered as C; recursion is checked against a transitive
// closure computed here.
TEST(CallGraphProperty, RecursionMatchesReachabilityOracle) {
  for (int trial = 0; trial < 200; ++trial) {
    Gen g(1000 + trial);
    int n = static_cast<int>(g.range(1, 9));
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    std::string src;
    for (int i = 0; i < n; ++i) src += "int f" + std::to_string(i) + "(int x);\n";
    for (int i = 0; i < n; ++i) {
      src += "int f" + std::to_string(i) + "(int x) {\n  int s = x;\n";
      int calls = static_cast<int>(g.range(0, 3));
      for (int c = 0; c < calls; ++c) {
        int j = static_cast<int>(g.range(0, n - 1));
        reach[i][j] = true;
        src += "  if (x > " + std::to_string(c) + ") s += f" + std::to_string(j) + "(x - 1);\n";
      }
      src += "  return s;\n}\n";
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;

    std::set<std::string> expected;
    for (int i = 0; i < n; ++i)
      if (reach[i][i]) expected.insert("f" + std::to_string(i));
    SourceUnit u = parse_c(src, "gen.c");
    auto report = lint(u);
    ASSERT_EQ(functions_with(report, RuleId::Recur), expected) << src;

    // Components: two functions share a cycle iff each reaches the other.
    for (const auto& comp : build_call_graph(u).cycles())
      for (const auto& a : comp)
        for (const auto& b : comp) {
          int ia = std::stoi(a.substr(1)), ib = std::stoi(b.substr(1));
          ASSERT_TRUE(reach[ia][ib] && reach[ib][ia]) << a << " " << b << "\n" << src;
        }

    // Every recursion finding points at the call it reports.
    for (const auto& v : report.violations) {
      if (v.rule != RuleId::Recur) continue;
      ASSERT_LT(v.loc.offset, src.size());
      ASSERT_EQ(src[v.loc.offset], 'f') << v.detail;
    }
  }
}

// Truncations and single-character deletions of real inputs either parse or
// raise SyntaxError; lint never throws on what parses.
TEST(ParserProperty, DamagedInputOnlyRaisesSyntaxError) {
  std::vector<std::string> files = {"quicksort/original.c", "aes/mixcolumns/original.c", "nist/monobit/original.c",
                                    "aes/cipher/original.c"};
  Gen g(7);
  for (const auto& rel : files) {
    std::string text = hlsr::test::slurp(hlsr::test::corpus(rel));
    ASSERT_FALSE(text.empty()) << rel;
    for (int i = 0; i < 60; ++i) {
      std::string t = text;
      std::size_t pos = static_cast<std::size_t>(g.range(0, static_cast<long long>(t.size()) - 1));
      if (g.coin()) t.erase(pos, 1);
      else t.resize(pos);
      try {
        auto u = parse_c(t, rel);
        (void)lint(u);
      } catch (const SyntaxError&) {
      } catch (const std::exception& e) {
        FAIL() << rel << " cut at " << pos << ": unexpected " << e.what();
      }
    }
  }
}

struct CorpusCase {
  const char* path;
  bool gate;
  RuleId must_have = RuleId::Recur;
  bool check_rule = false;
};

// Corpus originals fail the gate; HLS-compatible and hands-free versions pass.
TEST(CorpusOracle, OriginalsFailRefactoredPass) {
  const CorpusCase cases[] = {
      {"quicksort/original.c", false, RuleId::Recur, true},
      {"aes/cipher/original.c", false, RuleId::PtrParam, true},
      {"aes/mixcolumns/original.c", false, RuleId::PtrParam, true},
      {"aes/shiftrows/original.c", false, RuleId::PtrParam, true},
      {"aes/subbytes/original.c", false, RuleId::PtrParam, true},
      {"aes/addroundkey/original.c", false, RuleId::PtrParam, true},
      {"nist/monobit/original.c", false},
      {"nist/blockfreq/original.c", false},
      {"nist/cusums/original.c", false},
      {"nist/overlapping/original.c", false},
      {"quicksort/golden.c", true},
      {"quicksort/handsfree.c", true},
      {"aes/cipher/golden.c", true},
      {"aes/mixcolumns/golden.c", true},
      {"aes/mixcolumns/handsfree.c", true},
      {"aes/shiftrows/golden.c", true},
      {"aes/shiftrows/handsfree.c", true},
      {"aes/subbytes/golden.c", true},
      {"aes/subbytes/handsfree.c", true},
      {"aes/addroundkey/golden.c", true},
      {"aes/addroundkey/handsfree.c", true},
      {"nist/monobit/golden.c", true},
      {"nist/blockfreq/golden.c", true},
      {"nist/cusums/golden.c", true},
      {"nist/overlapping/golden.c", true},
  };
  for (const auto& c : cases) {
    std::string path = hlsr::test::corpus(c.path);
    auto r = lint(parse_c(hlsr::test::slurp(path), path));
    EXPECT_EQ(r.gate(), c.gate) << c.path << "\n" << format_text(r, c.path);
    if (c.check_rule) EXPECT_TRUE(r.has(c.must_have, true)) << c.path;
  }
}

#include "hlsr/prompt/extract.hpp"

#include <vector>

#include "hlsr/lint/lexer.hpp"
#include "hlsr/lint/parser.hpp"

namespace hlsr::prompt {

namespace {

constexpr std::size_t kMaxScanLines = 400;

struct Line {
  std::size_t begin;
  std::size_t end;  // one past the newline, or text end
  std::string_view text;
};

std::vector<Line> lines_of(std::string_view s) {
  std::vector<Line> out;
  std::size_t b = 0;
  while (b < s.size()) {
    std::size_t e = s.find('\n', b);
    std::size_t next = e == std::string_view::npos ? s.size() : e + 1;
    std::size_t stop = e == std::string_view::npos ? s.size() : e;
    out.push_back({b, next, s.substr(b, stop - b)});
    b = next;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parses_with_declaration(std::string_view text) {
  try {
    auto tu = lint::parse(lint::lex(text));
    return !tu.functions.empty() || !tu.globals.empty() || !tu.prototypes.empty() || !tu.typedefs.empty();
  } catch (const std::exception&) {
    return false;
  }
}

bool could_end(std::string_view l) {
  l = trim(l);
  if (l.empty()) return false;
  if (l.front() == '#') return true;
  char c = l.back();
  return c == '}' || c == ';' || (l.size() >= 2 && l.substr(0, 2) == "//");
}

bool could_start(std::string_view l) {
  l = trim(l);
  if (l.empty()) return false;
  return l.front() == '#' || l.front() == '/' || l.find('(') != std::string_view::npos ||
         l.find(';') != std::string_view::npos || l.find('{') != std::string_view::npos;
}

}  // namespace

CandidateCode extract_code(std::string_view response, std::string step_id, int response_index) {
  auto lines = lines_of(response);
  CandidateCode best;
  best.step_id = step_id;
  best.response_index = response_index;
  bool found = false;

  // Fenced blocks.
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i].text).substr(0, 3) != "```") continue;
    std::size_t j = i + 1;
    while (j < lines.size() && trim(lines[j].text) != "```") ++j;
    std::size_t b = i + 1 < lines.size() ? lines[i + 1].begin : response.size();
    std::size_t e = j < lines.size() ? lines[j].begin : response.size();
    if (e < b) e = b;
    std::string body(response.substr(b, e - b));
    if (trim(body).size() > 0 && (!found || body.size() > best.text.size())) {
      best.text = std::move(body);
      found = true;
    }
    i = j;
  }
  if (found) return best;

  // Longest contiguous parsable region.
  std::size_t n = std::min(lines.size(), kMaxScanLines);
  for (std::size_t len = n; len >= 1 && !found; --len) {
    for (std::size_t s = 0; s + len <= n; ++s) {
      if (!could_start(lines[s].text) || !could_end(lines[s + len - 1].text)) continue;
      std::string_view region = response.substr(lines[s].begin, lines[s + len - 1].end - lines[s].begin);
      if (parses_with_declaration(region)) {
        best.text = std::string(region);
        found = true;
        break;
      }
    }
  }
  if (!found) throw NoCodeFound();
  return best;
}

}  // namespace hlsr::prompt

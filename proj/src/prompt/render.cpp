#include "hlsr/prompt/render.hpp"

#include <cctype>
#include <sstream>

namespace hlsr::prompt {

namespace {

constexpr std::pair<ErrorClass, std::string_view> kClassNames[] = {
    {ErrorClass::Compile, "Compile"}, {ErrorClass::Functional, "Functional"}, {ErrorClass::Synthesis, "Synthesis"}};

std::string_view class_label(ErrorClass c) {
  switch (c) {
    case ErrorClass::Compile: return "The code does not compile.";
    case ErrorClass::Functional: return "The code compiles but does not behave like the original.";
    case ErrorClass::Synthesis: return "The code cannot be synthesized by the HLS tool.";
  }
  return "";
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (b <= text.size()) {
    std::size_t e = text.find('\n', b);
    if (e == std::string_view::npos) e = text.size();
    out.emplace_back(text.substr(b, e - b));
    b = e + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(ErrorClass c) {
  for (const auto& [k, n] : kClassNames)
    if (k == c) return n;
  return "?";
}

std::optional<ErrorClass> parse_error_class(std::string_view s) {
  for (const auto& [k, n] : kClassNames)
    if (n == s) return k;
  return std::nullopt;
}

std::vector<std::string> placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
      ++i;
      continue;
    }
    if (tmpl[i] != '{') continue;
    std::size_t e = tmpl.find('}', i);
    if (e == std::string_view::npos) break;
    std::string name(tmpl.substr(i + 1, e - i - 1));
    bool ident = !name.empty();
    for (char c : name) ident = ident && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    if (ident) {
      bool seen = false;
      for (const auto& n : out) seen = seen || n == name;
      if (!seen) out.push_back(name);
      i = e;
    }
  }
  return out;
}

std::string render_template(std::string_view tmpl, std::string_view code, std::optional<std::string_view> function,
                            std::optional<std::string_view> context) {
  std::string out;
  out.reserve(tmpl.size() + code.size());
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    char c = tmpl[i];
    if ((c == '{' || c == '}') && i + 1 < tmpl.size() && tmpl[i + 1] == c) {
      out += c;
      ++i;
      continue;
    }
    if (c == '{') {
      std::size_t e = tmpl.find('}', i);
      if (e != std::string_view::npos) {
        std::string_view name = tmpl.substr(i + 1, e - i - 1);
        if (name == "code") {
          out += code;
          if (!code.empty() && code.back() != '\n') out += '\n';
        } else if (name == "function") {
          if (!function || function->empty()) throw MissingPlaceholder("function");
          out += *function;
        } else if (name == "context") {
          if (context) out += *context;
        } else {
          throw MissingPlaceholder(std::string(name));
        }
        i = e;
        continue;
      }
    }
    out += c;
  }
  return out;
}

std::string render_prompt(const TransformStep& step, std::string_view code, std::optional<std::string_view> context,
                          std::optional<std::string_view> function) {
  return render_template(step.template_text, code, function, context);
}

std::string default_hint(const RepairContext& ctx) {
  if (ctx.error_class == ErrorClass::Synthesis && ctx.rule) {
    switch (*ctx.rule) {
      case RuleId::Recur:
        return "Replace the recursion with a while loop that pushes and pops work items on an explicit stack, for "
               "example int stack[100] with an int top index.";
      case RuleId::DynMem:
        return "Replace malloc, calloc and free with arrays whose size is a compile-time constant.";
      case RuleId::PtrParam:
        return "Declare array parameters with their full size, e.g. uint8_t state[4][4] instead of a pointer.";
      case RuleId::Vla:
        return "Use a #define constant as the array size instead of a variable.";
      case RuleId::Loop:
        return "Loop up to a constant maximum and exit early with an if inside the loop when the real bound is "
               "reached.";
      case RuleId::Io:
        return "Delete the printf and file calls; return values through parameters instead.";
      case RuleId::FnPtr:
        return "Call the functions directly, selecting between them with an if or switch.";
      case RuleId::Math:
        return "Precompute the math offline and compare against constant thresholds.";
    }
  }
  switch (ctx.error_class) {
    case ErrorClass::Compile:
      return "Check that every variable is declared before use, that braces are balanced and that the function "
             "signatures were not changed.";
    case ErrorClass::Functional:
      return "Compare the loop logic and array indices with the original code step by step; the counterexample "
             "above shows an input where the results differ.";
    case ErrorClass::Synthesis:
      return "Remove recursion, pointers, dynamic memory and unbounded loops.";
  }
  return "";
}

std::string render_repair(const TransformStep& repair_step, const RepairContext& ctx, std::string_view code,
                          int attempt, std::optional<std::string_view> function) {
  std::ostringstream os;
  os << '[' << to_string(ctx.error_class) << " error] " << class_label(ctx.error_class) << '\n' << ctx.message;
  if (!ctx.message.empty() && ctx.message.back() != '\n') os << '\n';
  if (attempt >= 2) {
    os << "\nThe previous fix did not work. The problem is here:\n";
    auto lines = split_lines(code);
    bool any = false;
    for (int ln : ctx.affected_lines) {
      if (ln < 1 || static_cast<std::size_t>(ln) > lines.size()) continue;
      os << "  line " << ln << ": " << lines[static_cast<std::size_t>(ln) - 1] << '\n';
      any = true;
    }
    if (!any) os << "  (no line information; look at the part of the code the message refers to)\n";
  }
  if (attempt >= 3) os << "\nHint: " << (ctx.hint ? *ctx.hint : default_hint(ctx)) << '\n';
  std::string context = os.str();
  return render_template(repair_step.template_text, code, function, std::string_view(context));
}

}  // namespace hlsr::prompt

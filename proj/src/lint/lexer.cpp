#include "hlsr/lint/lexer.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

namespace hlsr::lint {

SyntaxError::SyntaxError(SourceLoc loc, const std::string& message)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + message),
      loc_(loc),
      detail_(message) {}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Longest-match punctuators, longest first.
constexpr std::string_view kPuncts[] = {
    "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "+=",
    "-=",  "*=",  "/=",  "%=", "&=", "|=", "^=", "::", "+",  "-",  "*",  "/",  "%",  "<",  ">",
    "=",   "!",   "~",   "&",  "|",  "^",  "?",  ":",  ";",  ",",  ".",  "(",  ")",  "[",  "]",
    "{",   "}",   "#"};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : src_(text) {}

  LexResult run() {
    LexResult out;
    bool line_start = true;
    while (true) {
      skip_space_and_comments(line_start);
      if (pos_ >= src_.size()) break;
      if (line_start && src_[pos_] == '#') {
        directive(out);
        line_start = true;
        continue;
      }
      line_start = false;
      Token tok = next_token();
      emit(std::move(tok), out);
    }
    Token end;
    end.kind = TokenKind::End;
    end.loc = here();
    out.tokens.push_back(end);
    out.defines = defines_;
    return out;
  }

 private:
  SourceLoc here() const { return SourceLoc{line_, static_cast<int>(pos_ - line_begin_) + 1, pos_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      line_begin_ = pos_ + 1;
    }
    ++pos_;
  }

  // Skips whitespace and comments; sets line_start when a newline is crossed.
  void skip_space_and_comments(bool& line_start) {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        line_start = true;
        advance();
      } else if (c == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') {
        advance();
        advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        SourceLoc start = here();
        advance();
        advance();
        while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) advance();
        if (pos_ + 1 >= src_.size()) throw SyntaxError(start, "unterminated comment");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token next_token() {
    Token tok;
    tok.loc = here();
    char c = src_[pos_];
    if (is_ident_start(c)) {
      std::size_t b = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
      tok.kind = TokenKind::Ident;
      tok.text = std::string(src_.substr(b, pos_ - b));
      // Wide / unicode string and char prefixes.
      if ((tok.text == "L" || tok.text == "u8" || tok.text == "u" || tok.text == "U") && pos_ < src_.size() &&
          (src_[pos_] == '"' || src_[pos_] == '\'')) {
        Token lit = next_token();
        lit.loc = tok.loc;
        return lit;
      }
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return number(tok);
    }
    if (c == '"' || c == '\'') {
      std::size_t b = pos_;
      char quote = c;
      advance();
      while (pos_ < src_.size() && src_[pos_] != quote) {
        if (src_[pos_] == '\n') throw SyntaxError(tok.loc, "unterminated literal");
        if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
        advance();
      }
      if (pos_ >= src_.size()) throw SyntaxError(tok.loc, "unterminated literal");
      advance();
      tok.text = std::string(src_.substr(b, pos_ - b));
      if (quote == '"') {
        tok.kind = TokenKind::String;
      } else {
        tok.kind = TokenKind::Char;
        tok.int_value = char_value(tok.text);
      }
      return tok;
    }
    for (std::string_view p : kPuncts) {
      if (src_.substr(pos_, p.size()) == p) {
        for (std::size_t i = 0; i < p.size(); ++i) advance();
        tok.kind = TokenKind::Punct;
        tok.text = std::string(p);
        return tok;
      }
    }
    throw SyntaxError(tok.loc, std::string("unexpected character '") + c + "'");
  }

  static long long char_value(const std::string& lit) {
    if (lit.size() < 3) return 0;
    if (lit[1] != '\\') return static_cast<unsigned char>(lit[1]);
    switch (lit[2]) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case '0': return std::strtol(lit.substr(2, lit.size() - 3).c_str(), nullptr, 8);
      case 'x': return std::strtol(lit.substr(3, lit.size() - 4).c_str(), nullptr, 16);
      default: return static_cast<unsigned char>(lit[2]);
    }
  }

  Token number(Token tok) {
    std::size_t b = pos_;
    bool is_float = false;
    bool hex = src_.substr(pos_, 2) == "0x" || src_.substr(pos_, 2) == "0X";
    if (hex) {
      advance();
      advance();
    }
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isxdigit(static_cast<unsigned char>(c)) && (hex || std::isdigit(static_cast<unsigned char>(c)))) {
        advance();
      } else if (c == '.') {
        is_float = true;
        advance();
      } else if (!hex && (c == 'e' || c == 'E')) {
        is_float = true;
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      } else if (c == '\'' && pos_ + 1 < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
        advance();  // C++14 digit separator
      } else {
        break;
      }
    }
    std::string digits(src_.substr(b, pos_ - b));
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) {
      char s = static_cast<char>(std::tolower(static_cast<unsigned char>(src_[pos_])));
      if (s == 'f' && !hex) is_float = true;
      advance();
    }
    tok.text = std::string(src_.substr(b, pos_ - b));
    std::string clean;
    for (char c : digits)
      if (c != '\'') clean += c;
    if (is_float) {
      tok.kind = TokenKind::Float;
      tok.float_value = std::strtod(clean.c_str(), nullptr);
    } else {
      tok.kind = TokenKind::Int;
      int base = hex ? 16 : (clean.size() > 1 && clean[0] == '0' ? 8 : 10);
      tok.int_value = static_cast<long long>(std::strtoull(hex ? clean.c_str() + 2 : clean.c_str(), nullptr, base));
    }
    return tok;
  }

  std::string rest_of_line() {
    std::string text;
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') {
        advance();
        advance();
        text += ' ';
        continue;
      }
      if (src_[pos_] == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        break;
      }
      if (src_[pos_] == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        bool dummy = false;
        skip_space_and_comments(dummy);
        text += ' ';
        continue;
      }
      text += src_[pos_];
      advance();
    }
    return text;
  }

  void directive(LexResult& out) {
    SourceLoc loc = here();
    advance();  // '#'
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) advance();
    std::size_t b = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
    std::string name(src_.substr(b, pos_ - b));
    if (name == "define") {
      while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) advance();
      std::size_t nb = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
      std::string macro(src_.substr(nb, pos_ - nb));
      if (macro.empty()) throw SyntaxError(loc, "#define without a name");
      if (pos_ < src_.size() && src_[pos_] == '(') {
        rest_of_line();
        out.notes.push_back({loc, "function-like macro '" + macro + "' not expanded"});
        return;
      }
      std::string body = rest_of_line();
      Lexer sub(body);
      std::vector<Token> toks;
      bool dummy = false;
      while (true) {
        sub.skip_space_and_comments(dummy);
        if (sub.pos_ >= sub.src_.size()) break;
        toks.push_back(sub.next_token());
      }
      defines_[macro] = std::move(toks);
      return;
    }
    if (name == "undef") {
      std::string rest = rest_of_line();
      std::size_t s = rest.find_first_not_of(" \t");
      std::size_t e = rest.find_last_not_of(" \t");
      if (s != std::string::npos) defines_.erase(rest.substr(s, e - s + 1));
      return;
    }
    rest_of_line();
    if (name.empty()) return;  // null directive
    std::string what = name == "pragma" || name == "include" ? "#" + name + " ignored"
                                                             : "#" + name + " not evaluated; all branches kept";
    out.notes.push_back({loc, what});
  }

  void emit(Token tok, LexResult& out) {
    std::set<std::string> active;
    expand(std::move(tok), out.tokens, active, nullptr);
  }

  void expand(Token tok, std::vector<Token>& sink, std::set<std::string>& active, const SourceLoc* use_site) {
    if (use_site) {
      tok.loc = *use_site;
      tok.from_macro = true;
    }
    if (tok.kind == TokenKind::Ident) {
      auto it = defines_.find(tok.text);
      if (it != defines_.end() && !active.count(tok.text)) {
        SourceLoc at = tok.loc;
        active.insert(tok.text);
        for (const Token& t : it->second) expand(t, sink, active, &at);
        active.erase(tok.text);
        return;
      }
    }
    sink.push_back(std::move(tok));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::size_t line_begin_ = 0;
  std::map<std::string, std::vector<Token>> defines_;
};

}  // namespace

LexResult lex(std::string_view text) { return Lexer(text).run(); }

}  // namespace hlsr::lint

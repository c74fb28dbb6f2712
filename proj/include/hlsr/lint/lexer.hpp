#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hlsr/lint/ast.hpp"

namespace hlsr::lint {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(SourceLoc loc, const std::string& message);
  const SourceLoc& loc() const noexcept { return loc_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  SourceLoc loc_;
  std::string detail_;
};

enum class TokenKind { Ident, Int, Float, String, Char, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceLoc loc;
  long long int_value = 0;
  double float_value = 0.0;
  bool from_macro = false;
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by an End token
  std::vector<Note> notes;
  std::map<std::string, std::vector<Token>> defines;  // object-like macros at end of input
};

/// Tokenizes C source and applies object-like `#define` substitution.
/// Every other directive is dropped and reported as a note; function-like
/// macros are not expanded.
LexResult lex(std::string_view text);

}  // namespace hlsr::lint

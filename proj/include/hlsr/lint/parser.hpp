#pragma once

#include <string_view>

#include "hlsr/lint/ast.hpp"
#include "hlsr/lint/lexer.hpp"

namespace hlsr::lint {

/// Parses the supported C subset (plus the C++ spellings common in HLS code:
/// `ac_int<...>` style template types, references, functional casts).
/// Throws SyntaxError on input it cannot read.
TranslationUnit parse(const LexResult& lexed);

/// True for names that denote template types the parser knows about.
bool is_known_template_type(std::string_view name);

}  // namespace hlsr::lint

#include "hlsr/lint/parser.hpp"

#include <set>
#include <utility>

namespace hlsr::lint {

namespace {

const std::set<std::string, std::less<>> kBuiltinTypeWords = {
    "void", "char", "short", "int", "long", "float", "double", "signed", "unsigned", "_Bool", "bool", "__int128"};

const std::set<std::string, std::less<>> kQualifierWords = {
    "static",   "extern",  "typedef",  "register",   "inline",    "__inline", "__inline__", "_Noreturn",
    "volatile", "restrict", "__restrict", "constexpr", "thread_local", "mutable",  "auto",       "const"};

const std::set<std::string, std::less<>> kTemplateTypes = {
    "ac_int", "ac_fixed", "ac_float", "ac_complex", "ac_channel", "ap_int", "ap_uint", "ap_fixed", "ap_ufixed",
    "hls::stream", "std::array", "std::vector"};

const std::set<std::string, std::less<>> kSeedTypedefs = {
    "int8_t",   "int16_t",   "int32_t",   "int64_t",  "uint8_t", "uint16_t", "uint32_t",  "uint64_t",
    "size_t",   "ssize_t",   "ptrdiff_t", "intptr_t", "uintptr_t", "FILE",   "wchar_t",   "int_least8_t",
    "uint_fast8_t", "uint_fast16_t", "uint_fast32_t", "int_fast32_t"};

const std::set<std::string, std::less<>> kOpaqueKeywords = {"goto", "asm", "__asm__", "__asm", "throw", "try"};

struct Storage {
  bool is_static = false;
  bool is_typedef = false;
  bool is_extern = false;
};

class Parser {
 public:
  explicit Parser(const LexResult& lexed) : toks_(lexed.tokens) {
    unit_.notes = lexed.notes;
    for (const auto& n : kSeedTypedefs) type_names_.insert(n);
    scopes_.emplace_back();
  }

  TranslationUnit run() {
    while (!at_end()) top_level();
    return std::move(unit_);
  }

 private:
  // ---- token helpers -------------------------------------------------------
  const Token& peek(std::size_t k = 0) const {
    std::size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  bool is(std::string_view text, std::size_t k = 0) const {
    const Token& t = peek(k);
    return (t.kind == TokenKind::Punct || t.kind == TokenKind::Ident) && t.text == text;
  }
  bool is_ident(std::size_t k = 0) const { return peek(k).kind == TokenKind::Ident; }
  const Token& take() {
    const Token& t = peek();
    if (t.kind != TokenKind::End) ++pos_;
    return t;
  }
  bool accept(std::string_view text) {
    if (is(text)) {
      ++pos_;
      return true;
    }
    return false;
  }
  const Token& expect(std::string_view text) {
    if (!is(text)) fail("expected '" + std::string(text) + "'");
    return take();
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string got = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.loc, what + ", got " + got);
  }

  // ---- scopes ---------------------------------------------------------------
  void declare_var(const std::string& name) {
    if (!name.empty()) scopes_.back().insert(name);
  }
  bool is_var(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (it->count(name)) return true;
    return false;
  }
  bool is_type_name(const std::string& name) const {
    return !is_var(name) && (type_names_.count(name) || kTemplateTypes.count(name));
  }

  // Skips a balanced region starting at an opening bracket.
  void skip_balanced() {
    std::string open = peek().text;
    std::string close = open == "(" ? ")" : open == "[" ? "]" : "}";
    int depth = 0;
    do {
      if (at_end()) fail("unbalanced '" + open + "'");
      if (is(open)) ++depth;
      if (is(close)) --depth;
      take();
    } while (depth > 0);
  }

  void skip_to_semicolon_balanced() {
    while (!at_end() && !is(";")) {
      if (is("(") || is("[") || is("{")) {
        skip_balanced();
        if (is(";") || at_end()) break;
        continue;
      }
      take();
    }
    accept(";");
  }

  // ---- declarations ---------------------------------------------------------
  bool starts_type_at(std::size_t k) const {
    const Token& t = peek(k);
    if (t.kind != TokenKind::Ident) return false;
    if (kBuiltinTypeWords.count(t.text) || kQualifierWords.count(t.text)) return true;
    if (t.text == "struct" || t.text == "union" || t.text == "enum") return true;
    if (t.text == "std" && is("::", k + 1)) return true;
    return is_type_name(t.text);
  }

  // Unknown identifier used as a type, e.g. `BitSequence *seq;`.
  bool looks_like_unknown_type_decl() const {
    if (!is_ident() || is_var(peek().text) || kOpaqueKeywords.count(peek().text)) return false;
    std::size_t k = 1;
    while (is("*", k) || is("&", k) || is("const", k)) ++k;
    if (!is_ident(k) || kBuiltinTypeWords.count(peek(k).text)) return false;
    const Token& after = peek(k + 1);
    if (after.kind != TokenKind::Punct) return false;
    return after.text == ";" || after.text == "=" || after.text == "," || after.text == "[" || after.text == ")" ||
           (k == 1 && after.text == "(");
  }

  std::string template_args() {
    std::string text = "<";
    expect("<");
    int depth = 1;
    bool first = true;
    while (depth > 0) {
      if (at_end()) fail("unterminated template argument list");
      const Token& t = take();
      if (t.text == "<") ++depth;
      if (t.text == ">") --depth;
      if (t.text == ">>") depth -= 2;
      if (depth <= 0) {
        if (t.text == ">>") text += ">";
        break;
      }
      if (t.text == ",") {
        text += ", ";
        first = true;
        continue;
      }
      if (!first && t.kind != TokenKind::Punct && text.back() != '<' && text.back() != ' ') text += " ";
      text += t.text;
      first = false;
    }
    return text + ">";
  }

  void parse_record_body(const std::string& keyword) {
    expect("{");
    if (keyword == "enum") {
      long long next = 0;
      while (!is("}")) {
        if (!is_ident()) fail("expected enumerator");
        std::string name = take().text;
        if (accept("=")) {
          ExprPtr e = assignment_expr();
          if (e->kind == ExprKind::IntLit) next = e->int_value;
          else if (e->kind == ExprKind::Unary && e->op == "-" && e->args[0]->kind == ExprKind::IntLit)
            next = -e->args[0]->int_value;
        }
        unit_.enum_constants[name] = next++;
        if (!accept(",")) break;
      }
      expect("}");
      return;
    }
    scopes_.emplace_back();
    while (!is("}")) {
      if (at_end()) fail("unterminated record");
      TypeName base;
      Storage st;
      if (!decl_specifiers(base, st, true)) fail("expected member declaration");
      if (!is(";")) {
        do {
          Decl d;
          d.type = base;
          declarator(d, false);
          if (accept(":")) conditional_expr();  // bit-field width
        } while (accept(","));
      }
      expect(";");
    }
    scopes_.pop_back();
    expect("}");
  }

  // Returns false if no type specifier at all was found.
  bool decl_specifiers(TypeName& type, Storage& st, bool allow_unknown_ident) {
    bool have_type = false;
    bool have_builtin = false;
    while (true) {
      if (!is_ident()) break;
      const std::string& w = peek().text;
      if (w == "__attribute__" || w == "__declspec" || w == "alignas") {
        take();
        if (is("(")) skip_balanced();
        continue;
      }
      if (w == "static") st.is_static = true;
      if (w == "typedef") st.is_typedef = true;
      if (w == "extern") st.is_extern = true;
      if (w == "const") {
        type.is_const = true;
        take();
        continue;
      }
      if (kQualifierWords.count(w)) {
        take();
        continue;
      }
      if (kBuiltinTypeWords.count(w)) {
        if (have_type && !have_builtin) break;
        type.base += (type.base.empty() ? "" : " ") + w;
        have_type = have_builtin = true;
        take();
        continue;
      }
      if (have_type) break;
      if (w == "struct" || w == "union" || w == "enum" || w == "class") {
        std::string kw = take().text;
        std::string tag;
        if (is_ident()) tag = take().text;
        type.base = kw + (tag.empty() ? " <anonymous>" : " " + tag);
        if (is("{")) parse_record_body(kw);
        have_type = true;
        continue;
      }
      if (w == "std" && is("::", 1)) {
        std::string name = take().text;
        while (accept("::")) name += "::" + take().text;
        if (is("<")) name += template_args();
        type.base = name;
        have_type = true;
        continue;
      }
      if (is_type_name(w)) {
        std::string name = take().text;
        while (is("::") && is_ident(1)) {
          take();
          name += "::" + take().text;
        }
        if (is("<") && (kTemplateTypes.count(name) || type_names_.count(name))) name += template_args();
        type.base = name;
        have_type = true;
        continue;
      }
      if (allow_unknown_ident && !is_var(w) && !kOpaqueKeywords.count(w)) {
        // Identifier in type position followed by a declarator: treat as a type name.
        std::size_t k = 1;
        while (is("*", k) || is("&", k) || is("const", k)) ++k;
        if (is_ident(k) || (k > 1 && (is(")", k) || is(",", k)))) {
          type_names_.insert(w);
          type.base = take().text;
          have_type = true;
          continue;
        }
      }
      break;
    }
    return have_type || st.is_static || st.is_extern || st.is_typedef || type.is_const;
  }

  // Parses a (possibly abstract) declarator into d.name / d.type.chain.
  void declarator(Decl& d, bool abstract_ok) {
    std::vector<Derivation> prefix;  // pointer/reference operators, left to right
    while (true) {
      if (is("*")) {
        take();
        Derivation p;
        p.kind = Derivation::Kind::Pointer;
        while (is_ident() && (peek().text == "const" || peek().text == "volatile" || peek().text == "restrict" ||
                              peek().text == "__restrict")) {
          if (take().text == "const") p.is_const = true;
        }
        prefix.push_back(std::move(p));
      } else if (is("&") || is("&&")) {
        take();
        Derivation r;
        r.kind = Derivation::Kind::Reference;
        prefix.push_back(std::move(r));
      } else if (is_ident() && peek().text == "__attribute__") {
        take();
        if (is("(")) skip_balanced();
      } else {
        break;
      }
    }
    std::vector<Derivation> inner;
    bool have_inner = false;
    if (is("(") && (is("*", 1) || is("&", 1) || is("^", 1))) {
      take();
      Decl sub;
      declarator(sub, abstract_ok);
      expect(")");
      d.name = sub.name;
      d.loc = sub.loc;
      inner = std::move(sub.type.chain);
      have_inner = true;
    } else if (is_ident() && !kBuiltinTypeWords.count(peek().text)) {
      d.loc = peek().loc;
      d.name = take().text;
    } else if (!abstract_ok) {
      fail("expected declarator");
    } else {
      d.loc = peek().loc;
    }
    std::vector<Derivation> suffix;
    while (true) {
      if (is("[")) {
        take();
        Derivation a;
        a.kind = Derivation::Kind::Array;
        while (is_ident() && (peek().text == "static" || peek().text == "const" || peek().text == "restrict")) take();
        if (!is("]")) a.dim = std::shared_ptr<Expr>(assignment_expr().release());
        expect("]");
        suffix.push_back(std::move(a));
      } else if (is("(")) {
        take();
        Derivation f;
        f.kind = Derivation::Kind::Function;
        f.params = parameter_list();
        expect(")");
        while (is_ident() && (peek().text == "const" || peek().text == "noexcept")) take();
        suffix.push_back(std::move(f));
      } else {
        break;
      }
    }
    // Chain from the name outwards: inner declarator, then suffixes, then prefix operators.
    std::vector<Derivation> chain;
    if (have_inner) chain = std::move(inner);
    for (auto& s : suffix) chain.push_back(std::move(s));
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) chain.push_back(std::move(*it));
    d.type.chain = std::move(chain);
  }

  std::vector<DeclPtr> parameter_list() {
    std::vector<DeclPtr> params;
    if (is(")")) return params;
    if (is("void") && is(")", 1)) {
      take();
      return params;
    }
    while (true) {
      if (accept("...")) break;
      auto p = std::make_shared<Decl>();
      Storage st;
      if (!decl_specifiers(p->type, st, true)) {
        // Lone unknown identifier: a type in an unnamed prototype parameter.
        if (is_ident() && (is(",", 1) || is(")", 1))) {
          type_names_.insert(peek().text);
          p->type.base = take().text;
        } else {
          fail("expected parameter declaration");
        }
      }
      declarator(*p, true);
      if (accept("=")) assignment_expr();  // C++ default argument
      params.push_back(std::move(p));
      if (!accept(",")) break;
    }
    return params;
  }

  ExprPtr initializer() {
    if (is("{")) {
      auto list = std::make_unique<Expr>();
      list->kind = ExprKind::InitList;
      list->loc = take().loc;
      while (!is("}")) {
        if (at_end()) fail("unterminated initializer");
        // Designators: .field = / [index] =
        if (is(".") && is_ident(1)) {
          take();
          take();
          expect("=");
        } else if (is("[")) {
          std::size_t save = pos_;
          skip_balanced();
          if (!accept("=")) pos_ = save;
        }
        list->args.push_back(initializer());
        if (!accept(",")) break;
      }
      expect("}");
      return list;
    }
    return assignment_expr();
  }

  // Parses declarators after the specifiers, up to and including ';'.
  std::vector<DeclPtr> init_declarators(const TypeName& base, const Storage& st) {
    std::vector<DeclPtr> out;
    if (accept(";")) return out;
    do {
      auto d = std::make_shared<Decl>();
      d->type.base = base.base;
      d->type.is_const = base.is_const;
      d->is_static = st.is_static;
      d->is_typedef = st.is_typedef;
      d->is_extern = st.is_extern;
      declarator(*d, false);
      if (accept("=")) {
        d->init = initializer();
      } else if (is("{") && !st.is_typedef) {
        d->init = initializer();  // C++ brace initialisation
      }
      if (d->is_typedef) {
        type_names_.insert(d->name);
        unit_.typedefs[d->name] = TypedefInfo{d->type};
      } else {
        declare_var(d->name);
      }
      out.push_back(std::move(d));
    } while (accept(","));
    expect(";");
    return out;
  }

  void opaque_top_level(const std::string& what) {
    SourceLoc loc = peek().loc;
    while (!at_end() && !is(";") && !is("{")) {
      if (is("(") || is("[")) {
        skip_balanced();
        continue;
      }
      take();
    }
    if (is("{")) skip_balanced();
    accept(";");
    unit_.notes.push_back({loc, what + " not modelled"});
  }

  void top_level() {
    if (accept(";")) return;
    if (is("extern") && peek(1).kind == TokenKind::String) {
      take();
      take();
      if (accept("{")) {
        while (!is("}")) {
          if (at_end()) fail("unterminated extern block");
          top_level();
        }
        expect("}");
      }
      return;
    }
    if (is_ident() && (peek().text == "template" || peek().text == "namespace" || peek().text == "using" ||
                       peek().text == "static_assert" || peek().text == "_Static_assert")) {
      opaque_top_level(peek().text + " declaration");
      return;
    }
    SourceLoc start = peek().loc;
    TypeName base;
    Storage st;
    bool have = decl_specifiers(base, st, true);
    if (!have) {
      // Implicit-int function definition, e.g. `main() { ... }`.
      if (is_ident() && is("(", 1)) {
        base.base = "int";
      } else {
        fail("expected declaration");
      }
    }
    if (accept(";")) return;  // struct/enum definition without declarators

    auto first = std::make_shared<Decl>();
    first->type.base = base.base;
    first->type.is_const = base.is_const;
    first->is_static = st.is_static;
    first->is_typedef = st.is_typedef;
    first->is_extern = st.is_extern;
    declarator(*first, false);
    bool is_function = !first->type.chain.empty() && first->type.chain[0].kind == Derivation::Kind::Function;
    if (is_function && is("{") && !st.is_typedef) {
      declare_var(first->name);
      function_definition(std::move(first), start);
      return;
    }
    // Not a definition: finish the declarator list.
    std::vector<DeclPtr> decls;
    auto finish = [&](DeclPtr d) {
      if (accept("=")) d->init = initializer();
      if (d->is_typedef) {
        type_names_.insert(d->name);
        unit_.typedefs[d->name] = TypedefInfo{d->type};
      } else {
        declare_var(d->name);
      }
      decls.push_back(std::move(d));
    };
    finish(std::move(first));
    while (accept(",")) {
      auto d = std::make_shared<Decl>();
      d->type.base = base.base;
      d->type.is_const = base.is_const;
      d->is_static = st.is_static;
      d->is_typedef = st.is_typedef;
      d->is_extern = st.is_extern;
      declarator(*d, false);
      finish(std::move(d));
    }
    expect(";");
    for (auto& d : decls) {
      if (d->is_typedef) continue;
      bool fn = !d->type.chain.empty() && d->type.chain[0].kind == Derivation::Kind::Function;
      (fn ? unit_.prototypes : unit_.globals).push_back(std::move(d));
    }
  }

  void function_definition(DeclPtr decl, SourceLoc start) {
    for (const auto& f : unit_.functions)
      if (f.decl->name == decl->name) throw SyntaxError(decl->loc, "redefinition of function '" + decl->name + "'");
    FunctionDef fn;
    fn.loc = start;
    scopes_.emplace_back();
    for (const auto& p : decl->type.chain[0].params) declare_var(p->name);
    fn.body_open = peek().loc.offset;
    fn.body = compound();
    fn.body_close = last_close_offset_;
    scopes_.pop_back();
    fn.decl = std::move(decl);
    unit_.functions.push_back(std::move(fn));
  }

  // ---- statements ----------------------------------------------------------
  StmtPtr make(StmtKind k, SourceLoc loc) {
    auto s = std::make_unique<Stmt>();
    s->kind = k;
    s->loc = loc;
    return s;
  }

  StmtPtr compound() {
    auto s = make(StmtKind::Compound, expect("{").loc);
    scopes_.emplace_back();
    while (!is("}")) {
      if (at_end()) fail("expected '}'");
      s->children.push_back(statement());
    }
    last_close_offset_ = peek().loc.offset;
    take();
    scopes_.pop_back();
    return s;
  }

  bool looks_like_declaration() const {
    if (!is_ident()) return false;
    const std::string& w = peek().text;
    if (kBuiltinTypeWords.count(w) || kQualifierWords.count(w)) return true;
    if (w == "struct" || w == "union" || w == "enum") return true;
    if (w == "std" && is("::", 1)) return !is("(", 3);
    if (is_type_name(w)) {
      // `T(...)` at statement start is a functional cast expression.
      if (is("(", 1)) return false;
      if (is("<", 1)) return true;
      return !is("::", 1) || true;
    }
    return looks_like_unknown_type_decl();
  }

  StmtPtr declaration_statement() {
    auto s = make(StmtKind::Decl, peek().loc);
    TypeName base;
    Storage st;
    if (!decl_specifiers(base, st, true)) fail("expected declaration");
    s->decls = init_declarators(base, st);
    return s;
  }

  StmtPtr statement() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    if (is("{")) return compound();
    if (accept(";")) return make(StmtKind::Empty, loc);
    if (t.kind == TokenKind::Ident) {
      const std::string w = t.text;
      if (w == "if") {
        take();
        auto s = make(StmtKind::If, loc);
        expect("(");
        s->cond = expression();
        expect(")");
        s->children.push_back(statement());
        if (accept("else")) s->children.push_back(statement());
        return s;
      }
      if (w == "for") {
        take();
        auto s = make(StmtKind::For, loc);
        expect("(");
        scopes_.emplace_back();
        if (looks_like_declaration()) {
          auto d = declaration_statement();
          s->decls = std::move(d->decls);
        } else {
          if (!is(";")) s->init = expression();
          expect(";");
        }
        if (!is(";")) s->cond = expression();
        expect(";");
        if (!is(")")) s->step = expression();
        expect(")");
        s->children.push_back(statement());
        scopes_.pop_back();
        return s;
      }
      if (w == "while") {
        take();
        auto s = make(StmtKind::While, loc);
        expect("(");
        s->cond = expression();
        expect(")");
        s->children.push_back(statement());
        return s;
      }
      if (w == "do") {
        take();
        auto s = make(StmtKind::DoWhile, loc);
        s->children.push_back(statement());
        expect("while");
        expect("(");
        s->cond = expression();
        expect(")");
        expect(";");
        return s;
      }
      if (w == "switch") {
        take();
        auto s = make(StmtKind::Switch, loc);
        expect("(");
        s->cond = expression();
        expect(")");
        s->children.push_back(statement());
        return s;
      }
      if (w == "case") {
        take();
        auto s = make(StmtKind::Case, loc);
        s->cond = conditional_expr();
        expect(":");
        return s;
      }
      if (w == "default" && is(":", 1)) {
        take();
        take();
        return make(StmtKind::Default, loc);
      }
      if (w == "break" || w == "continue") {
        take();
        expect(";");
        return make(w == "break" ? StmtKind::Break : StmtKind::Continue, loc);
      }
      if (w == "return") {
        take();
        auto s = make(StmtKind::Return, loc);
        if (!is(";")) s->expr = expression();
        expect(";");
        return s;
      }
      if (kOpaqueKeywords.count(w)) {
        take();
        auto s = make(StmtKind::Opaque, loc);
        s->text = w;
        if (w == "try") {
          if (is("{")) skip_balanced();
          while (is("catch")) {
            take();
            if (is("(")) skip_balanced();
            if (is("{")) skip_balanced();
          }
        } else {
          skip_to_semicolon_balanced();
        }
        unit_.notes.push_back({loc, "'" + w + "' statement kept as an opaque construct"});
        return s;
      }
      if (is(":", 1) && !is_type_name(w)) {
        take();
        take();
        auto s = make(StmtKind::Label, loc);
        s->text = w;
        return s;
      }
      if (looks_like_declaration()) return declaration_statement();
    }
    auto s = make(StmtKind::Expr, loc);
    s->expr = expression();
    expect(";");
    return s;
  }

  // ---- expressions ---------------------------------------------------------
  ExprPtr node(ExprKind k, SourceLoc loc, std::string op = {}) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    e->loc = loc;
    e->op = std::move(op);
    return e;
  }

  ExprPtr expression() {
    ExprPtr lhs = assignment_expr();
    if (!is(",")) return lhs;
    auto c = node(ExprKind::Comma, lhs->loc, ",");
    c->args.push_back(std::move(lhs));
    while (accept(",")) c->args.push_back(assignment_expr());
    return c;
  }

  static bool is_assign_op(const std::string& s) {
    return s == "=" || s == "+=" || s == "-=" || s == "*=" || s == "/=" || s == "%=" || s == "&=" || s == "|=" ||
           s == "^=" || s == "<<=" || s == ">>=";
  }

  ExprPtr assignment_expr() {
    ExprPtr lhs = conditional_expr();
    if (peek().kind == TokenKind::Punct && is_assign_op(peek().text)) {
      const Token& op = take();
      auto a = node(ExprKind::Assign, op.loc, op.text);
      a->loc = lhs->loc;
      a->args.push_back(std::move(lhs));
      a->args.push_back(is("{") ? initializer() : assignment_expr());
      return a;
    }
    return lhs;
  }

  ExprPtr conditional_expr() {
    ExprPtr c = binary_expr(0);
    if (!is("?")) return c;
    take();
    auto t = node(ExprKind::Ternary, c->loc, "?:");
    t->args.push_back(std::move(c));
    t->args.push_back(expression());
    expect(":");
    t->args.push_back(assignment_expr());
    return t;
  }

  static int precedence(const std::string& op) {
    static const std::pair<const char*, int> table[] = {
        {"||", 1}, {"&&", 2}, {"|", 3},  {"^", 4},  {"&", 5},  {"==", 6}, {"!=", 6}, {"<", 7},  {">", 7}, {"<=", 7},
        {">=", 7}, {"<<", 8}, {">>", 8}, {"+", 9},  {"-", 9},  {"*", 10}, {"/", 10}, {"%", 10}};
    for (const auto& [o, p] : table)
      if (op == o) return p;
    return -1;
  }

  ExprPtr binary_expr(int min_prec) {
    ExprPtr lhs = cast_expr();
    while (peek().kind == TokenKind::Punct) {
      int p = precedence(peek().text);
      if (p < 0 || p <= min_prec - 1 || p < min_prec) break;
      const Token& op = take();
      ExprPtr rhs = binary_expr(p + 1);
      auto b = node(ExprKind::Binary, lhs->loc, op.text);
      b->args.push_back(std::move(lhs));
      b->args.push_back(std::move(rhs));
      lhs = std::move(b);
    }
    return lhs;
  }

  bool starts_type_name_in_parens() const { return is("(") && starts_type_at(1) && !is("(", 2); }

  std::shared_ptr<TypeName> type_name() {
    auto tn = std::make_shared<TypeName>();
    Storage st;
    if (!decl_specifiers(*tn, st, false)) fail("expected type name");
    Decl d;
    d.type = *tn;
    declarator(d, true);
    tn->chain = std::move(d.type.chain);
    return tn;
  }

  ExprPtr cast_expr() {
    if (starts_type_name_in_parens() || (is("(") && starts_type_at(1) && is_type_name(peek(1).text))) {
      std::size_t save = pos_;
      SourceLoc loc = take().loc;
      try {
        auto tn = type_name();
        if (accept(")")) {
          if (is("{")) {  // compound literal
            auto lit = node(ExprKind::Cast, loc, "compound");
            lit->type = tn;
            lit->args.push_back(initializer());
            return postfix_tail(std::move(lit));
          }
          auto c = node(ExprKind::Cast, loc, "c-style");
          c->type = tn;
          c->args.push_back(cast_expr());
          return c;
        }
      } catch (const SyntaxError&) {
      }
      pos_ = save;
    }
    return unary_expr();
  }

  ExprPtr unary_expr() {
    const Token& t = peek();
    if (t.kind == TokenKind::Punct &&
        (t.text == "-" || t.text == "+" || t.text == "!" || t.text == "~" || t.text == "*" || t.text == "&" ||
         t.text == "++" || t.text == "--")) {
      take();
      auto u = node(ExprKind::Unary, t.loc, t.text);
      u->args.push_back(t.text == "++" || t.text == "--" ? unary_expr() : cast_expr());
      return u;
    }
    if (t.kind == TokenKind::Ident && t.text == "sizeof") {
      take();
      auto s = node(ExprKind::Sizeof, t.loc, "sizeof");
      if (is("(") && starts_type_at(1)) {
        take();
        s->type = type_name();
        expect(")");
      } else {
        s->args.push_back(unary_expr());
      }
      return s;
    }
    if (t.kind == TokenKind::Ident && (t.text == "new" || t.text == "delete")) {
      SourceLoc loc = take().loc;
      if (t.text == "delete") {
        if (is("[")) {
          take();
          expect("]");
        }
        auto d = node(ExprKind::Delete, loc, "delete");
        d->args.push_back(cast_expr());
        return d;
      }
      auto n = node(ExprKind::New, loc, "new");
      auto tn = std::make_shared<TypeName>();
      Storage st;
      decl_specifiers(*tn, st, true);
      n->type = tn;
      if (is("[")) {
        take();
        n->args.push_back(expression());
        expect("]");
      } else if (is("(")) {
        take();
        while (!is(")")) {
          n->args.push_back(assignment_expr());
          if (!accept(",")) break;
        }
        expect(")");
      }
      return n;
    }
    return postfix_tail(primary_expr());
  }

  ExprPtr postfix_tail(ExprPtr e) {
    while (true) {
      if (is("[")) {
        SourceLoc loc = take().loc;
        auto ix = node(ExprKind::Index, e->loc, "[]");
        (void)loc;
        ix->args.push_back(std::move(e));
        ix->args.push_back(expression());
        expect("]");
        e = std::move(ix);
      } else if (is("(")) {
        take();
        auto call = node(ExprKind::Call, e->loc, "()");
        call->args.push_back(std::move(e));
        while (!is(")")) {
          call->args.push_back(assignment_expr());
          if (!accept(",")) break;
        }
        expect(")");
        e = std::move(call);
      } else if (is(".") || is("->")) {
        std::string op = take().text;
        if (!is_ident()) fail("expected member name");
        auto m = node(ExprKind::Member, e->loc, op);
        m->text = take().text;
        m->args.push_back(std::move(e));
        e = std::move(m);
      } else if (is("++") || is("--")) {
        auto p = node(ExprKind::Postfix, e->loc, take().text);
        p->args.push_back(std::move(e));
        e = std::move(p);
      } else {
        return e;
      }
    }
  }

  ExprPtr functional_cast(std::shared_ptr<TypeName> tn, SourceLoc loc) {
    auto c = node(ExprKind::Cast, loc, "functional");
    c->type = std::move(tn);
    if (is("{")) {
      c->args.push_back(initializer());
      return c;
    }
    expect("(");
    while (!is(")")) {
      c->args.push_back(assignment_expr());
      if (!accept(",")) break;
    }
    expect(")");
    return c;
  }

  ExprPtr primary_expr() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Int: {
        take();
        auto e = node(ExprKind::IntLit, t.loc, t.text);
        e->int_value = t.int_value;
        return e;
      }
      case TokenKind::Float: {
        take();
        auto e = node(ExprKind::FloatLit, t.loc, t.text);
        e->float_value = t.float_value;
        return e;
      }
      case TokenKind::String: {
        take();
        auto e = node(ExprKind::StringLit, t.loc, t.text);
        while (peek().kind == TokenKind::String) e->op += take().text;
        return e;
      }
      case TokenKind::Char: {
        take();
        auto e = node(ExprKind::CharLit, t.loc, t.text);
        e->int_value = t.int_value;
        return e;
      }
      case TokenKind::Ident: {
        const std::string w = t.text;
        if (w == "true" || w == "false") {
          take();
          auto e = node(ExprKind::BoolLit, t.loc, w);
          e->int_value = w == "true" ? 1 : 0;
          return e;
        }
        if (w == "static_cast" || w == "reinterpret_cast" || w == "const_cast" || w == "dynamic_cast") {
          SourceLoc loc = take().loc;
          expect("<");
          auto tn = type_name();
          expect(">");
          expect("(");
          auto c = node(ExprKind::Cast, loc, w);
          c->type = tn;
          c->args.push_back(expression());
          expect(")");
          return c;
        }
        if ((is_type_name(w) || kBuiltinTypeWords.count(w) || (w == "std" && is("::", 1))) &&
            (is("(", 1) || is("<", 1) || is("{", 1) || is("::", 1))) {
          SourceLoc loc = t.loc;
          auto tn = std::make_shared<TypeName>();
          Storage st;
          decl_specifiers(*tn, st, false);
          if (is("::")) {  // static member access on a type, e.g. T::value
            while (accept("::") && is_ident()) take();
            return node(ExprKind::Ident, loc, tn->base);
          }
          return functional_cast(std::move(tn), loc);
        }
        take();
        std::string name = w;
        while (is("::") && is_ident(1)) {
          take();
          name += "::" + take().text;
        }
        return node(ExprKind::Ident, t.loc, name);
      }
      case TokenKind::Punct: {
        if (t.text == "(") {
          take();
          ExprPtr inner = expression();
          expect(")");
          return inner;
        }
        if (t.text == "{") return initializer();
        if (t.text == "::" && is_ident(1)) {
          take();
          return primary_expr();
        }
        break;
      }
      default:
        break;
    }
    fail("expected expression");
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  std::set<std::string> type_names_;
  std::vector<std::set<std::string>> scopes_;
  std::size_t last_close_offset_ = 0;
  TranslationUnit unit_;
};

}  // namespace

bool is_known_template_type(std::string_view name) { return kTemplateTypes.count(name) > 0; }

TranslationUnit parse(const LexResult& lexed) { return Parser(lexed).run(); }

}  // namespace hlsr::lint

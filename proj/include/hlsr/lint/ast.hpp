#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hlsr::lint {

struct SourceLoc {
  int line = 0;
  int col = 0;
  std::size_t offset = 0;
};

/// Advisory remark about input the parser kept but did not model
/// (stripped directives, function-like macros, opaque statements).
struct Note {
  SourceLoc loc;
  std::string message;
};

struct Expr;
struct Decl;
using ExprPtr = std::unique_ptr<Expr>;
using DeclPtr = std::shared_ptr<Decl>;

/// One step of a C declarator, read from the declared name outwards:
/// `int *a[4]` is {Array(4), Pointer}; `int (*f)(int)` is {Pointer, Function}.
struct Derivation {
  enum class Kind { Pointer, Reference, Array, Function };
  Kind kind = Kind::Pointer;
  std::shared_ptr<Expr> dim;    // Array only; null for `[]`
  std::vector<DeclPtr> params;  // Function only
  bool is_const = false;        // Pointer only: `* const`
};

struct TypeName {
  std::string base;  // decl-specifier spelling, e.g. "unsigned int", "ac_int<9, true>"
  bool is_const = false;
  std::vector<Derivation> chain;
};

enum class ExprKind {
  Ident,
  IntLit,
  FloatLit,
  StringLit,
  CharLit,
  BoolLit,
  Unary,    // prefix: op in {-,+,!,~,*,&,++,--}
  Postfix,  // op in {++,--}
  Binary,
  Assign,   // op in {=,+=,-=,...}
  Ternary,
  Call,     // args[0] = callee
  Index,    // args[0][args[1]]
  Member,   // args[0] . / -> name(op holds "." or "->", text holds member)
  Cast,
  Sizeof,
  InitList,
  Comma,
  New,
  Delete,
};

struct Expr {
  ExprKind kind = ExprKind::Ident;
  SourceLoc loc;
  std::string op;    // operator spelling, or identifier / literal spelling
  std::string text;  // member name for Member
  long long int_value = 0;
  double float_value = 0.0;
  std::vector<ExprPtr> args;
  std::shared_ptr<TypeName> type;  // Cast / Sizeof(type) / New
};

struct Decl {
  std::string name;
  SourceLoc loc;
  TypeName type;
  bool is_static = false;
  bool is_typedef = false;
  bool is_extern = false;
  ExprPtr init;
};

enum class StmtKind {
  Compound,
  Decl,
  Expr,
  If,
  For,
  While,
  DoWhile,
  Switch,
  Case,
  Default,
  Break,
  Continue,
  Return,
  Label,
  Empty,
  Opaque,
};

struct Stmt {
  StmtKind kind = StmtKind::Empty;
  SourceLoc loc;
  std::vector<std::unique_ptr<Stmt>> children;  // Compound items; If: then[, else]; loops: body
  std::vector<DeclPtr> decls;                   // Decl, or a For init declaration
  ExprPtr init;                                 // For init expression
  ExprPtr cond;                                 // If/loops/Switch/Case value
  ExprPtr step;                                 // For step
  ExprPtr expr;                                 // Expr statement, Return value
  std::string text;                             // Label name, Opaque description
};
using StmtPtr = std::unique_ptr<Stmt>;

struct FunctionDef {
  DeclPtr decl;  // decl->type.chain[0] is the Function derivation
  StmtPtr body;
  SourceLoc loc;
  std::size_t body_open = 0;   // offset of `{`
  std::size_t body_close = 0;  // offset of the matching `}`
};

struct TypedefInfo {
  TypeName type;
};

struct TranslationUnit {
  std::vector<FunctionDef> functions;
  std::vector<DeclPtr> globals;
  std::vector<DeclPtr> prototypes;
  std::map<std::string, TypedefInfo> typedefs;
  std::map<std::string, long long> enum_constants;
  std::vector<Note> notes;
};

}  // namespace hlsr::lint

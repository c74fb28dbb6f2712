#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hlsr/lint/ast.hpp"

namespace hlsr::lint {

struct Interval {
  long long lo = 0;
  long long hi = 0;
  bool is_point() const { return lo == hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class ParamCategory { Scalar, SizedArray, UnsizedPointer, FunctionPointer };

struct ParamInfo {
  std::string name;
  SourceLoc loc;
  ParamCategory category = ParamCategory::Scalar;
  TypeName type;  // declared type, typedefs not expanded
  bool aggregate_pointee = false;  // pointer to array / pointer to pointer
  bool const_size = true;          // SizedArray only: every dimension is a constant
};

enum class BoundKind { Constant, Symbolic, Unbounded };

struct LoopInfo {
  SourceLoc loc;
  std::string keyword;  // for / while / do
  BoundKind bound_kind = BoundKind::Symbolic;
  std::optional<long long> bound_value;  // trip count when Constant
  bool scans_global = false;             // body indexes a global array
};

/// How a call argument relates to the caller's storage, as needed by the
/// pointer-parameter rule.
struct ArgFact {
  enum class Kind {
    Sized,             // sized array, scalar address, or string literal
    Param,             // caller's unsized pointer parameter, passed as-is
    AddressIntoParam,  // &p[i], p + k
    Unknown,           // pointer of unknown extent (local pointer, cast, call result)
    Value,             // non-pointer expression
  };
  Kind kind = Kind::Value;
  std::string param;  // Param / AddressIntoParam
};

struct CallSite {
  std::string callee;
  SourceLoc loc;
  bool external = true;  // no definition in the unit
  std::vector<ArgFact> args;
};

struct Site {
  std::string name;
  SourceLoc loc;
};

/// Usage summary of an unsized pointer parameter inside its own function.
struct PointerUse {
  bool subscripted = false;
  bool arithmetic = false;
  bool dereferenced = false;
  bool passed_external = false;
  bool index_unbounded = false;
  long long max_index = -1;
  std::vector<std::pair<std::string, std::size_t>> passed_to;  // (callee, parameter index)
};

struct LocalArray {
  std::string name;
  SourceLoc loc;
  bool constant_size = true;
};

struct FunctionInfo {
  std::string name;
  SourceLoc loc;
  std::vector<ParamInfo> params;
  std::vector<CallSite> calls;
  std::vector<LoopInfo> loops;
  std::vector<Site> io_calls;
  std::vector<Site> alloc_calls;
  std::vector<Site> math_calls;
  std::vector<LocalArray> local_arrays;
  std::vector<Site> fnptr_uses;  // name = short description
  std::map<std::string, PointerUse> pointer_use;
  std::size_t body_open = 0;
  std::size_t body_close = 0;
  bool returns_void = false;

  const ParamInfo* param(std::string_view name) const;
};

struct GlobalInfo {
  std::string name;
  SourceLoc loc;
  bool is_array = false;
  bool size_constant = true;
  bool is_extern = false;
  bool is_function_pointer = false;
};

struct SourceUnit {
  std::string path;
  std::string text;
  std::vector<FunctionInfo> functions;
  std::vector<GlobalInfo> globals;
  std::vector<Note> notes;
  std::shared_ptr<const TranslationUnit> ast;

  const FunctionInfo* function(std::string_view name) const;
};

/// Parses `text` and extracts per-function facts. Throws SyntaxError.
SourceUnit parse_c(std::string_view text, std::string path);

/// Value range of a narrow scalar type (<= 16 bits), after typedef expansion.
std::optional<Interval> type_range(const TypeName& type, const TranslationUnit& unit);

}  // namespace hlsr::lint

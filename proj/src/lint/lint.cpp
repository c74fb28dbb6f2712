#include "hlsr/lint/lint.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "hlsr/lint/call_graph.hpp"

namespace hlsr::lint {

namespace {

constexpr std::pair<RuleId, std::string_view> kRuleNames[] = {
    {RuleId::Recur, "R-RECUR"}, {RuleId::DynMem, "R-DYNMEM"}, {RuleId::PtrParam, "R-PTRPARAM"},
    {RuleId::Vla, "R-VLA"},     {RuleId::Loop, "R-LOOP"},     {RuleId::Io, "R-IO"},
    {RuleId::FnPtr, "R-FNPTR"}, {RuleId::Math, "R-MATH"}};

using Key = std::pair<std::string, std::string>;  // (function, parameter)

// Decides which unsized pointer parameters have a statically known extent.
class PointerExtents {
 public:
  explicit PointerExtents(const SourceUnit& unit) : unit_(unit) {
    for (const auto& f : unit.functions)
      for (const auto& [p, use] : f.pointer_use) {
        const ParamInfo* pi = f.param(p);
        if (pi && !pi->aggregate_pointee) candidates_.push_back({f.name, p});
      }
    compute_array_like();
    compute_resolved();
  }

  bool array_like(const Key& k) const { return array_like_.count(k) > 0; }
  bool resolved(const Key& k) const { return resolved_.count(k) > 0; }

  // Callers of `fn` whose argument `index` reaches it, excluding self pass-through.
  std::vector<std::pair<const FunctionInfo*, const ArgFact*>> sites(const std::string& fn, std::size_t index) const {
    std::vector<std::pair<const FunctionInfo*, const ArgFact*>> out;
    const FunctionInfo* callee = unit_.function(fn);
    std::string pname = callee && index < callee->params.size() ? callee->params[index].name : "";
    for (const auto& caller : unit_.functions)
      for (const auto& c : caller.calls) {
        if (c.callee != fn || index >= c.args.size()) continue;
        const ArgFact& a = c.args[index];
        if (caller.name == fn && a.kind == ArgFact::Kind::Param && a.param == pname) continue;
        out.emplace_back(&caller, &a);
      }
    return out;
  }

 private:
  static std::size_t param_index(const FunctionInfo& f, const std::string& p) {
    for (std::size_t i = 0; i < f.params.size(); ++i)
      if (f.params[i].name == p) return i;
    return f.params.size();
  }

  const PointerUse& use(const Key& k) const { return unit_.function(k.first)->pointer_use.at(k.second); }

  void compute_array_like() {
    for (const auto& k : candidates_) {
      const PointerUse& u = use(k);
      if (u.subscripted || u.arithmetic || u.passed_external) array_like_.insert(k);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& k : candidates_) {
        if (array_like_.count(k)) continue;
        for (const auto& [callee, idx] : use(k).passed_to) {
          const FunctionInfo* cf = unit_.function(callee);
          if (!cf || idx >= cf->params.size()) continue;
          const ParamInfo& cp = cf->params[idx];
          bool callee_array = cp.category == ParamCategory::SizedArray ||
                              (cp.category == ParamCategory::UnsizedPointer &&
                               (cp.aggregate_pointee || array_like_.count({callee, cp.name})));
          if (callee_array) {
            array_like_.insert(k);
            changed = true;
            break;
          }
        }
      }
    }
  }

  bool self_bounded(const Key& k) const {
    const PointerUse& u = use(k);
    return u.subscripted && !u.index_unbounded && !u.arithmetic && !u.passed_external && u.passed_to.empty();
  }

  bool arg_ok(const FunctionInfo& caller, const ArgFact& a) const {
    switch (a.kind) {
      case ArgFact::Kind::Sized:
        return true;
      case ArgFact::Kind::Param:
      case ArgFact::Kind::AddressIntoParam: {
        const ParamInfo* pi = caller.param(a.param);
        if (!pi) return false;
        if (pi->category == ParamCategory::SizedArray) return true;
        return resolved_.count({caller.name, a.param}) > 0;
      }
      default:
        return false;
    }
  }

  void compute_resolved() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& k : candidates_) {
        if (resolved_.count(k) || !array_like_.count(k)) continue;
        bool ok = self_bounded(k);
        if (!ok) {
          const FunctionInfo* f = unit_.function(k.first);
          auto s = sites(k.first, param_index(*f, k.second));
          ok = !s.empty() && std::all_of(s.begin(), s.end(), [&](const auto& p) { return arg_ok(*p.first, *p.second); });
        }
        if (ok) {
          resolved_.insert(k);
          changed = true;
        }
      }
    }
  }

  const SourceUnit& unit_;
  std::vector<Key> candidates_;
  std::set<Key> array_like_;
  std::set<Key> resolved_;

};

void check_pointer_params(const SourceUnit& unit, std::vector<Violation>& out) {
  PointerExtents ext(unit);
  for (const auto& f : unit.functions) {
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      const ParamInfo& p = f.params[i];
      if (p.category != ParamCategory::UnsizedPointer) continue;
      Key k{f.name, p.name};
      std::string detail;
      if (p.aggregate_pointee) {
        detail = "parameter '" + p.name + "' is a pointer to an aggregate; pass a sized array instead";
      } else if (ext.array_like(k)) {
        if (!ext.resolved(k)) detail = "parameter '" + p.name + "' is used as an array of unknown size";
      } else {
        for (const auto& [caller, arg] : ext.sites(f.name, i)) {
          bool bad = arg->kind == ArgFact::Kind::Unknown;
          if (arg->kind == ArgFact::Kind::Param || arg->kind == ArgFact::Kind::AddressIntoParam) {
            const ParamInfo* cp = caller->param(arg->param);
            bad = !cp || (cp->category != ParamCategory::SizedArray && !ext.resolved({caller->name, arg->param}));
          }
          if (bad) {
            detail = "pointer parameter '" + p.name + "' receives storage of unknown size from " + caller->name;
            break;
          }
        }
      }
      if (!detail.empty()) out.push_back({RuleId::PtrParam, f.name, p.loc, detail, Severity::Blocking});
    }
  }
}

void check_recursion(const SourceUnit& unit, std::vector<Violation>& out) {
  CallGraph g = build_call_graph(unit);
  for (const auto& cycle : g.cycles()) {
    std::set<std::string> members(cycle.begin(), cycle.end());
    std::string path;
    for (const auto& m : cycle) path += (path.empty() ? "" : ", ") + m;
    for (const auto& name : cycle) {
      const FunctionInfo* f = unit.function(name);
      for (const auto& c : f->calls) {
        if (!members.count(c.callee)) continue;
        std::string detail = c.callee == name ? "recursive call to '" + name + "'"
                                              : "call to '" + c.callee + "' closes a recursion cycle {" + path + "}";
        out.push_back({RuleId::Recur, name, c.loc, detail, Severity::Blocking});
        break;
      }
    }
  }
}

std::string bound_text(const LoopInfo& l) {
  if (l.bound_kind == BoundKind::Unbounded) return l.keyword + " loop has no exit bound";
  if (l.keyword == "for") return "for loop bound is not a constant";
  return l.keyword + " loop trip count depends on data";
}

}  // namespace

std::string_view to_string(RuleId r) {
  for (const auto& [id, name] : kRuleNames)
    if (id == r) return name;
  return "?";
}

std::optional<RuleId> parse_rule(std::string_view s) {
  for (const auto& [id, name] : kRuleNames)
    if (name == s) return id;
  return std::nullopt;
}

const std::set<RuleId>& all_rules() {
  static const std::set<RuleId> all = {RuleId::Recur, RuleId::DynMem, RuleId::PtrParam, RuleId::Vla,
                                       RuleId::Loop,  RuleId::Io,     RuleId::FnPtr,    RuleId::Math};
  return all;
}

bool LintReport::gate() const { return blocking_count() == 0; }

std::size_t LintReport::blocking_count() const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [](const Violation& v) { return v.severity == Severity::Blocking; }));
}

bool LintReport::has(RuleId r, bool blocking_only) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
    return v.rule == r && (!blocking_only || v.severity == Severity::Blocking);
  });
}

LintReport lint(const SourceUnit& unit, const std::set<RuleId>& rules) {
  LintReport rep;
  auto& out = rep.violations;
  auto on = [&](RuleId r) { return rules.count(r) > 0; };

  if (on(RuleId::Recur)) check_recursion(unit, out);
  if (on(RuleId::PtrParam)) check_pointer_params(unit, out);

  for (const auto& f : unit.functions) {
    if (on(RuleId::DynMem))
      for (const auto& s : f.alloc_calls)
        out.push_back({RuleId::DynMem, f.name, s.loc, "dynamic memory via '" + s.name + "'", Severity::Blocking});
    if (on(RuleId::Io))
      for (const auto& s : f.io_calls)
        out.push_back({RuleId::Io, f.name, s.loc, "standard I/O call '" + s.name + "'", Severity::Blocking});
    if (on(RuleId::Math))
      for (const auto& s : f.math_calls)
        out.push_back({RuleId::Math, f.name, s.loc, "floating math call '" + s.name + "'", Severity::Advisory});
    if (on(RuleId::FnPtr)) {
      for (const auto& p : f.params)
        if (p.category == ParamCategory::FunctionPointer)
          out.push_back({RuleId::FnPtr, f.name, p.loc, "function pointer parameter '" + p.name + "'",
                         Severity::Blocking});
      for (const auto& s : f.fnptr_uses) out.push_back({RuleId::FnPtr, f.name, s.loc, s.name, Severity::Blocking});
    }
    if (on(RuleId::Vla)) {
      for (const auto& a : f.local_arrays)
        if (!a.constant_size)
          out.push_back({RuleId::Vla, f.name, a.loc, "array '" + a.name + "' has a non-constant size",
                         Severity::Blocking});
      for (const auto& p : f.params)
        if (p.category == ParamCategory::SizedArray && !p.const_size)
          out.push_back({RuleId::Vla, f.name, p.loc, "array parameter '" + p.name + "' has a non-constant size",
                         Severity::Blocking});
    }
    if (on(RuleId::Loop))
      for (const auto& l : f.loops) {
        if (l.bound_kind == BoundKind::Constant) continue;
        bool advisory = l.bound_kind == BoundKind::Symbolic && l.keyword != "for";
        out.push_back({RuleId::Loop, f.name, l.loc, bound_text(l), advisory ? Severity::Advisory : Severity::Blocking});
      }
  }
  for (const auto& g : unit.globals) {
    if (on(RuleId::Vla) && g.is_array && !g.size_constant)
      out.push_back({RuleId::Vla, "<global>", g.loc,
                     g.is_extern ? "extern array '" + g.name + "' has no visible size"
                                 : "global array '" + g.name + "' has a non-constant size",
                     g.is_extern ? Severity::Advisory : Severity::Blocking});
    if (on(RuleId::FnPtr) && g.is_function_pointer)
      out.push_back({RuleId::FnPtr, "<global>", g.loc, "global function pointer '" + g.name + "'", Severity::Blocking});
  }

  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.loc.line, a.loc.col, a.rule, a.function) < std::tie(b.loc.line, b.loc.col, b.rule, b.function);
  });
  rep.notes = unit.notes;
  return rep;
}

std::string format_text(const LintReport& report, std::string_view path) {
  std::ostringstream os;
  for (const auto& v : report.violations) {
    os << path << ':' << v.loc.line << ':' << v.loc.col << ": "
       << (v.severity == Severity::Blocking ? "error" : "warning") << " [" << to_string(v.rule) << "] " << v.function
       << ": " << v.detail << '\n';
  }
  for (const auto& n : report.notes) os << path << ':' << n.loc.line << ':' << n.loc.col << ": note: " << n.message << '\n';
  std::size_t blocking = report.blocking_count();
  os << "gate: " << (report.gate() ? "pass" : "fail") << " (" << blocking << " blocking, "
     << report.violations.size() - blocking << " advisory)\n";
  return os.str();
}

std::string format_json(const LintReport& report) {
  nlohmann::json j;
  j["gate"] = report.gate();
  j["violations"] = nlohmann::json::array();
  for (const auto& v : report.violations) {
    j["violations"].push_back({{"rule", to_string(v.rule)},
                               {"function", v.function},
                               {"line", v.loc.line},
                               {"col", v.loc.col},
                               {"severity", v.severity == Severity::Blocking ? "blocking" : "advisory"},
                               {"detail", v.detail}});
  }
  j["notes"] = nlohmann::json::array();
  for (const auto& n : report.notes) j["notes"].push_back({{"line", n.loc.line}, {"col", n.loc.col}, {"message", n.message}});
  return j.dump(2);
}

}  // namespace hlsr::lint

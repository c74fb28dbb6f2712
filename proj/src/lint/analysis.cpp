#include <algorithm>
#include <cstdlib>
#include <functional>
#include <limits>
#include <set>

#include "hlsr/lint/lexer.hpp"
#include "hlsr/lint/parser.hpp"
#include "hlsr/lint/source_unit.hpp"

namespace hlsr::lint {

const ParamInfo* FunctionInfo::param(std::string_view n) const {
  for (const auto& p : params)
    if (p.name == n) return &p;
  return nullptr;
}

const FunctionInfo* SourceUnit::function(std::string_view n) const {
  for (const auto& f : functions)
    if (f.name == n) return &f;
  return nullptr;
}

namespace {

using Kind = Derivation::Kind;

const std::set<std::string, std::less<>> kIoCalls = {
    "printf", "fprintf", "sprintf", "snprintf", "vprintf", "vfprintf", "vsprintf", "puts",  "fputs",
    "putchar", "fputc",  "putc",    "scanf",    "fscanf",  "sscanf",   "getchar",  "fgetc", "getc",
    "fgets",  "gets",    "fopen",   "fclose",   "fread",   "fwrite",   "fflush",   "perror", "fseek",
    "ftell",  "rewind",  "remove",  "rename",   "tmpfile"};

const std::set<std::string, std::less<>> kAllocCalls = {"malloc", "calloc",         "realloc", "free",
                                                         "alloca", "aligned_alloc", "posix_memalign", "strdup"};

const std::set<std::string, std::less<>> kMathCalls = {
    "sqrt",  "sqrtf", "fabs",   "fabsf",  "erfc",  "erfcf", "erf",          "erff",         "exp",
    "expf",  "exp2",  "expm1",  "log",    "logf",  "log2",  "log10",        "log1p",        "pow",
    "powf",  "sin",   "cos",    "tan",    "asin",  "acos",  "atan",         "atan2",        "sinh",
    "cosh",  "tanh",  "floor",  "ceil",   "fmod",  "round", "lgamma",       "tgamma",       "cbrt",
    "hypot", "lgam",  "cephes_igamc", "cephes_igam", "cephes_normal", "cephes_lgam", "cephes_erfc"};

constexpr long long kBig = 1LL << 60;

std::optional<Interval> make(long long lo, long long hi) {
  if (lo < -kBig || hi > kBig || lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

std::optional<Interval> hull(std::optional<Interval> a, std::optional<Interval> b) {
  if (!a || !b) return std::nullopt;
  return Interval{std::min(a->lo, b->lo), std::max(a->hi, b->hi)};
}

std::optional<Interval> corners(Interval a, Interval b, const std::function<__int128(__int128, __int128)>& f) {
  __int128 v[4] = {f(a.lo, b.lo), f(a.lo, b.hi), f(a.hi, b.lo), f(a.hi, b.hi)};
  __int128 lo = *std::min_element(v, v + 4), hi = *std::max_element(v, v + 4);
  if (lo < -kBig || hi > kBig) return std::nullopt;
  return Interval{static_cast<long long>(lo), static_cast<long long>(hi)};
}

// Expands typedefs: returns the fully derived chain (name outwards) and final base.
TypeName expand(const TypeName& t, const TranslationUnit& unit) {
  TypeName out = t;
  for (int guard = 0; guard < 32; ++guard) {
    auto it = unit.typedefs.find(out.base);
    if (it == unit.typedefs.end()) break;
    const TypeName& td = it->second.type;
    for (const auto& d : td.chain) out.chain.push_back(d);
    out.base = td.base;
    out.is_const = out.is_const || td.is_const;
  }
  return out;
}

bool is_function_pointer(const std::vector<Derivation>& chain) {
  if (chain.empty()) return false;
  if (chain[0].kind == Kind::Function) return true;
  return chain[0].kind == Kind::Pointer && chain.size() > 1 && chain[1].kind == Kind::Function;
}

bool is_pointerish(const std::vector<Derivation>& chain) {
  return !chain.empty() && (chain[0].kind == Kind::Pointer || chain[0].kind == Kind::Array);
}

std::optional<Interval> range_of_base(std::string base) {
  for (const char* q : {"const ", "volatile "})
    while (base.rfind(q, 0) == 0) base.erase(0, std::string(q).size());
  if (base == "unsigned char" || base == "uint8_t" || base == "uint_fast8_t") return Interval{0, 255};
  if (base == "char" || base == "signed char" || base == "int8_t") return Interval{-128, 127};
  if (base == "short" || base == "short int" || base == "signed short" || base == "int16_t")
    return Interval{-32768, 32767};
  if (base == "unsigned short" || base == "unsigned short int" || base == "uint16_t") return Interval{0, 65535};
  if (base == "bool" || base == "_Bool") return Interval{0, 1};
  if (base.rfind("ac_int<", 0) == 0 || base.rfind("ap_uint<", 0) == 0 || base.rfind("ap_int<", 0) == 0) {
    std::size_t lt = base.find('<');
    std::string args = base.substr(lt + 1, base.rfind('>') - lt - 1);
    char* end = nullptr;
    long w = std::strtol(args.c_str(), &end, 10);
    std::string rest(end);
    rest.erase(0, rest.find_first_not_of(" "));
    if (!rest.empty() && rest[0] != ',') return std::nullopt;
    if (w <= 0 || w > 16) return std::nullopt;
    bool is_signed = base.rfind("ap_uint<", 0) != 0;
    if (base.rfind("ac_int<", 0) == 0 && rest.find("false") != std::string::npos) is_signed = false;
    if (is_signed) return Interval{-(1LL << (w - 1)), (1LL << (w - 1)) - 1};
    return Interval{0, (1LL << w) - 1};
  }
  return std::nullopt;
}

const Expr* strip_parens_casts(const Expr* e) {
  while (e && e->kind == ExprKind::Cast && e->op != "compound" && e->args.size() == 1) e = e->args[0].get();
  return e;
}

struct VarInfo {
  TypeName type;  // typedef-expanded
  bool is_param = false;
};

class FunctionAnalyzer {
 public:
  FunctionAnalyzer(const TranslationUnit& tu, const std::set<std::string>& defined,
                   const std::set<std::string>& known_functions, const std::map<std::string, const Decl*>& globals)
      : tu_(tu), defined_(defined), known_functions_(known_functions), globals_(globals) {}

  // Evaluates without function context (array dimensions at file scope).
  std::optional<Interval> eval_global(const Expr* e) { return eval(e); }

  FunctionInfo run(const FunctionDef& fn) {
    FunctionInfo info;
    info_ = &info;
    info.name = fn.decl->name;
    info.loc = fn.decl->loc;
    info.body_open = fn.body_open;
    info.body_close = fn.body_close;
    const Derivation& fd = fn.decl->type.chain[0];
    TypeName ret = fn.decl->type;
    ret.chain.erase(ret.chain.begin());
    ret = expand(ret, tu_);
    info.returns_void = ret.chain.empty() && ret.base == "void";

    modified_.clear();
    collect_modified(fn.body.get());
    vars_.clear();
    bindings_.clear();
    push();
    for (const auto& p : fd.params) {
      if (p->name.empty()) continue;
      ParamInfo pi = categorize(*p);
      vars_.back()[p->name] = VarInfo{expand(p->type, tu_), true};
      if (pi.category == ParamCategory::UnsizedPointer) info.pointer_use[p->name];
      info.params.push_back(std::move(pi));
    }
    stmt(fn.body.get());
    pop();
    info_ = nullptr;
    return info;
  }

  ParamInfo categorize(const Decl& p) {
    ParamInfo pi;
    pi.name = p.name;
    pi.loc = p.loc;
    pi.type = p.type;
    TypeName full = expand(p.type, tu_);
    const auto& ch = full.chain;
    if (ch.empty()) return pi;
    if (is_function_pointer(ch)) {
      pi.category = ParamCategory::FunctionPointer;
      return pi;
    }
    if (ch[0].kind == Kind::Reference) {
      if (ch.size() > 1 && ch[1].kind == Kind::Array) {
        pi.category = ParamCategory::SizedArray;
        pi.const_size = dims_constant(ch, 1);
      }
      return pi;
    }
    if (ch[0].kind == Kind::Array) {
      if (!ch[0].dim) {
        pi.category = ParamCategory::UnsizedPointer;
        return pi;
      }
      pi.category = ParamCategory::SizedArray;
      pi.const_size = dims_constant(ch, 0);
      return pi;
    }
    pi.category = ParamCategory::UnsizedPointer;
    pi.aggregate_pointee = ch.size() > 1;
    return pi;
  }

 private:
  // ---- scopes --------------------------------------------------------------
  void push() {
    vars_.emplace_back();
    bindings_.emplace_back();
  }
  void pop() {
    vars_.pop_back();
    bindings_.pop_back();
  }
  const VarInfo* find_var(const std::string& n) const {
    for (auto it = vars_.rbegin(); it != vars_.rend(); ++it) {
      auto f = it->find(n);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }
  std::optional<Interval> find_binding(const std::string& n) const {
    for (std::size_t i = bindings_.size(); i-- > 0;) {
      auto f = bindings_[i].find(n);
      if (f != bindings_[i].end()) return f->second;
      if (vars_[i].count(n)) return std::nullopt;  // shadowed by an unbound declaration
    }
    return std::nullopt;
  }
  bool is_pointer_param(const std::string& n) const {
    const VarInfo* v = find_var(n);
    return v && v->is_param && info_ && info_->pointer_use.count(n) &&
           find_var_depth(n) == 0;
  }
  std::size_t find_var_depth(const std::string& n) const {
    for (std::size_t i = vars_.size(); i-- > 0;)
      if (vars_[i].count(n)) return i;
    return std::numeric_limits<std::size_t>::max();
  }

  bool dims_constant(const std::vector<Derivation>& ch, std::size_t from) {
    for (std::size_t i = from; i < ch.size() && ch[i].kind == Kind::Array; ++i) {
      if (!ch[i].dim) return false;
      auto v = eval(ch[i].dim.get());
      if (!v || !v->is_point()) return false;
    }
    return true;
  }

  // ---- modified-variable collection ----------------------------------------
  void collect_modified(const Stmt* s) {
    if (!s) return;
    for (const auto& d : s->decls)
      if (d->init) collect_modified(d->init.get());
    for (const Expr* e : {s->init.get(), s->cond.get(), s->step.get(), s->expr.get()}) collect_modified(e);
    for (const auto& c : s->children) collect_modified(c.get());
  }
  static const Expr* root_ident(const Expr* e) {
    while (e && (e->kind == ExprKind::Index || e->kind == ExprKind::Member)) e = e->args[0].get();
    return e && e->kind == ExprKind::Ident ? e : nullptr;
  }
  void collect_modified(const Expr* e) {
    if (!e) return;
    if (e->kind == ExprKind::Assign || ((e->kind == ExprKind::Unary || e->kind == ExprKind::Postfix) &&
                                        (e->op == "++" || e->op == "--" || e->op == "&"))) {
      if (const Expr* r = root_ident(e->args[0].get())) modified_.insert(r->op);
    }
    for (const auto& a : e->args) collect_modified(a.get());
  }
  static void modified_in(const Stmt* s, std::set<std::string>& out) {
    if (!s) return;
    std::function<void(const Expr*)> ex = [&](const Expr* e) {
      if (!e) return;
      if (e->kind == ExprKind::Assign || ((e->kind == ExprKind::Unary || e->kind == ExprKind::Postfix) &&
                                          (e->op == "++" || e->op == "--" || e->op == "&"))) {
        if (const Expr* r = root_ident(e->args[0].get())) out.insert(r->op);
      }
      for (const auto& a : e->args) ex(a.get());
    };
    for (const auto& d : s->decls) ex(d->init.get());
    for (const Expr* e : {s->init.get(), s->cond.get(), s->step.get(), s->expr.get()}) ex(e);
    for (const auto& c : s->children) modified_in(c.get(), out);
  }

  // ---- interval evaluation -------------------------------------------------
  std::optional<Interval> var_range(const std::string& n) const {
    if (auto b = find_binding(n)) return b;
    if (const VarInfo* v = find_var(n)) return type_range_expanded(v->type);
    if (auto it = tu_.enum_constants.find(n); it != tu_.enum_constants.end())
      return Interval{it->second, it->second};
    if (auto it = globals_.find(n); it != globals_.end()) {
      const Decl* g = it->second;
      TypeName t = expand(g->type, tu_);
      if (t.is_const && t.chain.empty() && g->init && !in_eval_global_) {
        in_eval_global_ = true;
        auto r = const_cast<FunctionAnalyzer*>(this)->eval(g->init.get());
        in_eval_global_ = false;
        if (r) return r;
      }
      return type_range_expanded(t);
    }
    return std::nullopt;
  }
  static std::optional<Interval> type_range_expanded(const TypeName& t) {
    if (!t.chain.empty()) return std::nullopt;
    return range_of_base(t.base);
  }

  std::optional<Interval> eval(const Expr* e) {
    if (!e) return std::nullopt;
    switch (e->kind) {
      case ExprKind::IntLit:
      case ExprKind::CharLit:
      case ExprKind::BoolLit:
        return Interval{e->int_value, e->int_value};
      case ExprKind::Ident:
        return var_range(e->op);
      case ExprKind::Unary: {
        if (e->op == "!") return Interval{0, 1};
        auto a = eval(e->args[0].get());
        if (!a) return std::nullopt;
        if (e->op == "-") return make(-a->hi, -a->lo);
        if (e->op == "+") return a;
        return std::nullopt;
      }
      case ExprKind::Binary:
        return eval_binary(e);
      case ExprKind::Ternary: {
        auto c = eval(e->args[0].get());
        if (c && c->is_point()) return eval(e->args[c->lo ? 1 : 2].get());
        return hull(eval(e->args[1].get()), eval(e->args[2].get()));
      }
      case ExprKind::Cast: {
        if (e->args.size() != 1 || !e->type) return std::nullopt;
        auto inner = eval(e->args[0].get());
        TypeName t = expand(*e->type, tu_);
        auto r = type_range_expanded(t);
        if (!r) {
          if (!t.chain.empty() || t.base.find("float") != std::string::npos ||
              t.base.find("double") != std::string::npos || t.base.find("fixed") != std::string::npos)
            return t.chain.empty() ? inner : std::nullopt;
          return inner;
        }
        if (inner && inner->lo >= r->lo && inner->hi <= r->hi) return inner;
        return r;
      }
      case ExprKind::Comma:
        return eval(e->args.back().get());
      case ExprKind::Sizeof:
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  std::optional<Interval> eval_binary(const Expr* e) {
    const std::string& op = e->op;
    if (op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=" || op == "&&" || op == "||")
      return Interval{0, 1};
    auto a = eval(e->args[0].get());
    auto b = eval(e->args[1].get());
    if (!a || !b) return std::nullopt;
    if (op == "+") return make(a->lo + b->lo, a->hi + b->hi);
    if (op == "-") return make(a->lo - b->hi, a->hi - b->lo);
    if (op == "*") return corners(*a, *b, [](__int128 x, __int128 y) { return x * y; });
    if (op == "/") {
      if (b->lo <= 0 && b->hi >= 0) return std::nullopt;
      return corners(*a, *b, [](__int128 x, __int128 y) { return x / y; });
    }
    if (op == "%") {
      if (a->lo < 0 || b->lo <= 0) return std::nullopt;
      if (a->is_point() && b->is_point()) return Interval{a->lo % b->lo, a->lo % b->lo};
      return Interval{0, std::min(a->hi, b->hi - 1)};
    }
    if (op == "<<") {
      if (a->lo < 0 || b->lo < 0 || b->hi > 40) return std::nullopt;
      return make(a->lo << b->lo, a->hi << b->hi);
    }
    if (op == ">>") {
      if (a->lo < 0 || b->lo < 0 || b->hi > 62) return std::nullopt;
      return Interval{a->lo >> b->hi, a->hi >> b->lo};
    }
    if (op == "&") {
      if (a->is_point() && b->is_point()) return Interval{a->lo & b->lo, a->lo & b->lo};
      if (a->lo < 0 && b->lo < 0) return std::nullopt;
      long long m = a->lo >= 0 && b->lo >= 0 ? std::min(a->hi, b->hi) : (a->lo >= 0 ? a->hi : b->hi);
      return Interval{0, m};
    }
    if (op == "|" || op == "^") {
      if (a->is_point() && b->is_point())
        return op == "|" ? Interval{a->lo | b->lo, a->lo | b->lo} : Interval{a->lo ^ b->lo, a->lo ^ b->lo};
      if (a->lo < 0 || b->lo < 0) return std::nullopt;
      long long m = std::max(a->hi, b->hi), p = 1;
      while (p <= m) p <<= 1;
      return Interval{0, p - 1};
    }
    return std::nullopt;
  }

  // ---- statements ----------------------------------------------------------
  void declare(const Decl& d) {
    TypeName full = expand(d.type, tu_);
    if (d.init) expr(d.init.get());
    if (!full.chain.empty() && full.chain[0].kind == Kind::Array) {
      LocalArray la;
      la.name = d.name;
      la.loc = d.loc;
      for (std::size_t i = 0; i < full.chain.size() && full.chain[i].kind == Kind::Array; ++i) {
        if (!full.chain[i].dim) {
          if (i == 0 && d.init) continue;
          la.constant_size = false;
          continue;
        }
        auto v = eval(full.chain[i].dim.get());
        if (!v || !v->is_point()) la.constant_size = false;
      }
      info_->local_arrays.push_back(la);
    }
    if (is_function_pointer(full.chain)) info_->fnptr_uses.push_back({"function pointer variable '" + d.name + "'", d.loc});
    std::optional<Interval> bound;
    if (d.init && full.chain.empty() && !modified_.count(d.name) && d.init->kind != ExprKind::InitList) {
      bound = eval(d.init.get());
      if (bound) {
        if (auto r = type_range_expanded(full); r && (bound->lo < r->lo || bound->hi > r->hi)) bound = r;
      }
    }
    vars_.back()[d.name] = VarInfo{full, false};
    if (bound) bindings_.back()[d.name] = *bound;
  }

  void stmt(const Stmt* s) {
    if (!s) return;
    switch (s->kind) {
      case StmtKind::Compound:
        push();
        for (const auto& c : s->children) stmt(c.get());
        pop();
        return;
      case StmtKind::Decl:
        for (const auto& d : s->decls) declare(*d);
        return;
      case StmtKind::For:
        for_loop(s);
        return;
      case StmtKind::While:
      case StmtKind::DoWhile:
        while_loop(s);
        return;
      default:
        break;
    }
    for (const Expr* e : {s->init.get(), s->cond.get(), s->step.get(), s->expr.get()}) expr(e);
    for (const auto& c : s->children) stmt(c.get());
  }

  std::optional<std::string> induction_var(const Stmt* s, std::optional<Interval>& init) {
    if (!s->decls.empty()) {
      const Decl& d = *s->decls.back();
      if (!d.init) return std::nullopt;
      init = eval(d.init.get());
      return d.name;
    }
    const Expr* i = s->init.get();
    if (i && i->kind == ExprKind::Comma) i = i->args.back().get();
    if (i && i->kind == ExprKind::Assign && i->op == "=" && i->args[0]->kind == ExprKind::Ident) {
      init = eval(i->args[1].get());
      return i->args[0]->op;
    }
    return std::nullopt;
  }

  // +1 for increasing, -1 for decreasing, 0 when unknown. `stride` receives the step size.
  int step_direction(const Expr* step, const std::string& var, long long& stride) {
    stride = 1;
    if (!step) return 0;
    if (step->kind == ExprKind::Comma) {
      for (const auto& a : step->args) {
        int d = step_direction(a.get(), var, stride);
        if (d) return d;
      }
      return 0;
    }
    auto is_var = [&](const Expr* x) { return x->kind == ExprKind::Ident && x->op == var; };
    if ((step->kind == ExprKind::Unary || step->kind == ExprKind::Postfix) && is_var(step->args[0].get())) {
      if (step->op == "++") return 1;
      if (step->op == "--") return -1;
    }
    if (step->kind == ExprKind::Assign && is_var(step->args[0].get())) {
      auto amount = [&](const Expr* x) -> std::optional<long long> {
        auto v = eval(x);
        if (v && v->is_point() && v->lo > 0) return v->lo;
        return std::nullopt;
      };
      if (step->op == "+=" || step->op == "-=") {
        auto a = amount(step->args[1].get());
        if (!a) return 0;
        stride = *a;
        return step->op == "+=" ? 1 : -1;
      }
      const Expr* rhs = step->args[1].get();
      if (step->op == "=" && rhs->kind == ExprKind::Binary && (rhs->op == "+" || rhs->op == "-") &&
          is_var(rhs->args[0].get())) {
        auto a = amount(rhs->args[1].get());
        if (!a) return 0;
        stride = *a;
        return rhs->op == "+" ? 1 : -1;
      }
    }
    return 0;
  }

  void for_loop(const Stmt* s) {
    push();
    for (const auto& d : s->decls) declare(*d);
    expr(s->init.get());
    LoopInfo loop;
    loop.loc = s->loc;
    loop.keyword = "for";
    std::optional<std::string> var;
    std::optional<Interval> var_range;
    if (!s->cond) {
      loop.bound_kind = BoundKind::Unbounded;
    } else if (auto c = eval(s->cond.get()); c && c->is_point() && c->lo != 0 &&
                                              s->cond->kind != ExprKind::Binary) {
      loop.bound_kind = BoundKind::Unbounded;
    } else {
      std::optional<Interval> init;
      var = induction_var(s, init);
      classify_for(s, var, init, loop, var_range);
    }
    expr(s->cond.get());
    expr(s->step.get());
    std::size_t index = info_->loops.size();
    info_->loops.push_back(loop);
    std::size_t global_index_before = global_index_count_;
    push();
    if (var && var_range) bindings_.back()[*var] = *var_range;
    for (const auto& c : s->children) stmt(c.get());
    pop();
    if (global_index_count_ > global_index_before) info_->loops[index].scans_global = true;
    pop();
  }

  void classify_for(const Stmt* s, const std::optional<std::string>& var, const std::optional<Interval>& init,
                    LoopInfo& loop, std::optional<Interval>& var_range) {
    loop.bound_kind = BoundKind::Symbolic;
    if (!var || !init) return;
    const Expr* c = s->cond.get();
    if (c->kind != ExprKind::Binary) return;
    std::string op = c->op;
    const Expr* lhs = strip_parens_casts(c->args[0].get());
    const Expr* rhs = c->args[1].get();
    if (!(lhs->kind == ExprKind::Ident && lhs->op == *var)) {
      const Expr* r = strip_parens_casts(rhs);
      if (!(r->kind == ExprKind::Ident && r->op == *var)) return;
      rhs = c->args[0].get();
      if (op == "<") op = ">";
      else if (op == ">") op = "<";
      else if (op == "<=") op = ">=";
      else if (op == ">=") op = "<=";
    }
    std::set<std::string> body_mods;
    for (const auto& ch : s->children) modified_in(ch.get(), body_mods);
    if (body_mods.count(*var)) return;
    auto limit = eval(rhs);
    if (!limit) return;
    long long stride = 1;
    int dir = step_direction(s->step.get(), *var, stride);
    if (dir == 0) return;
    long long trip = 0;
    if (dir > 0 && (op == "<" || op == "<=" || op == "!=")) {
      long long last = op == "<=" ? limit->hi : limit->hi - 1;
      trip = (last - init->lo) / stride + 1;
      var_range = Interval{init->lo, std::max(init->lo, last)};
    } else if (dir < 0 && (op == ">" || op == ">=" || op == "!=")) {
      long long last = op == ">=" ? limit->lo : limit->lo + 1;
      trip = (init->hi - last) / stride + 1;
      var_range = Interval{std::min(init->hi, last), init->hi};
    } else {
      return;
    }
    loop.bound_kind = BoundKind::Constant;
    loop.bound_value = std::max<long long>(1, trip);
  }

  void while_loop(const Stmt* s) {
    LoopInfo loop;
    loop.loc = s->loc;
    loop.keyword = s->kind == StmtKind::While ? "while" : "do";
    auto c = eval(s->cond.get());
    loop.bound_kind = (c && c->is_point() && c->lo != 0) ? BoundKind::Unbounded : BoundKind::Symbolic;
    std::size_t index = info_->loops.size();
    info_->loops.push_back(loop);
    std::size_t before = global_index_count_;
    expr(s->cond.get());
    for (const auto& ch : s->children) stmt(ch.get());
    if (global_index_count_ > before) info_->loops[index].scans_global = true;
  }

  // ---- expressions ---------------------------------------------------------
  bool is_global_name(const std::string& n) const {
    return !find_var(n) && !defined_.count(n) && !known_functions_.count(n) && !tu_.enum_constants.count(n);
  }

  bool is_sized_object(const std::string& n) const {
    if (const VarInfo* v = find_var(n)) {
      const auto& ch = v->type.chain;
      if (ch.empty()) return true;  // scalar: &x
      if (ch[0].kind == Kind::Array) {
        if (v->is_param) return ch[0].dim != nullptr;
        return true;
      }
      if (ch[0].kind == Kind::Reference) return true;
      return false;
    }
    if (auto it = globals_.find(n); it != globals_.end()) {
      TypeName t = expand(it->second->type, tu_);
      if (t.chain.empty()) return true;
      return t.chain[0].kind == Kind::Array && (t.chain[0].dim || it->second->init);
    }
    return false;
  }

  ArgFact classify_arg(const Expr* e) {
    ArgFact f;
    if (!e) return f;
    switch (e->kind) {
      case ExprKind::Ident: {
        if (is_pointer_param(e->op)) return {ArgFact::Kind::Param, e->op};
        const VarInfo* v = find_var(e->op);
        if (v) {
          if (is_pointerish(v->type.chain)) {
            f.kind = is_sized_object(e->op) ? ArgFact::Kind::Sized : ArgFact::Kind::Unknown;
          }
          return f;
        }
        if (auto it = globals_.find(e->op); it != globals_.end()) {
          TypeName t = expand(it->second->type, tu_);
          if (is_pointerish(t.chain)) f.kind = is_sized_object(e->op) ? ArgFact::Kind::Sized : ArgFact::Kind::Unknown;
          return f;
        }
        return f;
      }
      case ExprKind::StringLit:
        f.kind = ArgFact::Kind::Sized;
        return f;
      case ExprKind::Unary:
        if (e->op == "&") {
          const Expr* r = root_ident(e->args[0].get());
          if (!r) return {ArgFact::Kind::Unknown, {}};
          if (is_pointer_param(r->op)) return {ArgFact::Kind::AddressIntoParam, r->op};
          if (is_sized_object(r->op) || e->args[0]->kind == ExprKind::Member) return {ArgFact::Kind::Sized, {}};
          return {ArgFact::Kind::Unknown, {}};
        }
        return f;
      case ExprKind::Binary:
        if (e->op == "+" || e->op == "-") {
          for (const auto& a : e->args) {
            if (a->kind != ExprKind::Ident) continue;
            if (is_pointer_param(a->op)) return {ArgFact::Kind::AddressIntoParam, a->op};
            const VarInfo* v = find_var(a->op);
            if (v && is_pointerish(v->type.chain))
              return {is_sized_object(a->op) ? ArgFact::Kind::Sized : ArgFact::Kind::Unknown, {}};
          }
        }
        return f;
      case ExprKind::Cast: {
        if (e->type) {
          TypeName t = expand(*e->type, tu_);
          if (is_pointerish(t.chain)) return {ArgFact::Kind::Unknown, {}};
        }
        return f;
      }
      default:
        return f;
    }
  }

  void note_index(const Expr* base, const Expr* index) {
    const Expr* r = root_ident(base);
    if (r && is_global_name(r->op) && !find_var(r->op)) ++global_index_count_;
    if (base->kind != ExprKind::Ident || !is_pointer_param(base->op)) return;
    PointerUse& u = info_->pointer_use[base->op];
    u.subscripted = true;
    auto v = eval(index);
    if (!v || v->lo < 0 || v->hi >= 65536) {
      u.index_unbounded = true;
    } else {
      u.max_index = std::max(u.max_index, v->hi);
    }
  }

  void call(const Expr* e) {
    const Expr* callee = e->args[0].get();
    if (callee->kind != ExprKind::Ident || find_var(callee->op)) {
      info_->fnptr_uses.push_back({"indirect call", e->loc});
      expr(callee);
      for (std::size_t i = 1; i < e->args.size(); ++i) expr(e->args[i].get());
      return;
    }
    const std::string& name = callee->op;
    CallSite site;
    site.callee = name;
    site.loc = callee->loc;
    site.external = !defined_.count(name);
    for (std::size_t i = 1; i < e->args.size(); ++i) {
      const Expr* a = e->args[i].get();
      ArgFact fact = classify_arg(a);
      site.args.push_back(fact);
      if (fact.kind == ArgFact::Kind::Param) {
        PointerUse& u = info_->pointer_use[fact.param];
        if (site.external)
          u.passed_external = true;
        else
          u.passed_to.emplace_back(name, i - 1);
      } else if (fact.kind == ArgFact::Kind::AddressIntoParam && site.external) {
        info_->pointer_use[fact.param].passed_external = true;
      }
      if (fact.kind == ArgFact::Kind::Param)
        continue;  // the bare name is not an escape
      expr(a);
    }
    if (site.external) {
      if (kIoCalls.count(name)) info_->io_calls.push_back({name, callee->loc});
      if (kAllocCalls.count(name)) info_->alloc_calls.push_back({name, callee->loc});
      if (kMathCalls.count(name)) info_->math_calls.push_back({name, callee->loc});
    }
    info_->calls.push_back(std::move(site));
  }

  void expr(const Expr* e) {
    if (!e) return;
    switch (e->kind) {
      case ExprKind::Ident:
        if (is_pointer_param(e->op)) {
          info_->pointer_use[e->op].arithmetic = true;  // escapes into another object
        } else if (!find_var(e->op) && (defined_.count(e->op) || known_functions_.count(e->op))) {
          info_->fnptr_uses.push_back({"function '" + e->op + "' used as a value", e->loc});
        }
        return;
      case ExprKind::Index:
        note_index(e->args[0].get(), e->args[1].get());
        if (!(e->args[0]->kind == ExprKind::Ident && is_pointer_param(e->args[0]->op))) expr(e->args[0].get());
        expr(e->args[1].get());
        return;
      case ExprKind::Unary:
        if (e->args[0]->kind == ExprKind::Ident && is_pointer_param(e->args[0]->op)) {
          PointerUse& u = info_->pointer_use[e->args[0]->op];
          if (e->op == "*")
            u.dereferenced = true;
          else
            u.arithmetic = true;
          return;
        }
        expr(e->args[0].get());
        return;
      case ExprKind::Postfix:
        if (e->args[0]->kind == ExprKind::Ident && is_pointer_param(e->args[0]->op)) {
          info_->pointer_use[e->args[0]->op].arithmetic = true;
          return;
        }
        expr(e->args[0].get());
        return;
      case ExprKind::Binary:
        if (e->op == "+" || e->op == "-") {
          bool hit = false;
          for (const auto& a : e->args)
            if (a->kind == ExprKind::Ident && is_pointer_param(a->op)) {
              info_->pointer_use[a->op].arithmetic = true;
              hit = true;
            }
          if (hit) {
            for (const auto& a : e->args)
              if (!(a->kind == ExprKind::Ident && is_pointer_param(a->op))) expr(a.get());
            return;
          }
        }
        if (e->op == "==" || e->op == "!=") {
          // comparing a pointer parameter against null is neither arithmetic nor escape
          bool any = false;
          for (const auto& a : e->args)
            if (a->kind == ExprKind::Ident && is_pointer_param(a->op)) {
              info_->pointer_use[a->op].dereferenced = true;
              any = true;
            }
          if (any) {
            for (const auto& a : e->args)
              if (!(a->kind == ExprKind::Ident && is_pointer_param(a->op))) expr(a.get());
            return;
          }
        }
        break;
      case ExprKind::Assign:
        if (e->args[0]->kind == ExprKind::Ident && is_pointer_param(e->args[0]->op)) {
          info_->pointer_use[e->args[0]->op].arithmetic = true;
          expr(e->args[1].get());
          return;
        }
        break;
      case ExprKind::Call:
        call(e);
        return;
      case ExprKind::New:
        info_->alloc_calls.push_back({"new", e->loc});
        break;
      case ExprKind::Delete:
        info_->alloc_calls.push_back({"delete", e->loc});
        break;
      case ExprKind::Sizeof:
        return;  // unevaluated operand
      default:
        break;
    }
    for (const auto& a : e->args) expr(a.get());
  }

  const TranslationUnit& tu_;
  const std::set<std::string>& defined_;
  const std::set<std::string>& known_functions_;
  const std::map<std::string, const Decl*>& globals_;
  FunctionInfo* info_ = nullptr;
  std::set<std::string> modified_;
  std::vector<std::map<std::string, VarInfo>> vars_;
  std::vector<std::map<std::string, Interval>> bindings_;
  std::size_t global_index_count_ = 0;
  mutable bool in_eval_global_ = false;
};

}  // namespace

std::optional<Interval> type_range(const TypeName& type, const TranslationUnit& unit) {
  TypeName t = expand(type, unit);
  if (!t.chain.empty()) return std::nullopt;
  return range_of_base(t.base);
}

SourceUnit parse_c(std::string_view text, std::string path) {
  auto tu = std::make_shared<TranslationUnit>(parse(lex(text)));
  SourceUnit unit;
  unit.path = std::move(path);
  unit.text = std::string(text);
  unit.notes = tu->notes;

  std::set<std::string> defined, known;
  for (const auto& f : tu->functions) defined.insert(f.decl->name);
  for (const auto& p : tu->prototypes) known.insert(p->name);
  std::map<std::string, const Decl*> globals;
  for (const auto& g : tu->globals) globals[g->name] = g.get();

  FunctionAnalyzer analyzer(*tu, defined, known, globals);
  for (const auto& g : tu->globals) {
    GlobalInfo gi;
    gi.name = g->name;
    gi.loc = g->loc;
    gi.is_extern = g->is_extern;
    TypeName t = expand(g->type, *tu);
    gi.is_function_pointer = is_function_pointer(t.chain);
    if (!t.chain.empty() && t.chain[0].kind == Kind::Array) {
      gi.is_array = true;
      for (std::size_t i = 0; i < t.chain.size() && t.chain[i].kind == Kind::Array; ++i) {
        if (!t.chain[i].dim) {
          if (!(i == 0 && g->init)) gi.size_constant = false;
          continue;
        }
        auto v = analyzer.eval_global(t.chain[i].dim.get());
        if (!v || !v->is_point()) gi.size_constant = false;
      }
    }
    unit.globals.push_back(gi);
  }
  for (const auto& f : tu->functions) unit.functions.push_back(analyzer.run(f));
  unit.ast = std::move(tu);
  return unit;
}

}  // namespace hlsr::lint

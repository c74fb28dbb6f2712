#include "hlsr/harness/driver_gen.hpp"

#include <map>
#include <sstream>

#include "hlsr/lint/lexer.hpp"
#include "hlsr/lint/source_unit.hpp"

namespace hlsr::harness {

namespace {

const char* kAcInt = R"HX(#ifndef HX_AC_INT_H
#define HX_AC_INT_H
#include <type_traits>

// Bit-accurate integer for host simulation. Values wrap to W bits after every
// assignment; arithmetic is carried out in 64 bits.
template <int W, bool S = true>
class ac_int {
  static_assert(W >= 1 && W <= 64, "ac_int width must be 1..64");
  long long v_ = 0;

  static long long wrap(long long x) {
    if (W >= 64) return x;
    unsigned long long m = (W >= 64) ? ~0ull : ((1ull << (W % 64)) - 1);
    unsigned long long u = static_cast<unsigned long long>(x) & m;
    if (S && ((u >> ((W - 1) % 64)) & 1)) return static_cast<long long>(u | ~m);
    return static_cast<long long>(u);
  }

 public:
  ac_int() = default;
  template <class T, class = std::enable_if_t<std::is_arithmetic_v<T>>>
  ac_int(T x) : v_(wrap(static_cast<long long>(x))) {}
  template <int W2, bool S2>
  ac_int(const ac_int<W2, S2>& o) : v_(wrap(o.to_int64())) {}

  operator long long() const { return v_; }
  long long to_int64() const { return v_; }
  int to_int() const { return static_cast<int>(v_); }
  unsigned to_uint() const { return static_cast<unsigned>(v_); }
  long to_long() const { return static_cast<long>(v_); }
  double to_double() const { return static_cast<double>(v_); }
  static constexpr int width = W;
  static constexpr bool sign = S;

#define HX_AC_OP(op)                                   \
  template <class T>                                   \
  ac_int& operator op##=(const T& x) {                 \
    v_ = wrap(v_ op static_cast<long long>(x));        \
    return *this;                                      \
  }
  HX_AC_OP(+)
  HX_AC_OP(-)
  HX_AC_OP(*)
  HX_AC_OP(/)
  HX_AC_OP(%)
  HX_AC_OP(&)
  HX_AC_OP(|)
  HX_AC_OP(^)
  HX_AC_OP(<<)
  HX_AC_OP(>>)
#undef HX_AC_OP

  ac_int& operator++() { v_ = wrap(v_ + 1); return *this; }
  ac_int& operator--() { v_ = wrap(v_ - 1); return *this; }
  ac_int operator++(int) { ac_int t = *this; ++*this; return t; }
  ac_int operator--(int) { ac_int t = *this; --*this; return t; }

  bool operator[](int i) const { return (static_cast<unsigned long long>(v_) >> i) & 1; }
  template <int WS>
  ac_int<WS, S> slc(int lsb) const { return ac_int<WS, S>(v_ >> lsb); }
  template <int WS, bool SS>
  ac_int& set_slc(int lsb, const ac_int<WS, SS>& x) {
    unsigned long long m = (WS >= 64 ? ~0ull : ((1ull << WS) - 1)) << lsb;
    v_ = wrap(static_cast<long long>((static_cast<unsigned long long>(v_) & ~m) |
                                     ((static_cast<unsigned long long>(x.to_int64()) << lsb) & m)));
    return *this;
  }
};
#endif
)HX";

const char* kAcFixed = R"HX(#ifndef HX_AC_FIXED_H
#define HX_AC_FIXED_H
#include <math.h>
#include <type_traits>

// Fixed-point value kept as a double truncated to 2^-(W-I) steps.
template <int W, int I, bool S = true>
class ac_fixed {
  double v_ = 0;
  static double q(double x) {
    double step = ldexp(1.0, -(W - I));
    double r = floor(x / step) * step;
    double hi = ldexp(1.0, S ? I - 1 : I);
    double lo = S ? -hi : 0.0;
    if (r >= hi) r = hi - step;
    if (r < lo) r = lo;
    return r;
  }

 public:
  ac_fixed() = default;
  template <class T, class = std::enable_if_t<std::is_arithmetic_v<T> || std::is_class_v<T>>>
  ac_fixed(const T& x) : v_(q(static_cast<double>(x))) {}
  template <int W2, int I2, bool S2>
  ac_fixed(const ac_fixed<W2, I2, S2>& o) : v_(q(o.to_double())) {}

  operator double() const { return v_; }
  double to_double() const { return v_; }
  int to_int() const { return static_cast<int>(v_); }

#define HX_AC_FOP(op)                              \
  template <class T>                               \
  ac_fixed& operator op##=(const T& x) {           \
    v_ = q(v_ op static_cast<double>(x));          \
    return *this;                                  \
  }
  HX_AC_FOP(+)
  HX_AC_FOP(-)
  HX_AC_FOP(*)
  HX_AC_FOP(/)
#undef HX_AC_FOP
};
#endif
)HX";

const char* kSupport = R"HX(#pragma once
#include <assert.h>
#include <ctype.h>
#include <float.h>
#include <limits.h>
#include <math.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include <tuple>
#include <type_traits>

#include "ac_int.h"
#include "ac_fixed.h"
#include "hx_abi.h"

static double hx_observed_value = 0;
static int hx_observed_set = 0;
static inline void hx_observe(double x) {
  hx_observed_value = x;
  hx_observed_set = 1;
}

template <class F>
struct hx_fn;
template <class R, class... A>
struct hx_fn<R(A...)> {
  static constexpr std::size_t arity = sizeof...(A);
  template <std::size_t I>
  using arg = std::tuple_element_t<I, std::tuple<A...>>;
};

template <class T>
long long hx_i64(const T& x) {
  if constexpr (std::is_pointer_v<T>)
    return x != nullptr;
  else
    return static_cast<long long>(x);
}

// Storage for one argument of parameter type P. Pointer parameters get a
// buffer of the pointee type (arrays of arrays included) filled element-wise.
template <class P>
struct hx_arg {
  using D = std::remove_cv_t<P>;
  static constexpr bool is_ptr = std::is_pointer_v<D>;
  using E = std::remove_cv_t<std::conditional_t<is_ptr, std::remove_pointer_t<D>, D>>;
  using S = std::remove_cv_t<std::remove_all_extents_t<E>>;
  static constexpr int per = sizeof(E) / sizeof(S);
  static constexpr int cap = HX_MAXLEN / per + 1;
  std::conditional_t<is_ptr, E[cap], D> hx_st{};

  S* flat() { return reinterpret_cast<S*>(&hx_st); }
  void load(const hx_port& p) {
    if constexpr (is_ptr) {
      for (int i = 0; i < p.hx_len; ++i) flat()[i] = S(p.hx_data[i]);
    } else {
      hx_st = D(p.hx_data[0]);
    }
  }
  void scalar(long long v) {
    if constexpr (is_ptr)
      flat()[0] = S(v);
    else
      hx_st = D(v);
  }
  D get() { return hx_st; }
  long long value() {
    if constexpr (is_ptr)
      return hx_i64(flat()[0]);
    else
      return hx_i64(hx_st);
  }
  void store(hx_port& p) {
    if constexpr (is_ptr)
      for (int i = 0; i < p.hx_len; ++i) p.hx_data[i] = hx_i64(flat()[i]);
  }
};

template <int K, class G>
void hx_bind_global(G& g, const hx_port& p) {
  if constexpr (std::is_pointer_v<G>) {
    using E = std::remove_cv_t<std::remove_pointer_t<G>>;
    static E hx_buf[HX_MAXLEN + 1];
    for (int i = 0; i < p.hx_len; ++i) hx_buf[i] = E(p.hx_data[i]);
    g = hx_buf;
  } else if constexpr (std::is_array_v<G>) {
    using S = std::remove_cv_t<std::remove_all_extents_t<G>>;
    S* f = reinterpret_cast<S*>(&g);
    int n = static_cast<int>(sizeof(G) / sizeof(S));
    for (int i = 0; i < p.hx_len && i < n; ++i) f[i] = S(p.hx_data[i]);
  } else {
    g = G(p.hx_data[0]);
  }
}

template <class F, class... A>
void hx_invoke(hx_vec* v, F& f, A... a) {
  using R = decltype(f(a...));
  if constexpr (std::is_void_v<R>) {
    f(a...);
  } else if constexpr (std::is_arithmetic_v<R> || std::is_class_v<R> || std::is_pointer_v<R>) {
    v->hx_ret = hx_i64(f(a...));
    v->hx_has_ret = 1;
  } else {
    f(a...);
  }
}
)HX";

std::string cstr(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

bool is_include_line(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  if (i >= line.size() || line[i] != '#') return false;
  ++i;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  return line.substr(i, 7) == "include";
}

// Splits include lines out of `code`, blanking them so line numbers hold.
std::string hoist_includes(std::string_view code, std::string& hoisted) {
  std::string body;
  std::size_t start = 0;
  while (start < code.size()) {
    auto end = code.find('\n', start);
    std::string_view line = code.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (is_include_line(line)) {
      hoisted += std::string(line) + "\n";
    } else {
      body += line;
    }
    if (end == std::string_view::npos) break;
    body += '\n';
    start = end + 1;
  }
  return body;
}

const char* decision_cmp(const std::string& pass_if) {
  if (pass_if == "gt") return ">";
  if (pass_if == "le") return "<=";
  if (pass_if == "lt") return "<";
  return ">=";
}

std::string adapter(const EquivalenceSpec& spec, Side side) {
  const Binding& b = side == Side::Original ? spec.original : spec.candidate;
  const std::string ns(side_namespace(side));
  const std::string fn = ns + "::" + b.function;
  const std::string entry = side == Side::Original ? "hx_call_orig" : "hx_call_cand";
  std::ostringstream o;
  o << "extern \"C\" void " << entry << "(hx_vec* hx_v) {\n";
  int k = 0;
  for (const auto& [g, p] : b.globals)
    o << "  hx_bind_global<" << k++ << ">(" << ns << "::" << g << ", hx_v->hx_ports[" << spec.port_index(p) << "]);\n";
  o << "  using hx_F = hx_fn<decltype(" << fn << ")>;\n";
  o << "  static_assert(hx_F::arity == " << b.args.size() << ", \"the test harness calls " << b.function << " with "
    << b.args.size() << " argument(s)\");\n";
  o << "  hx_v->hx_decided = 0;\n  hx_v->hx_has_ret = 0;\n";
  if (!b.observe.empty()) o << "  hx_observed_set = 0;\n";

  const bool stream = !b.stream.empty();
  std::string indent = "  ";
  if (stream) {
    o << "  for (int hx_k = 0; hx_k < hx_v->hx_ports[" << spec.port_index(b.stream) << "].hx_len; ++hx_k) {\n";
    indent = "    ";
  }
  std::vector<std::string> call_args;
  std::map<std::string, int> out_index;
  for (std::size_t i = 0; i < b.args.size(); ++i) {
    ArgRef a = parse_arg(b.args[i]);
    std::string var = "hx_a" + std::to_string(i);
    o << indent << "hx_arg<hx_F::arg<" << i << ">> " << var << ";\n";
    switch (a.kind) {
      case ArgRef::Kind::Port:
        o << indent << var << ".load(hx_v->hx_ports[" << spec.port_index(a.name) << "]);\n";
        break;
      case ArgRef::Kind::Len:
        o << indent << var << ".scalar(hx_v->hx_ports[" << spec.port_index(a.name) << "].hx_len);\n";
        break;
      case ArgRef::Kind::Last:
        o << indent << var << ".scalar(hx_v->hx_ports[" << spec.port_index(a.name) << "].hx_len - 1);\n";
        break;
      case ArgRef::Kind::Elem:
        o << indent << var << ".scalar(hx_v->hx_ports[" << spec.port_index(a.name) << "].hx_data[hx_k]);\n";
        break;
      case ArgRef::Kind::Out:
        out_index[a.name] = static_cast<int>(i);
        break;
      case ArgRef::Kind::Const:
        o << indent << var << ".scalar(" << a.value << "LL);\n";
        break;
    }
    call_args.push_back(var + ".get()");
  }
  o << indent << "hx_invoke(hx_v, " << fn;
  for (const auto& c : call_args) o << ", " << c;
  o << ");\n";
  for (std::size_t i = 0; i < b.args.size(); ++i) {
    ArgRef a = parse_arg(b.args[i]);
    if (a.kind != ArgRef::Kind::Port) continue;
    if (spec.port(a.name)->dir != PortDir::In)
      o << indent << "hx_a" << i << ".store(hx_v->hx_ports[" << spec.port_index(a.name) << "]);\n";
  }
  if (spec.mode == EquivMode::DecisionEquivalent) {
    auto result_expr = [&]() -> std::string {
      if (b.result == "ret") return "hx_v->hx_ret";
      return "hx_a" + std::to_string(out_index.at(b.result)) + ".value()";
    };
    if (!b.valid.empty()) {
      o << indent << "if (hx_a" << out_index.at(b.valid) << ".value() != 0) {\n"
        << indent << "  hx_v->hx_decision = " << result_expr() << ";\n"
        << indent << "  hx_v->hx_decided = 1;\n"
        << indent << "}\n";
    } else if (!b.result.empty()) {
      o << indent << "hx_v->hx_decision = " << result_expr() << ";\n" << indent << "hx_v->hx_decided = 1;\n";
    }
  }
  if (stream) o << "  }\n";
  if (spec.mode == EquivMode::DecisionEquivalent && !b.observe.empty()) {
    o << "  if (hx_observed_set) {\n"
      << "    hx_v->hx_decision = (hx_observed_value " << decision_cmp(spec.decision.pass_if) << " "
      << std::to_string(spec.decision.threshold) << ") ? 1 : 0;\n"
      << "    hx_v->hx_decided = 1;\n"
      << "  }\n";
  }
  o << "}\n";
  return o.str();
}

}  // namespace

std::string_view side_namespace(Side s) { return s == Side::Original ? "hx_orig" : "hx_cand"; }
std::string_view side_file(Side s) { return s == Side::Original ? "original.c" : "candidate.c"; }

long boundary_vectors(const EquivalenceSpec& spec) {
  for (const auto& p : spec.ports)
    if (p.sweep) return p.length + 1;
  return 5;
}

SupportFiles generate_support(const EquivalenceSpec& spec) {
  SupportFiles f;
  std::ostringstream abi;
  abi << "#pragma once\n"
      << "#define HX_MAXLEN " << spec.max_length() << "\n"
      << "#define HX_NPORTS " << spec.ports.size() << "\n"
      << "struct hx_port {\n  long long hx_data[HX_MAXLEN];\n  int hx_len;\n};\n"
      << "struct hx_vec {\n  hx_port hx_ports[HX_NPORTS];\n  long long hx_ret;\n  int hx_has_ret;\n"
      << "  long long hx_decision;\n  int hx_decided;\n};\n"
      << "extern \"C\" void hx_call_orig(hx_vec*);\nextern \"C\" void hx_call_cand(hx_vec*);\n";
  f.abi_h = abi.str();
  f.support_h = kSupport;
  f.ac_int_h = kAcInt;
  f.ac_fixed_h = kAcFixed;
  return f;
}

std::string instrument_observe(std::string_view code, const std::string& function, const std::string& expr) {
  lint::SourceUnit unit;
  try {
    unit = lint::parse_c(code, "original.c");
  } catch (const lint::SyntaxError& e) {
    throw UnmappableInterface(std::string("cannot parse original: ") + e.what());
  }
  const auto* fn = unit.function(function);
  if (!fn) throw UnmappableInterface("original defines no function '" + function + "'");
  std::string out(code);
  out.insert(fn->body_close, " hx_observe((double)(" + expr + ")); ");
  return out;
}

std::string generate_unit(const EquivalenceSpec& spec, Side side, std::string_view code, std::string_view prelude) {
  const Binding& b = side == Side::Original ? spec.original : spec.candidate;
  std::string text(code);
  if (!b.observe.empty()) text = instrument_observe(text, b.function, b.observe);

  std::string hoisted;
  std::string prelude_body = hoist_includes(prelude, hoisted);
  std::string body = hoist_includes(text, hoisted);

  std::ostringstream o;
  o << "#include \"hx_support.h\"\n" << hoisted;
  o << "namespace " << side_namespace(side) << " {\n";
  if (!prelude_body.empty()) o << "#line 1 \"prelude.h\"\n" << prelude_body << "\n";
  o << "#line 1 \"" << side_file(side) << "\"\n" << body << "\n}\n";
  o << "#line 1 \"hx_adapter_" << (side == Side::Original ? "orig" : "cand") << ".cpp\"\n";
  o << adapter(spec, side);
  return o.str();
}

std::string generate_driver(const EquivalenceSpec& spec) {
  std::ostringstream o;
  int sweep = -1, sorted_port = -1;
  for (std::size_t i = 0; i < spec.ports.size(); ++i) {
    if (spec.ports[i].sweep) sweep = static_cast<int>(i);
    if (spec.ports[i].dir == PortDir::InOut && sorted_port < 0) sorted_port = static_cast<int>(i);
  }
  o << "#include \"hx_abi.h\"\n"
    << "#include <fcntl.h>\n#include <unistd.h>\n"
    << "#include <algorithm>\n#include <cstdio>\n#include <cstdlib>\n#include <cstring>\n#include <string>\n\n";
  o << "static const int hx_mode = " << static_cast<int>(spec.mode) << ";  // " << to_string(spec.mode) << "\n";
  o << "static const long hx_random_vectors = " << spec.vectors << ";\n";
  o << "static const unsigned long long hx_seed = " << spec.seed << "ULL;\n";
  o << "static const int hx_sweep = " << sweep << ";\n";
  o << "static const int hx_sorted = " << sorted_port << ";\n";
  o << "static const long hx_boundary = " << boundary_vectors(spec) << ";\n";
  o << "struct hx_pinfo {\n  const char* name;\n  int length, min_length;\n  long long lo, hi;\n  int out, fill;\n};\n";
  o << "static const hx_pinfo hx_pi[HX_NPORTS] = {\n";
  for (const auto& p : spec.ports)
    o << "    {" << cstr(p.name) << ", " << p.length << ", " << p.min_length << ", " << p.min << "LL, " << p.max
      << "LL, " << (p.dir != PortDir::In ? 1 : 0) << ", "
      << (p.dir != PortDir::Out ? 1 : 0) << "},\n";
  o << "};\n";
  o << R"HX(
// xorshift64* (shifts 12/25/27, multiplier 0x2545F4914F6CDD1D), seeded per
// vector through splitmix64 so any vector can be regenerated on its own.
static unsigned long long hx_s;
static void hx_seed_vector(long i) {
  unsigned long long z = hx_seed + 0x9E3779B97F4A7C15ULL * (unsigned long long)(i + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  hx_s = z ? z : 1;
}
static unsigned long long hx_next() {
  hx_s ^= hx_s >> 12;
  hx_s ^= hx_s << 25;
  hx_s ^= hx_s >> 27;
  return hx_s * 0x2545F4914F6CDD1DULL;
}
static long long hx_range(long long lo, long long hi) {
  unsigned long long span = (unsigned long long)(hi - lo) + 1ULL;
  return lo + (long long)((hx_next() >> 11) % span);
}

static void hx_make(long i, hx_vec* v) {
  memset(v, 0, sizeof *v);
  hx_seed_vector(i);
  for (int p = 0; p < HX_NPORTS; ++p) {
    const hx_pinfo& pi = hx_pi[p];
    hx_port& q = v->hx_ports[p];
    q.hx_len = pi.length;
    if (!pi.fill) continue;
    if (i < hx_boundary && hx_sweep >= 0) {
      for (int k = 0; k < q.hx_len; ++k)
        q.hx_data[k] = p == hx_sweep ? (k < i ? 1 : 0) : hx_range(pi.lo, pi.hi);
    } else if (i < hx_boundary) {
      int n = q.hx_len;
      for (int k = 0; k < n; ++k) {
        long long span = pi.hi - pi.lo;
        switch (i) {
          case 0: q.hx_data[k] = pi.lo; break;
          case 1: q.hx_data[k] = pi.hi; break;
          case 2: q.hx_data[k] = n > 1 ? pi.lo + (long long)((double)span * k / (n - 1)) : pi.lo; break;
          case 3: q.hx_data[k] = n > 1 ? pi.hi - (long long)((double)span * k / (n - 1)) : pi.hi; break;
          default: break;
        }
      }
      if (i == 4) {
        q.hx_len = pi.min_length;
        for (int k = 0; k < q.hx_len; ++k) q.hx_data[k] = hx_range(pi.lo, pi.hi);
      }
    } else {
      q.hx_len = (int)hx_range(pi.min_length, pi.length);
      for (int k = 0; k < q.hx_len; ++k) q.hx_data[k] = hx_range(pi.lo, pi.hi);
    }
  }
}

static std::string hx_fmt(const hx_vec* v) {
  std::string s;
  if (hx_mode == 1) return v->hx_decided ? std::to_string(v->hx_decision) : std::string("none");
  for (int p = 0; p < HX_NPORTS; ++p) {
    if (!hx_pi[p].out) continue;
    if (!s.empty()) s += '|';
    for (int k = 0; k < v->hx_ports[p].hx_len; ++k) {
      if (k) s += ',';
      s += std::to_string(v->hx_ports[p].hx_data[k]);
    }
  }
  if (v->hx_has_ret) s += (s.empty() ? "r=" : "|r=") + std::to_string(v->hx_ret);
  return s.empty() ? std::string("-") : s;
}

static bool hx_same_port(const hx_port& a, const hx_port& b) {
  if (a.hx_len != b.hx_len) return false;
  for (int k = 0; k < a.hx_len; ++k)
    if (a.hx_data[k] != b.hx_data[k]) return false;
  return true;
}

static bool hx_equal(const hx_vec* in, const hx_vec* a, const hx_vec* b) {
  if (hx_mode == 1) return a->hx_decided && b->hx_decided && a->hx_decision == b->hx_decision;
  if (hx_mode == 2) {
    const hx_port& c = b->hx_ports[hx_sorted];
    for (int k = 1; k < c.hx_len; ++k)
      if (c.hx_data[k - 1] > c.hx_data[k]) return false;
    const hx_port& x = in->hx_ports[hx_sorted];
    if (c.hx_len != x.hx_len) return false;
    long long* u = (long long*)malloc(sizeof(long long) * (x.hx_len + 1));
    for (int k = 0; k < x.hx_len; ++k) u[k] = x.hx_data[k];
    std::sort(u, u + x.hx_len);
    bool perm = std::equal(u, u + x.hx_len, c.hx_data);
    free(u);
    return perm && hx_same_port(a->hx_ports[hx_sorted], c);
  }
  for (int p = 0; p < HX_NPORTS; ++p)
    if (hx_pi[p].out && !hx_same_port(a->hx_ports[p], b->hx_ports[p])) return false;
  if (a->hx_has_ret != b->hx_has_ret) return false;
  return !a->hx_has_ret || a->hx_ret == b->hx_ret;
}

static hx_vec hx_in, hx_a, hx_b;

static void hx_print_dump(FILE* out, long i, const hx_vec* v) {
  fprintf(out, "DUMP %ld", i);
  for (int p = 0; p < HX_NPORTS; ++p) {
    fprintf(out, " %s=", hx_pi[p].name);
    for (int k = 0; k < v->hx_ports[p].hx_len; ++k) fprintf(out, k ? ",%lld" : "%lld", v->hx_ports[p].hx_data[k]);
  }
  fprintf(out, "\n");
}

int main(int argc, char** argv) {
  long only = -1, dump = -1;
  bool trace = false;
  for (int i = 1; i < argc; ++i) {
    if (!strcmp(argv[i], "--trace")) trace = true;
    else if (!strcmp(argv[i], "--only") && i + 1 < argc) only = atol(argv[++i]);
    else if (!strcmp(argv[i], "--dump") && i + 1 < argc) dump = atol(argv[++i]);
  }
  // Verdicts go to the original stdout; anything the implementations print is discarded.
  FILE* out = fdopen(dup(1), "w");
  int devnull = open("/dev/null", O_WRONLY);
  if (devnull >= 0) dup2(devnull, 1);
  long total = hx_boundary + hx_random_vectors;
  if (dump >= 0) {
    hx_make(dump, &hx_in);
    hx_print_dump(out, dump, &hx_in);
    return 0;
  }
  long first = only >= 0 ? only : 0;
  long last = only >= 0 ? only + 1 : total;
  for (long i = first; i < last; ++i) {
    hx_make(i, &hx_in);
    if (trace) hx_print_dump(out, i, &hx_in);
    hx_a = hx_in;
    hx_b = hx_in;
    hx_call_orig(&hx_a);
    hx_call_cand(&hx_b);
    bool ok = hx_equal(&hx_in, &hx_a, &hx_b);
    fprintf(out, "VEC %ld %s %s %s\n", i, ok ? "OK" : "MISMATCH", hx_fmt(&hx_a).c_str(), hx_fmt(&hx_b).c_str());
    fflush(out);
    if (!ok) {
      fprintf(out, "FAIL %ld\n", i);
      fclose(out);
      return 1;
    }
  }
  fprintf(out, "PASS\n");
  fclose(out);
  return 0;
}
)HX";
  return o.str();
}

}  // namespace hlsr::harness

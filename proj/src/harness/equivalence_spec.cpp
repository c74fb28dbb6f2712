#include "hlsr/harness/equivalence_spec.hpp"

#include <cctype>
#include <fstream>
#include <set>

namespace hlsr::harness {

std::string to_string(EquivMode m) {
  switch (m) {
    case EquivMode::BitExact: return "BitExact";
    case EquivMode::DecisionEquivalent: return "DecisionEquivalent";
    case EquivMode::SortedPermutation: return "SortedPermutation";
  }
  return "BitExact";
}

std::string to_string(PortType t) {
  switch (t) {
    case PortType::U8: return "u8";
    case PortType::I32: return "i32";
    case PortType::Bit: return "bit";
  }
  return "i32";
}

std::string to_string(PortDir d) {
  switch (d) {
    case PortDir::In: return "in";
    case PortDir::InOut: return "inout";
    case PortDir::Out: return "out";
  }
  return "in";
}

namespace {

template <class E>
E parse_enum(const std::string& s, std::initializer_list<E> all, const char* what) {
  for (E e : all)
    if (to_string(e) == s) return e;
  throw UnmappableInterface(std::string("unknown ") + what + " '" + s + "'");
}

std::pair<long long, long long> type_limits(PortType t) {
  switch (t) {
    case PortType::U8: return {0, 255};
    case PortType::Bit: return {0, 1};
    case PortType::I32: return {INT32_MIN, INT32_MAX};
  }
  return {0, 0};
}

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw UnmappableInterface(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* kk : keys) ok = ok || k == kk;
    if (!ok) throw UnmappableInterface("unknown key '" + k + "' in " + where);
  }
}

Binding binding_from_json(const nlohmann::json& j, const std::string& where) {
  check_keys(j, {"function", "args", "globals", "observe", "stream", "valid", "result"}, where);
  Binding b;
  b.function = j.value("function", "");
  b.args = j.value("args", std::vector<std::string>{});
  b.globals = j.value("globals", std::map<std::string, std::string>{});
  b.observe = j.value("observe", "");
  b.stream = j.value("stream", "");
  b.valid = j.value("valid", "");
  b.result = j.value("result", "");
  return b;
}

nlohmann::json binding_to_json(const Binding& b) {
  nlohmann::json j = {{"function", b.function}, {"args", b.args}};
  if (!b.globals.empty()) j["globals"] = b.globals;
  if (!b.observe.empty()) j["observe"] = b.observe;
  if (!b.stream.empty()) j["stream"] = b.stream;
  if (!b.valid.empty()) j["valid"] = b.valid;
  if (!b.result.empty()) j["result"] = b.result;
  return j;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

void validate_binding(const EquivalenceSpec& s, const Binding& b, const std::string& side) {
  auto fail = [&](const std::string& m) { throw UnmappableInterface(side + ": " + m); };
  if (!is_identifier(b.function)) fail("function name '" + b.function + "' is not an identifier");
  if (!b.stream.empty() && !s.port(b.stream)) fail("unknown stream port '" + b.stream + "'");
  std::set<std::string> outs;
  for (const auto& text : b.args) {
    ArgRef a = parse_arg(text);
    switch (a.kind) {
      case ArgRef::Kind::Port:
        if (!s.port(a.name)) fail("unknown port '" + a.name + "'");
        if (a.name == b.stream) fail("stream port '" + a.name + "' must be passed with elem:");
        break;
      case ArgRef::Kind::Len:
      case ArgRef::Kind::Last:
        if (!s.port(a.name)) fail("unknown port '" + a.name + "'");
        break;
      case ArgRef::Kind::Elem:
        if (a.name != b.stream) fail("elem:" + a.name + " requires stream = " + a.name);
        break;
      case ArgRef::Kind::Out:
        if (!is_identifier(a.name) || !outs.insert(a.name).second) fail("bad or duplicate out:" + a.name);
        break;
      case ArgRef::Kind::Const:
        break;
    }
  }
  for (const auto& [g, p] : b.globals) {
    if (!is_identifier(g)) fail("global '" + g + "' is not an identifier");
    if (!s.port(p)) fail("global '" + g + "' bound to unknown port '" + p + "'");
  }
  if (!b.valid.empty() && !outs.count(b.valid)) fail("valid '" + b.valid + "' is not an out: argument");
  if (!b.result.empty() && b.result != "ret" && !outs.count(b.result))
    fail("result '" + b.result + "' is not an out: argument");
  if (!b.stream.empty() && b.valid.empty()) fail("stream binding needs a valid flag");

  if (s.mode == EquivMode::DecisionEquivalent) {
    if (b.observe.empty() && b.result.empty()) fail("decision mode needs observe or result");
    if (!b.observe.empty() && !b.result.empty()) fail("observe and result are exclusive");
  } else {
    if (!b.observe.empty() || !b.stream.empty()) fail("observe/stream are only meaningful in decision mode");
  }
}

}  // namespace

ArgRef parse_arg(const std::string& text) {
  ArgRef a;
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    a.kind = ArgRef::Kind::Port;
    a.name = text;
  } else {
    std::string tag = text.substr(0, colon);
    a.name = text.substr(colon + 1);
    if (tag == "len")
      a.kind = ArgRef::Kind::Len;
    else if (tag == "last")
      a.kind = ArgRef::Kind::Last;
    else if (tag == "elem")
      a.kind = ArgRef::Kind::Elem;
    else if (tag == "out")
      a.kind = ArgRef::Kind::Out;
    else if (tag == "const") {
      a.kind = ArgRef::Kind::Const;
      try {
        std::size_t used = 0;
        a.value = std::stoll(a.name, &used, 0);
        if (used != a.name.size()) throw std::invalid_argument(a.name);
      } catch (const std::exception&) {
        throw UnmappableInterface("bad constant in argument '" + text + "'");
      }
      return a;
    } else {
      throw UnmappableInterface("unknown argument form '" + text + "'");
    }
  }
  if (a.name.empty()) throw UnmappableInterface("empty name in argument '" + text + "'");
  return a;
}

const Port* EquivalenceSpec::port(const std::string& name) const {
  for (const auto& p : ports)
    if (p.name == name) return &p;
  return nullptr;
}

int EquivalenceSpec::port_index(const std::string& name) const {
  for (std::size_t i = 0; i < ports.size(); ++i)
    if (ports[i].name == name) return static_cast<int>(i);
  return -1;
}

int EquivalenceSpec::max_length() const {
  int m = 1;
  for (const auto& p : ports) m = std::max(m, p.length);
  return m;
}

void EquivalenceSpec::validate() const {
  if (vectors < 1) throw UnmappableInterface("vectors must be >= 1");
  if (ports.empty()) throw UnmappableInterface("no ports");
  std::set<std::string> names;
  for (const auto& p : ports) {
    if (!is_identifier(p.name) || !names.insert(p.name).second)
      throw UnmappableInterface("bad or duplicate port name '" + p.name + "'");
    if (p.length < 1 || p.length > 65536) throw UnmappableInterface("port " + p.name + ": length out of range");
    if (p.min_length < 1 || p.min_length > p.length)
      throw UnmappableInterface("port " + p.name + ": min_length out of range");
    auto [lo, hi] = type_limits(p.type);
    if (p.min > p.max || p.min < lo || p.max > hi)
      throw UnmappableInterface("port " + p.name + ": value range outside type");
    if (p.sweep && p.type != PortType::Bit) throw UnmappableInterface("port " + p.name + ": sweep needs a bit port");
  }
  int sweeps = 0;
  for (const auto& p : ports) sweeps += p.sweep;
  if (sweeps > 1) throw UnmappableInterface("at most one sweep port");
  validate_binding(*this, original, "original");
  validate_binding(*this, candidate, "candidate");
  if (mode == EquivMode::SortedPermutation) {
    int inouts = 0;
    for (const auto& p : ports) inouts += p.dir == PortDir::InOut;
    if (inouts != 1) throw UnmappableInterface("sorted mode needs exactly one inout port");
  }
  if (mode == EquivMode::DecisionEquivalent) {
    const auto& p = decision.pass_if;
    if (p != "ge" && p != "gt" && p != "le" && p != "lt") throw UnmappableInterface("bad pass_if '" + p + "'");
  }
}

nlohmann::json to_json(const EquivalenceSpec& s) {
  nlohmann::json ports = nlohmann::json::array();
  for (const auto& p : s.ports)
    ports.push_back({{"name", p.name},
                     {"type", to_string(p.type)},
                     {"length", p.length},
                     {"min_length", p.min_length},
                     {"min", p.min},
                     {"max", p.max},
                     {"dir", to_string(p.dir)},
                     {"sweep", p.sweep}});
  nlohmann::json j = {{"mode", to_string(s.mode)},
                      {"vectors", s.vectors},
                      {"seed", s.seed},
                      {"ports", ports},
                      {"original", binding_to_json(s.original)},
                      {"candidate", binding_to_json(s.candidate)}};
  if (s.mode == EquivMode::DecisionEquivalent)
    j["decision"] = {{"threshold", s.decision.threshold}, {"pass_if", s.decision.pass_if}};
  return j;
}

EquivalenceSpec spec_from_json(const nlohmann::json& j) {
  try {
    check_keys(j, {"mode", "vectors", "seed", "ports", "original", "candidate", "decision"}, "equivalence spec");
    EquivalenceSpec s;
    s.mode = parse_enum(j.at("mode").get<std::string>(),
                        {EquivMode::BitExact, EquivMode::DecisionEquivalent, EquivMode::SortedPermutation}, "mode");
    s.vectors = j.value("vectors", s.vectors);
    s.seed = j.value("seed", s.seed);
    for (const auto& pj : j.at("ports")) {
      check_keys(pj, {"name", "type", "length", "min_length", "min", "max", "dir", "sweep"}, "port");
      Port p;
      p.name = pj.at("name").get<std::string>();
      p.type = parse_enum(pj.value("type", "i32"), {PortType::U8, PortType::I32, PortType::Bit}, "port type");
      p.length = pj.value("length", 1);
      p.min_length = pj.value("min_length", p.length);
      auto [lo, hi] = type_limits(p.type);
      p.min = pj.value("min", lo);
      p.max = pj.value("max", hi);
      p.dir = parse_enum(pj.value("dir", "in"), {PortDir::In, PortDir::InOut, PortDir::Out}, "port dir");
      p.sweep = pj.value("sweep", false);
      s.ports.push_back(std::move(p));
    }
    s.original = binding_from_json(j.at("original"), "original");
    s.candidate = binding_from_json(j.at("candidate"), "candidate");
    if (j.contains("decision")) {
      check_keys(j.at("decision"), {"threshold", "pass_if"}, "decision");
      s.decision.threshold = j.at("decision").value("threshold", s.decision.threshold);
      s.decision.pass_if = j.at("decision").value("pass_if", s.decision.pass_if);
    }
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw UnmappableInterface(std::string("malformed equivalence spec: ") + e.what());
  }
}

EquivalenceSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UnmappableInterface("cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UnmappableInterface(path + ": " + e.what());
  }
  return spec_from_json(j);
}

}  // namespace hlsr::harness

#include "hlsr/harness/harness.hpp"

#include <stdlib.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hlsr::harness {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string fnv_hex(const std::vector<std::string>& parts) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& s : parts) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_support(const fs::path& dir, const SupportFiles& f) {
  write_file(dir / "hx_abi.h", f.abi_h);
  write_file(dir / "hx_support.h", f.support_h);
  write_file(dir / "ac_int.h", f.ac_int_h);
  write_file(dir / "ac_fixed.h", f.ac_fixed_h);
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  if (from.empty()) return;
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

}  // namespace

DriverOutput parse_driver_output(const std::string& out) {
  DriverOutput d;
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "VEC") {
      VectorVerdict v;
      std::string status;
      if (!(ls >> v.index >> status >> v.original >> v.candidate)) continue;
      v.ok = status == "OK";
      d.vectors.push_back(std::move(v));
    } else if (tag == "PASS") {
      d.pass = true;
    } else if (tag == "FAIL") {
      long i = -1;
      if (ls >> i) d.fail = i;
    }
  }
  return d;
}

Harness::Harness(HarnessConfig cfg) : cfg_(std::move(cfg)) {
  fs::path base = cfg_.scratch_root.empty() ? fs::temp_directory_path() : fs::path(cfg_.scratch_root);
  fs::create_directories(base);
  std::string tmpl = (base / "hlsr-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) throw std::runtime_error("cannot create scratch directory under " + base.string());
  root_ = tmpl;
}

Harness::~Harness() {
  if (cfg_.keep_scratch) return;
  std::error_code ec;
  fs::remove_all(root_, ec);
}

std::string Harness::fresh_dir(const std::string& prefix) {
  fs::path d = fs::path(root_) / (prefix + std::to_string(counter_++));
  fs::create_directories(d);
  return d.string();
}

std::vector<std::string> Harness::cc_argv() const {
  auto argv = split_command(cfg_.cc_command);
  if (argv.empty()) throw ToolMissing("empty compiler command");
  argv.insert(argv.end(), cfg_.cc_flags.begin(), cfg_.cc_flags.end());
  return argv;
}

std::string Harness::sanitize(std::string text) const {
  replace_all(text, root_ + "/", "");
  replace_all(text, "hx_cand::", "");
  replace_all(text, "hx_orig::", "");
  return text;
}

ProcessResult Harness::run_cc(const std::vector<std::string>& args, const std::string& cwd) const {
  auto argv = cc_argv();
  argv.insert(argv.end(), args.begin(), args.end());
  ProcessOptions opts;
  opts.cwd = cwd;
  opts.timeout = cfg_.compile_timeout;
  return run_process(argv, opts);
}

CompileResult Harness::compile(const std::string& source, const std::vector<std::string>& extra_sources) {
  std::string dir = fresh_dir("u");
  write_file(fs::path(dir) / "main.cpp", source);
  std::vector<std::string> args = {"-I.", "main.cpp"};
  args.insert(args.end(), extra_sources.begin(), extra_sources.end());
  args.insert(args.end(), {"-o", "prog", "-lm"});
  auto r = run_cc(args, dir);
  CompileResult c;
  c.diagnostics = sanitize(r.err + r.out);
  if (r.timed_out) c.diagnostics += "\ncompiler timed out";
  c.ok = r.ok();
  if (c.ok) c.binary = (fs::path(dir) / "prog").string();
  return c;
}

const Harness::Reference& Harness::reference(const EquivalenceSpec& spec, const std::string& original,
                                             const std::string& prelude) {
  std::vector<std::string> parts = {cfg_.cc_command, to_json(spec).dump(), original, prelude};
  parts.insert(parts.end(), cfg_.cc_flags.begin(), cfg_.cc_flags.end());
  std::string key = fnv_hex(parts);
  std::lock_guard lock(mu_);
  if (auto it = refs_.find(key); it != refs_.end()) return it->second;

  Reference ref;
  ref.dir = fresh_dir("r");
  ref.support = generate_support(spec);
  write_support(ref.dir, ref.support);
  write_file(fs::path(ref.dir) / "orig.cpp", generate_unit(spec, Side::Original, original, prelude));
  write_file(fs::path(ref.dir) / "driver.cpp", generate_driver(spec));
  for (const char* unit : {"orig", "driver"}) {
    auto r = run_cc({"-I.", "-c", std::string(unit) + ".cpp", "-o", std::string(unit) + ".o"}, ref.dir);
    if (!r.ok())
      throw OriginalBuildError(std::string(unit) + ".cpp failed to compile:\n" + sanitize(r.err + r.out));
  }
  ref.orig_obj = (fs::path(ref.dir) / "orig.o").string();
  ref.driver_obj = (fs::path(ref.dir) / "driver.o").string();
  return refs_.emplace(key, std::move(ref)).first->second;
}

CompileResult Harness::build(const EquivalenceSpec& spec, const std::string& original, const std::string& candidate,
                             const std::string& prelude) {
  spec.validate();
  const Reference& ref = reference(spec, original, prelude);
  std::string dir = fresh_dir("c");
  write_support(dir, ref.support);
  write_file(fs::path(dir) / "cand.cpp", generate_unit(spec, Side::Candidate, candidate, prelude));

  CompileResult c;
  auto r = run_cc({"-I.", "-c", "cand.cpp", "-o", "cand.o"}, dir);
  if (!r.ok()) {
    c.diagnostics = sanitize(r.err + r.out);
    if (r.timed_out) c.diagnostics += "\ncompiler timed out";
    return c;
  }
  r = run_cc({ref.driver_obj, ref.orig_obj, "cand.o", "-o", "hx_test", "-lm"}, dir);
  c.diagnostics = sanitize(r.err + r.out);
  if (r.timed_out) c.diagnostics += "\nlinker timed out";
  c.ok = r.ok();
  if (c.ok) c.binary = (fs::path(dir) / "hx_test").string();
  return c;
}

EquivalenceReport Harness::run_equivalence(const CompileResult& build, const EquivalenceSpec& spec) const {
  if (!build.ok || !build.binary) throw std::invalid_argument("run_equivalence needs a successful build");
  auto started = std::chrono::steady_clock::now();
  ProcessOptions opts;
  opts.timeout = cfg_.run_timeout;
  auto r = run_process({*build.binary}, opts);

  EquivalenceReport rep;
  rep.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  auto d = parse_driver_output(r.out);
  rep.vectors_run = static_cast<long>(d.vectors.size());
  long expected = boundary_vectors(spec) + spec.vectors;
  if (r.ok() && d.pass && rep.vectors_run == expected) {
    rep.passed = true;
    return rep;
  }

  Counterexample cx;
  long last = d.vectors.empty() ? -1 : d.vectors.back().index;
  if (d.fail && !d.vectors.empty() && !d.vectors.back().ok) {
    cx.index = *d.fail;
    cx.original = d.vectors.back().original;
    cx.candidate = d.vectors.back().candidate;
    rep.detail = "outputs differ at vector " + std::to_string(cx.index);
  } else {
    cx.index = last + 1;
    if (r.timed_out) {
      cx.candidate = "timeout";
      rep.detail = "test driver timed out at vector " + std::to_string(cx.index);
    } else if (r.signaled) {
      cx.candidate = "crash(signal " + std::to_string(r.signal) + ")";
      rep.detail = "test driver crashed with signal " + std::to_string(r.signal) + " at vector " +
                   std::to_string(cx.index);
    } else {
      cx.candidate = "exit(" + std::to_string(r.exit_code) + ")";
      rep.detail = "test driver stopped with exit code " + std::to_string(r.exit_code) + " at vector " +
                   std::to_string(cx.index);
    }
    cx.original = "-";
  }
  cx.input = dump(build, cx.index);
  rep.counterexample = std::move(cx);
  return rep;
}

std::optional<VectorVerdict> Harness::replay(const CompileResult& build, long index) const {
  ProcessOptions opts;
  opts.timeout = cfg_.run_timeout;
  auto r = run_process({*build.binary, "--only", std::to_string(index)}, opts);
  auto d = parse_driver_output(r.out);
  if (d.vectors.empty()) {
    VectorVerdict v;
    v.index = index;
    v.ok = false;
    v.candidate = r.timed_out ? "timeout" : r.signaled ? "crash(signal " + std::to_string(r.signal) + ")" : "-";
    if (r.ok()) return std::nullopt;
    return v;
  }
  return d.vectors.front();
}

std::string Harness::dump(const CompileResult& build, long index) const {
  ProcessOptions opts;
  opts.timeout = cfg_.run_timeout;
  auto r = run_process({*build.binary, "--dump", std::to_string(index)}, opts);
  auto nl = r.out.find('\n');
  return nl == std::string::npos ? r.out : r.out.substr(0, nl);
}

std::vector<Harness::TraceRow> Harness::trace(const CompileResult& build) const {
  ProcessOptions opts;
  opts.timeout = cfg_.run_timeout;
  opts.max_output = 256u << 20;
  auto r = run_process({*build.binary, "--trace"}, opts);
  std::vector<TraceRow> rows;
  std::istringstream in(r.out);
  std::string line, pending;
  while (std::getline(in, line)) {
    if (line.rfind("DUMP ", 0) == 0) {
      pending = line;
    } else if (line.rfind("VEC ", 0) == 0) {
      auto d = parse_driver_output(line);
      if (d.vectors.empty()) continue;
      rows.push_back({pending, d.vectors.front()});
      pending.clear();
    }
  }
  return rows;
}

}  // namespace hlsr::harness

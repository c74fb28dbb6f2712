#pragma once

#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hlsr/harness/driver_gen.hpp"
#include "hlsr/harness/equivalence_spec.hpp"
#include "hlsr/harness/process.hpp"

namespace hlsr::harness {

/// The reference side failed to build; a setup problem, not a candidate fault.
class OriginalBuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HarnessConfig {
  std::string cc_command = "c++";
  std::vector<std::string> cc_flags = {"-std=c++17", "-O1", "-w", "-fpermissive"};
  double compile_timeout = 60.0;
  double run_timeout = 20.0;
  std::string scratch_root;  // empty: system temp directory
  bool keep_scratch = false;
};

struct CompileResult {
  bool ok = false;
  std::string diagnostics;
  std::optional<std::string> binary;  // present iff ok
};

struct Counterexample {
  long index = -1;
  std::string input;      // DUMP line of the driver
  std::string original;   // formatted outputs
  std::string candidate;
};

struct EquivalenceReport {
  bool passed = false;
  long vectors_run = 0;
  std::optional<Counterexample> counterexample;  // present iff !passed
  double runtime = 0;
  std::string detail;
};

struct VectorVerdict {
  long index = -1;
  bool ok = false;
  std::string original;
  std::string candidate;
};

/// Parses the driver's stdout. Exposed for tests.
struct DriverOutput {
  std::vector<VectorVerdict> vectors;
  bool pass = false;
  std::optional<long> fail;
};
DriverOutput parse_driver_output(const std::string& out);

class Harness {
 public:
  explicit Harness(HarnessConfig cfg = {});
  ~Harness();
  Harness(const Harness&) = delete;
  Harness& operator=(const Harness&) = delete;

  const HarnessConfig& config() const { return cfg_; }
  const std::string& scratch_dir() const { return root_; }

  /// Compiles and links one C++ source (plus extra files, as paths) into an
  /// executable in a fresh scratch directory. Throws ToolMissing.
  CompileResult compile(const std::string& source, const std::vector<std::string>& extra_sources = {});

  /// Links the cached original and driver objects with the candidate. Throws
  /// OriginalBuildError, UnmappableInterface, ToolMissing.
  CompileResult build(const EquivalenceSpec& spec, const std::string& original, const std::string& candidate,
                      const std::string& prelude);

  EquivalenceReport run_equivalence(const CompileResult& build, const EquivalenceSpec& spec) const;

  /// Re-runs a single vector in isolation.
  std::optional<VectorVerdict> replay(const CompileResult& build, long index) const;
  std::string dump(const CompileResult& build, long index) const;

  /// Every vector with its input, in order, up to the first mismatch.
  struct TraceRow {
    std::string input;  // DUMP line
    VectorVerdict verdict;
  };
  std::vector<TraceRow> trace(const CompileResult& build) const;

 private:
  struct Reference {
    std::string dir;
    std::string orig_obj;
    std::string driver_obj;
    SupportFiles support;
  };
  const Reference& reference(const EquivalenceSpec& spec, const std::string& original, const std::string& prelude);
  std::string fresh_dir(const std::string& prefix);
  std::vector<std::string> cc_argv() const;
  std::string sanitize(std::string text) const;
  ProcessResult run_cc(const std::vector<std::string>& args, const std::string& cwd) const;

  HarnessConfig cfg_;
  std::string root_;
  std::atomic<long> counter_{0};
  std::mutex mu_;
  std::map<std::string, Reference> refs_;
};

}  // namespace hlsr::harness

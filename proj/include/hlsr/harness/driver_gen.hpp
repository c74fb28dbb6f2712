#pragma once

#include <string>
#include <string_view>

#include "hlsr/harness/equivalence_spec.hpp"

namespace hlsr::harness {

enum class Side { Original, Candidate };

/// Namespace the side's code is wrapped in ("hx_orig" / "hx_cand").
std::string_view side_namespace(Side s);
/// File name used in #line directives and therefore in diagnostics.
std::string_view side_file(Side s);

/// Headers shared by every translation unit of a differential build.
struct SupportFiles {
  std::string abi_h;      // hx_abi.h: vector layout, depends on the spec
  std::string support_h;  // hx_support.h: includes, observe hook, adapter templates
  std::string ac_int_h;
  std::string ac_fixed_h;
};

SupportFiles generate_support(const EquivalenceSpec& spec);

/// Standalone driver: seeds the PRNG per vector, calls hx_call_orig and
/// hx_call_cand, prints one verdict line per vector and PASS or FAIL <i>.
/// Flags: --only <i>, --dump <i>, --trace (a DUMP line before every verdict).
std::string generate_driver(const EquivalenceSpec& spec);

/// Translation unit holding one implementation plus its extern "C" adapter.
/// `#include` lines are hoisted out of the namespace with line numbers kept.
/// Throws UnmappableInterface when the original must be instrumented and the
/// observed function cannot be located.
std::string generate_unit(const EquivalenceSpec& spec, Side side, std::string_view code, std::string_view prelude);

/// Inserts `hx_observe((double)(expr));` before the closing brace of `function`.
std::string instrument_observe(std::string_view code, const std::string& function, const std::string& expr);

/// Number of boundary vectors the driver runs before the random ones.
long boundary_vectors(const EquivalenceSpec& spec);

}  // namespace hlsr::harness

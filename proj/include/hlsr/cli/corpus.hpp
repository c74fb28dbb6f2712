#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlsr/prompt/plan.hpp"

namespace hlsr::cli {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CorpusEntry {
  std::string name;  // e.g. QuickSort, AES-ShiftRows
  std::string top;
  prompt::PlanKind plan_kind = prompt::PlanKind::Minimal;
  // Absolute paths; optional ones are empty when absent.
  std::string original;
  std::string golden;
  std::string handsfree;
  std::string equivalence;
  std::string prelude;
  std::string transcript;
  std::string transcript_origin;  // "reconstructed" for every bundled transcript
  std::optional<int> expected_prompts;
  std::vector<std::string> advisory_flags;

  bool has_flag(const std::string& f) const;
  bool hands_free() const { return !transcript.empty(); }
};

struct Corpus {
  std::string root;
  std::vector<CorpusEntry> entries;

  const CorpusEntry* find(const std::string& name) const;
  /// Entries with a transcript, in corpus order.
  std::vector<const CorpusEntry*> hands_free() const;
};

/// Reads <root>/corpus.json. Throws CorpusError.
Corpus load_corpus(const std::string& root);

}  // namespace hlsr::cli

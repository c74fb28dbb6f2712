#include "hlsr/cli/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hlsr::cli {

namespace fs = std::filesystem;

bool CorpusEntry::has_flag(const std::string& f) const {
  return std::find(advisory_flags.begin(), advisory_flags.end(), f) != advisory_flags.end();
}

const CorpusEntry* Corpus::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

std::vector<const CorpusEntry*> Corpus::hands_free() const {
  std::vector<const CorpusEntry*> out;
  for (const auto& e : entries)
    if (e.hands_free()) out.push_back(&e);
  return out;
}

Corpus load_corpus(const std::string& root) {
  fs::path base = fs::absolute(root).lexically_normal();
  fs::path index = base / "corpus.json";
  std::ifstream in(index);
  if (!in) throw CorpusError("corpus index not found: " + index.string());
  std::stringstream ss;
  ss << in.rdbuf();

  Corpus c;
  c.root = base.string();
  std::set<std::string> names;
  try {
    auto j = nlohmann::json::parse(ss.str());
    for (const auto& je : j.at("entries")) {
      // "notes" is free text for humans and ignored.
      static const char* kKeys[] = {"name",       "dir",        "top",        "plan",
                                    "original",   "golden",     "handsfree",  "equivalence",
                                    "prelude",    "transcript", "transcript_origin",
                                    "expected_prompts", "advisory_flags", "notes"};
      for (const auto& [k, v] : je.items()) {
        bool known = false;
        for (const char* kk : kKeys) known = known || k == kk;
        if (!known) throw CorpusError("unknown corpus entry key '" + k + "'");
      }
      CorpusEntry e;
      e.name = je.at("name").get<std::string>();
      if (!names.insert(e.name).second) throw CorpusError("duplicate corpus entry " + e.name);
      fs::path dir = base / je.at("dir").get<std::string>();
      auto path_of = [&](const char* key) -> std::string {
        if (!je.contains(key) || je[key].is_null()) return {};
        fs::path p = (dir / je[key].get<std::string>()).lexically_normal();
        if (!fs::exists(p)) throw CorpusError(e.name + ": missing " + key + " file " + p.string());
        return p.string();
      };
      e.top = je.at("top").get<std::string>();
      auto kind = prompt::parse_plan_kind(je.at("plan").get<std::string>());
      if (!kind) throw CorpusError(e.name + ": unknown plan " + je.at("plan").get<std::string>());
      e.plan_kind = *kind;
      e.original = path_of("original");
      e.golden = path_of("golden");
      if (e.original.empty() || e.golden.empty()) throw CorpusError(e.name + ": original and golden are required");
      e.handsfree = path_of("handsfree");
      e.equivalence = path_of("equivalence");
      e.prelude = path_of("prelude");
      e.transcript = path_of("transcript");
      e.transcript_origin = je.value("transcript_origin", "");
      if (!e.transcript.empty() && e.transcript_origin.empty())
        throw CorpusError(e.name + ": transcript without transcript_origin");
      if (je.contains("expected_prompts")) e.expected_prompts = je["expected_prompts"].get<int>();
      e.advisory_flags = je.value("advisory_flags", std::vector<std::string>{});
      c.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw CorpusError(index.string() + ": " + ex.what());
  }
  return c;
}

}  // namespace hlsr::cli

#include "hlsr/llm/mock_backend.hpp"

#include <fstream>
#include <sstream>

namespace hlsr::llm {

Transcript parse_transcript(const nlohmann::json& j) {
  if (!j.is_array()) throw TranscriptParseError("transcript must be a JSON list");
  Transcript t;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("key") || !e.contains("responses"))
      throw TranscriptParseError("transcript entry needs key and responses");
    TranscriptEntry entry;
    try {
      entry.key = e.at("key").get<std::string>();
      entry.responses = e.at("responses").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& ex) {
      throw TranscriptParseError(std::string("bad transcript entry: ") + ex.what());
    }
    if (entry.responses.empty()) throw TranscriptParseError("entry '" + entry.key + "' has no responses");
    t.entries.push_back(std::move(entry));
  }
  return t;
}

Transcript load_transcript(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TranscriptParseError("cannot open transcript " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw TranscriptParseError(path + ": " + e.what());
  }
  return parse_transcript(j);
}

nlohmann::json to_json(const Transcript& t) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : t.entries) j.push_back({{"key", e.key}, {"responses", e.responses}});
  return j;
}

MockBackend::MockBackend(Transcript t) : transcript_(std::move(t)), cursor_(transcript_.entries.size(), 0) {}

std::size_t MockBackend::served() const {
  std::lock_guard lock(mu_);
  return served_;
}

std::vector<Message> MockBackend::complete(const Conversation& conv, const ModelConfig&, const RequestMeta& meta,
                                           int n) {
  std::vector<std::string> keys = meta.keys;
  keys.push_back(prefix_key(conv.messages().back().content));

  std::lock_guard lock(mu_);
  for (const auto& key : keys) {
    for (std::size_t i = 0; i < transcript_.entries.size(); ++i) {
      const auto& e = transcript_.entries[i];
      if (e.key != key) continue;
      if (cursor_[i] >= e.responses.size()) throw TranscriptExhausted("transcript entry '" + key + "' exhausted");
      std::vector<Message> out;
      while (static_cast<int>(out.size()) < n && cursor_[i] < e.responses.size())
        out.push_back({Role::Assistant, e.responses[cursor_[i]++]});
      served_ += out.size();
      return out;
    }
  }
  std::string joined;
  for (const auto& k : keys) joined += (joined.empty() ? "" : ", ") + k;
  throw TranscriptExhausted("no transcript entry for [" + joined + "]");
}

}  // namespace hlsr::llm

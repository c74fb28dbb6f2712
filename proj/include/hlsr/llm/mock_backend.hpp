#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "hlsr/llm/client.hpp"

namespace hlsr::llm {

struct TranscriptEntry {
  std::string key;
  std::vector<std::string> responses;
};

struct Transcript {
  std::vector<TranscriptEntry> entries;
};

/// JSON list of {key, responses: [text]}. Throws TranscriptParseError.
Transcript parse_transcript(const nlohmann::json& j);
Transcript load_transcript(const std::string& path);
nlohmann::json to_json(const Transcript& t);

/// Scripted replay. Each entry has its own cursor; a request is served by the
/// first entry whose key equals the request's first matching key.
class MockBackend : public ChatBackend {
 public:
  explicit MockBackend(Transcript t);

  std::size_t served() const;

 protected:
  std::vector<Message> complete(const Conversation& conv, const ModelConfig& cfg, const RequestMeta& meta,
                                int n) override;

 private:
  Transcript transcript_;
  std::vector<std::size_t> cursor_;
  std::size_t served_ = 0;
  mutable std::mutex mu_;
};

}  // namespace hlsr::llm

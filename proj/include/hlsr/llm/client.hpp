#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlsr/llm/conversation.hpp"

namespace hlsr::llm {

class LlmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NetworkError : public LlmError {
 public:
  using LlmError::LlmError;
};
class TimeoutError : public LlmError {
 public:
  using LlmError::LlmError;
};
class RateLimited : public LlmError {
 public:
  using LlmError::LlmError;
};
class ProviderError : public LlmError {
 public:
  ProviderError(int status, std::string body)
      : LlmError("provider returned HTTP " + std::to_string(status)), status_(status), body_(std::move(body)) {}
  int status() const noexcept { return status_; }
  const std::string& body() const noexcept { return body_; }

 private:
  int status_;
  std::string body_;
};
class ConfigError : public LlmError {
 public:
  using LlmError::LlmError;
};
class PreconditionError : public LlmError {
 public:
  using LlmError::LlmError;
};
class TranscriptExhausted : public LlmError {
 public:
  using LlmError::LlmError;
};
class TranscriptParseError : public LlmError {
 public:
  using LlmError::LlmError;
};

struct RetryPolicy {
  int attempts = 3;           // total network attempts, >= 1
  double backoff_base = 0.5;  // seconds; doubles on every retry
  double backoff_max = 8.0;
};

struct ModelConfig {
  std::string provider = "openai";  // openai | gemini
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.2;              // forward and repair prompts
  double alternatives_temperature = 0.7;  // sample_alternatives with n > 1
  int max_tokens = 2048;
  std::string api_key_ref = "OPENAI_API_KEY";  // name of the environment variable, never the key
  double timeout = 60.0;                       // seconds per attempt
  RetryPolicy retry;

  /// Throws ConfigError.
  void validate() const;
};

nlohmann::json to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);

/// Routing metadata; the mock backend matches transcript entries on these keys in order.
struct RequestMeta {
  std::vector<std::string> keys;
};

/// "prefix:<fnv-1a 64 of the first 256 bytes>" of the last user message.
std::string prefix_key(std::string_view prompt);

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;

  /// Returns the assistant reply; never modifies `conv`.
  Message send(const Conversation& conv, const ModelConfig& cfg, const RequestMeta& meta);
  /// Up to n replies. n == 1 is equivalent to send().
  std::vector<Message> sample_alternatives(const Conversation& conv, const ModelConfig& cfg, const RequestMeta& meta,
                                           int n);

 protected:
  virtual std::vector<Message> complete(const Conversation& conv, const ModelConfig& cfg, const RequestMeta& meta,
                                        int n) = 0;
};

}  // namespace hlsr::llm

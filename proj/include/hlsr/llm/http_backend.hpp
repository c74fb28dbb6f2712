#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "hlsr/llm/client.hpp"

namespace hlsr::llm {

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Throws NetworkError or TimeoutError when no HTTP response arrives.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const std::string& url, const std::map<std::string, std::string>& headers,
                            const std::string& body, double timeout_seconds) = 0;
};

std::unique_ptr<HttpTransport> make_httplib_transport();

struct HttpStats {
  long requests = 0;
  long retries = 0;
  long rate_limited = 0;
};

/// OpenAI-compatible or Gemini chat endpoint with bounded retries.
class HttpBackend : public ChatBackend {
 public:
  using Sleeper = std::function<void(double seconds)>;

  explicit HttpBackend(std::shared_ptr<HttpTransport> transport = nullptr, Sleeper sleeper = nullptr);

  HttpStats stats() const;

  /// Request body and URL for a provider; exposed for tests.
  static std::string request_url(const ModelConfig& cfg);
  static nlohmann::json request_body(const Conversation& conv, const ModelConfig& cfg, int n);
  static std::vector<Message> parse_response(const ModelConfig& cfg, const std::string& body);

 protected:
  std::vector<Message> complete(const Conversation& conv, const ModelConfig& cfg, const RequestMeta& meta,
                                int n) override;

 private:
  double wait_for_cooldown(double max_wait);  // seconds slept
  void note_rate_limit(double backoff);

  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
  mutable std::mutex mu_;
  HttpStats stats_;
  std::chrono::steady_clock::time_point cooldown_until_{};
};

}  // namespace hlsr::llm

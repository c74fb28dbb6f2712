#include "hlsr/llm/http_backend.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace hlsr::llm {

namespace {

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse post(const std::string& url, const std::map<std::string, std::string>& headers,
                    const std::string& body, double timeout_seconds) override {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw NetworkError("malformed URL " + url);
    auto path_begin = url.find('/', scheme_end + 3);
    std::string origin = url.substr(0, path_begin);
    std::string path = path_begin == std::string::npos ? "/" : url.substr(path_begin);

    httplib::Client cli(origin);
    auto secs = static_cast<time_t>(timeout_seconds);
    auto usecs = static_cast<time_t>((timeout_seconds - static_cast<double>(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);

    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = cli.Post(path, h, body, "application/json");
    if (!res) {
      auto err = res.error();
      if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout)
        throw TimeoutError("request timed out: " + httplib::to_string(err));
      throw NetworkError("request failed: " + httplib::to_string(err));
    }
    return {res->status, res->body};
  }
};

double retry_after(const ModelConfig& cfg, int attempt) {
  return std::min(cfg.retry.backoff_max, cfg.retry.backoff_base * std::pow(2.0, attempt - 1));
}

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport() { return std::make_unique<HttplibTransport>(); }

HttpBackend::HttpBackend(std::shared_ptr<HttpTransport> transport, Sleeper sleeper)
    : transport_(transport ? std::move(transport) : std::shared_ptr<HttpTransport>(make_httplib_transport())),
      sleeper_(sleeper ? std::move(sleeper) : Sleeper([](double s) {
        std::this_thread::sleep_for(std::chrono::duration<double>(s));
      })) {}

HttpStats HttpBackend::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

std::string HttpBackend::request_url(const ModelConfig& cfg) {
  std::string base = cfg.endpoint;
  while (!base.empty() && base.back() == '/') base.pop_back();
  if (cfg.provider == "gemini") return base + "/models/" + cfg.model + ":generateContent";
  return base + "/chat/completions";
}

nlohmann::json HttpBackend::request_body(const Conversation& conv, const ModelConfig& cfg, int n) {
  double temperature = n > 1 ? cfg.alternatives_temperature : cfg.temperature;
  if (cfg.provider == "gemini") {
    nlohmann::json contents = nlohmann::json::array();
    nlohmann::json body;
    for (const auto& m : conv.messages()) {
      if (m.role == Role::System) {
        body["systemInstruction"] = {{"parts", {{{"text", m.content}}}}};
        continue;
      }
      contents.push_back({{"role", m.role == Role::User ? "user" : "model"}, {"parts", {{{"text", m.content}}}}});
    }
    body["contents"] = contents;
    body["generationConfig"] = {{"temperature", temperature}, {"maxOutputTokens", cfg.max_tokens},
                                {"candidateCount", n}};
    return body;
  }
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : conv.messages()) msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  return {{"model", cfg.model}, {"messages", msgs}, {"temperature", temperature}, {"max_tokens", cfg.max_tokens},
          {"n", n}};
}

std::vector<Message> HttpBackend::parse_response(const ModelConfig& cfg, const std::string& body) {
  std::vector<Message> out;
  try {
    auto j = nlohmann::json::parse(body);
    if (cfg.provider == "gemini") {
      for (const auto& c : j.at("candidates")) {
        std::string text;
        for (const auto& p : c.at("content").at("parts")) text += p.value("text", "");
        if (!text.empty()) out.push_back({Role::Assistant, text});
      }
    } else {
      for (const auto& c : j.at("choices")) {
        const auto& content = c.at("message").at("content");
        if (content.is_string() && !content.get<std::string>().empty())
          out.push_back({Role::Assistant, content.get<std::string>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(200, std::string("unparseable response: ") + e.what());
  }
  return out;
}

double HttpBackend::wait_for_cooldown(double max_wait) {
  double wait = 0;
  {
    std::lock_guard lock(mu_);
    auto now = std::chrono::steady_clock::now();
    if (cooldown_until_ > now) wait = std::chrono::duration<double>(cooldown_until_ - now).count();
  }
  wait = std::min(wait, max_wait);
  if (wait > 0) sleeper_(wait);
  return std::max(0.0, wait);
}

void HttpBackend::note_rate_limit(double backoff) {
  std::lock_guard lock(mu_);
  ++stats_.rate_limited;
  auto until = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(backoff));
  cooldown_until_ = std::max(cooldown_until_, until);
}

std::vector<Message> HttpBackend::complete(const Conversation& conv, const ModelConfig& cfg, const RequestMeta&,
                                           int n) {
  cfg.validate();
  const char* key = std::getenv(cfg.api_key_ref.c_str());
  if (!key || !*key) throw ConfigError("environment variable " + cfg.api_key_ref + " is not set");

  std::map<std::string, std::string> headers;
  if (cfg.provider == "gemini")
    headers["x-goog-api-key"] = key;
  else
    headers["Authorization"] = std::string("Bearer ") + key;
  const std::string url = request_url(cfg);
  const std::string body = request_body(conv, cfg, n).dump();

  // Attempt timeouts and backoff sleeps share one budget of attempts x timeout.
  double budget = cfg.retry.attempts * cfg.timeout;
  for (int attempt = 1;; ++attempt) {
    bool last = attempt >= cfg.retry.attempts;
    budget -= wait_for_cooldown(budget);
    double attempt_timeout = std::min(cfg.timeout, budget);
    if (attempt_timeout <= 0) throw TimeoutError("retry budget exhausted");
    {
      std::lock_guard lock(mu_);
      ++stats_.requests;
      if (attempt > 1) ++stats_.retries;
    }
    auto started = std::chrono::steady_clock::now();
    HttpResponse res;
    try {
      res = transport_->post(url, headers, body, attempt_timeout);
    } catch (const NetworkError&) {
      if (last) throw;
      res.status = -1;
    } catch (const TimeoutError&) {
      if (last) throw;
      res.status = -1;
    }
    budget -= std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (res.status >= 200 && res.status < 300) return parse_response(cfg, res.body);
    double backoff = retry_after(cfg, attempt);
    if (res.status == 429) {
      note_rate_limit(backoff);
      if (last) throw RateLimited("rate limited after " + std::to_string(attempt) + " attempts");
      continue;  // cooldown does the sleeping
    }
    if (res.status > 0 && (res.status < 500 || last)) throw ProviderError(res.status, res.body);
    backoff = std::min(backoff, std::max(0.0, budget));
    if (backoff > 0) sleeper_(backoff);
    budget -= backoff;
  }
}

}  // namespace hlsr::llm

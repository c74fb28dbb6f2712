#include "hlsr/llm/client.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace hlsr::llm {

void ModelConfig::validate() const {
  if (provider != "openai" && provider != "gemini") throw ConfigError("unknown provider '" + provider + "'");
  if (endpoint.empty()) throw ConfigError("endpoint is empty");
  if (model.empty()) throw ConfigError("model is empty");
  if (!std::isfinite(temperature) || temperature < 0) throw ConfigError("temperature must be finite and >= 0");
  if (!std::isfinite(alternatives_temperature) || alternatives_temperature < 0)
    throw ConfigError("alternatives_temperature must be finite and >= 0");
  if (max_tokens <= 0) throw ConfigError("max_tokens must be positive");
  if (api_key_ref.empty()) throw ConfigError("api_key_ref is empty");
  if (!(timeout > 0)) throw ConfigError("timeout must be positive");
  if (retry.attempts < 1) throw ConfigError("retry.attempts must be >= 1");
  if (!(retry.backoff_base >= 0) || !(retry.backoff_max >= 0)) throw ConfigError("backoff must be >= 0");
}

nlohmann::json to_json(const ModelConfig& c) {
  return {{"provider", c.provider},
          {"endpoint", c.endpoint},
          {"model", c.model},
          {"temperature", c.temperature},
          {"alternatives_temperature", c.alternatives_temperature},
          {"max_tokens", c.max_tokens},
          {"api_key_ref", c.api_key_ref},
          {"timeout", c.timeout},
          {"retry", {{"attempts", c.retry.attempts}, {"backoff_base", c.retry.backoff_base},
                     {"backoff_max", c.retry.backoff_max}}}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  static const char* kKeys[] = {"provider", "endpoint",    "model",   "temperature", "alternatives_temperature",
                                "max_tokens", "api_key_ref", "timeout", "retry"};
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* kk : kKeys) known = known || k == kk;
    if (!known) throw ConfigError("unknown model key '" + k + "'");
  }
  ModelConfig c;
  c.provider = j.value("provider", c.provider);
  c.endpoint = j.value("endpoint", c.endpoint);
  c.model = j.value("model", c.model);
  c.temperature = j.value("temperature", c.temperature);
  c.alternatives_temperature = j.value("alternatives_temperature", c.alternatives_temperature);
  c.max_tokens = j.value("max_tokens", c.max_tokens);
  c.api_key_ref = j.value("api_key_ref", c.api_key_ref);
  c.timeout = j.value("timeout", c.timeout);
  if (j.contains("retry")) {
    const auto& r = j.at("retry");
    for (const auto& [k, v] : r.items())
      if (k != "attempts" && k != "backoff_base" && k != "backoff_max")
        throw ConfigError("unknown retry key '" + k + "'");
    c.retry.attempts = r.value("attempts", c.retry.attempts);
    c.retry.backoff_base = r.value("backoff_base", c.retry.backoff_base);
    c.retry.backoff_max = r.value("backoff_max", c.retry.backoff_max);
  }
  return c;
}

std::string prefix_key(std::string_view prompt) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < prompt.size() && i < 256; ++i) {
    h ^= static_cast<unsigned char>(prompt[i]);
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "prefix:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Message ChatBackend::send(const Conversation& conv, const ModelConfig& cfg, const RequestMeta& meta) {
  return sample_alternatives(conv, cfg, meta, 1).front();
}

std::vector<Message> ChatBackend::sample_alternatives(const Conversation& conv, const ModelConfig& cfg,
                                                      const RequestMeta& meta, int n) {
  if (!conv.ends_with_user()) throw PreconditionError("conversation must end with a user message");
  if (n < 1) throw std::invalid_argument("n must be positive");
  auto out = complete(conv, cfg, meta, n);
  if (out.empty()) throw ProviderError(200, "empty completion");
  if (static_cast<int>(out.size()) > n) out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace hlsr::llm

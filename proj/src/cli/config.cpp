#include "hlsr/cli/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef HLSR_DEFAULT_CORPUS
#define HLSR_DEFAULT_CORPUS "corpus"
#endif

namespace hlsr::cli {

namespace {

const char* const kTopKeys[] = {"model",         "llm",         "budgets",    "cc_command",
                                "compile_timeout", "run_timeout", "synthesis",  "corpus_root",
                                "output_dir",    "offline_math_script", "hints"};

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* kk : keys) known = known || k == kk;
    if (!known) throw ConfigError("unknown " + where + " key '" + k + "'");
  }
}

template <class T>
T get(const nlohmann::json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

void Config::validate() const {
  if (!llm_disabled) {
    try {
      model.validate();
    } catch (const llm::ConfigError& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    budgets.validate();
  } catch (const orch::SessionSetupError& e) {
    throw ConfigError(e.what());
  }
  if (cc_command.empty()) throw ConfigError("cc_command is empty");
  if (!(compile_timeout > 0) || !(run_timeout > 0)) throw ConfigError("timeouts must be positive");
  if (synthesis.external && synthesis.command.empty()) throw ConfigError("external synthesis needs a command");
  if (output_dir.empty()) throw ConfigError("output_dir is empty");
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
}

std::string default_config_path(const EnvLookup& env) {
  if (auto p = env("HLSR_CONFIG")) return *p;
  if (auto x = env("XDG_CONFIG_HOME")) return *x + "/hlsr/config.json";
  if (auto h = env("HOME")) return *h + "/.config/hlsr/config.json";
  return ".hlsr/config.json";
}

nlohmann::json to_json(const Config& c) {
  return {{"model", llm::to_json(c.model)},
          {"llm", c.llm_disabled ? "none" : c.model.provider + "/" + c.model.model},
          {"budgets",
           {{"max_repairs_per_step", c.budgets.max_repairs_per_step},
            {"max_total_prompts", c.budgets.max_total_prompts},
            {"per_check_timeout", c.budgets.per_check_timeout}}},
          {"cc_command", c.cc_command},
          {"compile_timeout", c.compile_timeout},
          {"run_timeout", c.run_timeout},
          {"synthesis", orch::to_string(c.synthesis)},
          {"corpus_root", c.corpus_root},
          {"output_dir", c.output_dir},
          {"offline_math_script", c.offline_math_script},
          {"hints", c.hints}};
}

Config merge_config(Config c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* kk : kTopKeys) known = known || k == kk;
    if (!known) throw ConfigError("unknown config key '" + k + "'");
  }
  if (j.contains("model")) {
    nlohmann::json m = llm::to_json(c.model);
    if (!j["model"].is_object()) throw ConfigError("config key 'model' must be an object");
    // Partial retry objects overlay the current retry settings.
    m.merge_patch(j["model"]);
    try {
      c.model = llm::model_config_from_json(m);
    } catch (const llm::ConfigError& e) {
      throw ConfigError(e.what());
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config key 'model' has a value of the wrong type");
    }
  }
  if (j.contains("llm")) apply_llm_choice(c, get<std::string>(j, "llm", ""));
  if (j.contains("budgets")) {
    const auto& b = j["budgets"];
    check_keys(b, {"max_repairs_per_step", "max_total_prompts", "per_check_timeout"}, "budgets");
    c.budgets.max_repairs_per_step = get(b, "max_repairs_per_step", c.budgets.max_repairs_per_step);
    c.budgets.max_total_prompts = get(b, "max_total_prompts", c.budgets.max_total_prompts);
    c.budgets.per_check_timeout = get(b, "per_check_timeout", c.budgets.per_check_timeout);
  }
  c.cc_command = get(j, "cc_command", c.cc_command);
  c.compile_timeout = get(j, "compile_timeout", c.compile_timeout);
  c.run_timeout = get(j, "run_timeout", c.run_timeout);
  if (j.contains("synthesis")) {
    try {
      c.synthesis = orch::parse_synthesis_mode(get<std::string>(j, "synthesis", ""));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  c.corpus_root = get(j, "corpus_root", c.corpus_root);
  c.output_dir = get(j, "output_dir", c.output_dir);
  c.offline_math_script = get(j, "offline_math_script", c.offline_math_script);
  c.hints = get(j, "hints", c.hints);
  return c;
}

void apply_llm_choice(Config& c, const std::string& choice) {
  if (choice == "none") {
    c.llm_disabled = true;
    return;
  }
  auto slash = choice.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == choice.size())
    throw ConfigError("--llm expects <provider>/<model> or none, got '" + choice + "'");
  std::string provider = choice.substr(0, slash);
  if (provider != c.model.provider) {
    // Switching provider resets the provider-specific defaults.
    if (provider == "gemini") {
      c.model.endpoint = "https://generativelanguage.googleapis.com/v1beta";
      c.model.api_key_ref = "GEMINI_API_KEY";
    } else if (provider == "openai") {
      c.model.endpoint = "https://api.openai.com/v1";
      c.model.api_key_ref = "OPENAI_API_KEY";
    } else {
      throw ConfigError("unknown provider '" + provider + "'");
    }
  }
  c.model.provider = provider;
  c.model.model = choice.substr(slash + 1);
  c.llm_disabled = false;
}

void apply_env(Config& c, const EnvLookup& env) {
  if (auto v = env("HLSR_LLM")) apply_llm_choice(c, *v);
  if (auto v = env("HLSR_ENDPOINT")) c.model.endpoint = *v;
  if (auto v = env("HLSR_CC")) c.cc_command = *v;
  if (auto v = env("HLSR_SYNTHESIS")) {
    try {
      c.synthesis = orch::parse_synthesis_mode(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("HLSR_SYNTHESIS: ") + e.what());
    }
  }
  if (auto v = env("HLSR_CORPUS")) c.corpus_root = *v;
  if (auto v = env("HLSR_OUT")) c.output_dir = *v;
}

Config load_config(const std::optional<std::string>& explicit_path, const EnvLookup& env) {
  Config c;
  c.corpus_root = HLSR_DEFAULT_CORPUS;
  std::string path = explicit_path ? *explicit_path : default_config_path(env);
  std::ifstream in(path);
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
    try {
      c = merge_config(std::move(c), j);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + e.what());
    }
  } else if (explicit_path) {
    throw ConfigError("cannot read config file " + path);
  }
  apply_env(c, env);
  return c;
}

}  // namespace hlsr::cli

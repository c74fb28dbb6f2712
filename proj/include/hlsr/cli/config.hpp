#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "hlsr/llm/client.hpp"
#include "hlsr/orchestrator/orchestrator.hpp"

namespace hlsr::cli {

/// Bad configuration: unknown keys, invalid values, missing credentials.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  llm::ModelConfig model;
  bool llm_disabled = false;  // --llm none: only mock replay is possible
  orch::Budgets budgets;
  std::string cc_command = "c++";
  double compile_timeout = 60.0;
  double run_timeout = 20.0;
  orch::SynthesisMode synthesis;
  std::string corpus_root;
  std::string output_dir = "hlsr-out";
  bool offline_math_script = false;
  std::map<std::string, std::string> hints;  // step id -> repair hint

  /// Throws ConfigError.
  void validate() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

/// $HLSR_CONFIG, else $XDG_CONFIG_HOME/hlsr/config.json, else ~/.config/hlsr/config.json.
std::string default_config_path(const EnvLookup& env);

nlohmann::json to_json(const Config& c);
/// Overlays the keys present in `j` onto `base`. Unknown keys throw ConfigError.
Config merge_config(Config base, const nlohmann::json& j);

/// Applies HLSR_LLM, HLSR_CC, HLSR_SYNTHESIS, HLSR_CORPUS, HLSR_OUT, HLSR_ENDPOINT.
void apply_env(Config& c, const EnvLookup& env);

/// "none" or "<provider>/<model>".
void apply_llm_choice(Config& c, const std::string& choice);

/// Defaults, then the config file (explicit path must exist; the default path
/// may be absent), then the environment. CLI flags are applied by the caller.
Config load_config(const std::optional<std::string>& explicit_path, const EnvLookup& env);

}  // namespace hlsr::cli

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/eval/alignment.hpp"
#include "tabdoc/synth/loop_config.hpp"

namespace tabdoc::cli {

/// Environment snapshot; injectable so precedence can be tested.
using Environment = std::map<std::string, std::string, std::less<>>;
Environment process_environment();

struct LlmSettings {
  std::string base_url;
  std::string model;
  std::string api_key_env = "TABDOC_API_KEY";  // name of the variable, never the secret
  std::optional<unsigned> rate_limit_rpm;
  std::optional<std::size_t> token_budget;
  int max_attempts = 3;
  int backoff_base_ms = 1000;
  std::string transcript;  // scripted backend when set
  bool strict = false;
};

struct RunConfig {
  LlmSettings llm;
  std::map<std::string, std::string, std::less<>> agent_models;  // agent -> model
  synth::LoopConfig loops;
  eval::AlignmentConfig align;
  int parallelism = 1;
  std::string output_root = ".";
  std::string prompt_dir;

  /// Throws config_error on out-of-range values.
  void validate() const;
};

enum class ConfigSource { default_value, file, env, flag };
std::string_view to_string(ConfigSource s) noexcept;

/// Dotted keys as set by each layer, as text.
struct ConfigLayers {
  std::map<std::string, std::string> file;
  std::map<std::string, std::string> env;
  std::map<std::string, std::string> flags;
};

struct ResolvedConfig {
  RunConfig config;
  std::map<std::string, ConfigSource> sources;  // keys set by a non-default layer
};

/// Every recognised key except the open-ended agents.<name>.model family.
const std::vector<std::string>& config_keys();
bool is_config_key(std::string_view key);

/// "llm.base_url" -> "TABDOC_LLM_BASE_URL"; agent keys map the same way.
std::string env_name(std::string_view key);

/// Flattens a JSON config object into dotted keys. Scalars become their
/// text; unknown keys and non-scalar leaves throw config_error.
std::map<std::string, std::string> flatten_config(const nlohmann::json& j);
std::map<std::string, std::string> load_config_file(const std::filesystem::path& path);

/// Picks TABDOC_* variables that name a config key.
std::map<std::string, std::string> env_layer(const Environment& env);

/// Applies defaults, then file, env and flags, so later layers win per key.
/// Throws config_error for unparseable values.
ResolvedConfig resolve_config(const ConfigLayers& layers);

nlohmann::json to_json(const ResolvedConfig& r);

}  // namespace tabdoc::cli

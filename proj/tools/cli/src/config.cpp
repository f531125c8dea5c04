#include "tabdoc/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <limits>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/io.hpp"

extern char** environ;

namespace tabdoc::cli {

using nlohmann::json;

namespace {

constexpr std::string_view kEnvPrefix = "TABDOC_";

const std::vector<std::string>& agent_names() {
  static const std::vector<std::string> names = {"annotator", "refiner", "refine_verifier", "planner",
                                                 "writer",    "section_verifier", "judge", "extractor"};
  return names;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw Error(Errc::config_error,
              std::string(key) + ": expected " + std::string(want) + ", got '" + std::string(value) + "'");
}

template <class T>
T parse_integer(std::string_view key, std::string_view text, T lo, T hi) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || v < lo || v > hi)
    bad_value(key, text, "an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

double parse_double(std::string_view key, std::string_view text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(text), &used);
    if (used != text.size()) bad_value(key, text, "a number");
    return v;
  } catch (const std::logic_error&) {
    bad_value(key, text, "a number");
  }
}

bool parse_bool(std::string_view key, std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  bad_value(key, text, "a boolean");
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  constexpr int kMaxInt = std::numeric_limits<int>::max();
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"llm.base_url", [](RunConfig& c, auto, auto v) { c.llm.base_url = v; }},
      {"llm.model", [](RunConfig& c, auto, auto v) { c.llm.model = v; }},
      {"llm.api_key_env", [](RunConfig& c, auto, auto v) { c.llm.api_key_env = v; }},
      {"llm.rate_limit_rpm",
       [](RunConfig& c, auto k, auto v) { c.llm.rate_limit_rpm = parse_integer<unsigned>(k, v, 1, 1000000); }},
      {"llm.token_budget",
       [](RunConfig& c, auto k, auto v) {
         c.llm.token_budget = parse_integer<std::size_t>(k, v, 1, std::numeric_limits<std::size_t>::max());
       }},
      {"llm.max_attempts", [](RunConfig& c, auto k, auto v) { c.llm.max_attempts = parse_integer(k, v, 1, 100); }},
      {"llm.backoff_base_ms",
       [](RunConfig& c, auto k, auto v) { c.llm.backoff_base_ms = parse_integer(k, v, 0, 600000); }},
      {"llm.transcript", [](RunConfig& c, auto, auto v) { c.llm.transcript = v; }},
      {"llm.strict", [](RunConfig& c, auto k, auto v) { c.llm.strict = parse_bool(k, v); }},
      {"loop.annotation_rounds",
       [](RunConfig& c, auto k, auto v) { c.loops.annotation_rounds = parse_integer(k, v, 1, kMaxInt); }},
      {"loop.evidence_retries",
       [](RunConfig& c, auto k, auto v) { c.loops.evidence_retries = parse_integer(k, v, 1, kMaxInt); }},
      {"loop.section_retries",
       [](RunConfig& c, auto k, auto v) { c.loops.section_retries = parse_integer(k, v, 1, kMaxInt); }},
      {"align.tau",
       [](RunConfig& c, auto k, auto v) {
         const double tau = parse_double(k, v);
         if (!(tau >= 0.0 && tau <= 1.0)) bad_value(k, v, "a number in [0, 1]");
         c.align.tau = tau;
       }},
      {"align.similarity",
       [](RunConfig& c, auto k, auto v) {
         const auto kind = eval::parse_similarity_kind(v);
         if (!kind) bad_value(k, v, "normalized_edit or token_jaccard");
         c.align.similarity = *kind;
       }},
      {"run.parallelism", [](RunConfig& c, auto k, auto v) { c.parallelism = parse_integer(k, v, 1, 256); }},
      {"run.output_root", [](RunConfig& c, auto, auto v) { c.output_root = v; }},
      {"run.prompt_dir", [](RunConfig& c, auto, auto v) { c.prompt_dir = v; }},
  };
  return table;
}

std::optional<std::string> agent_of(std::string_view key) {
  constexpr std::string_view pre = "agents.", post = ".model";
  if (key.size() <= pre.size() + post.size() || key.substr(0, pre.size()) != pre ||
      key.substr(key.size() - post.size()) != post)
    return std::nullopt;
  std::string name(key.substr(pre.size(), key.size() - pre.size() - post.size()));
  if (std::find(agent_names().begin(), agent_names().end(), name) == agent_names().end()) return std::nullopt;
  return name;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (auto agent = agent_of(key)) {
    cfg.agent_models[*agent] = value;
    return;
  }
  for (const auto& [k, set] : setters()) {
    if (k == key) {
      set(cfg, key, value);
      return;
    }
  }
  throw Error(Errc::config_error, "unknown config key: " + key);
}

void flatten(const json& j, const std::string& prefix, std::map<std::string, std::string>& out) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten(v, key, out);
      continue;
    }
    if (!is_config_key(key)) throw Error(Errc::config_error, "unknown config key: " + key);
    if (v.is_string())
      out[key] = v.get<std::string>();
    else if (v.is_number() || v.is_boolean())
      out[key] = v.dump();
    else
      throw Error(Errc::config_error, key + ": expected a scalar value");
  }
}

}  // namespace

Environment process_environment() {
  Environment env;
  for (char** e = environ; e && *e; ++e) {
    std::string_view entry(*e);
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    env.emplace(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
  }
  return env;
}

void RunConfig::validate() const {
  try {
    loops.validate();
    align.validate();
  } catch (const std::invalid_argument& e) {
    throw Error(Errc::config_error, e.what());
  }
  if (parallelism < 1) throw Error(Errc::config_error, "run.parallelism must be >= 1");
  if (llm.max_attempts < 1) throw Error(Errc::config_error, "llm.max_attempts must be >= 1");
}

std::string_view to_string(ConfigSource s) noexcept {
  switch (s) {
    case ConfigSource::default_value: return "default";
    case ConfigSource::file: return "file";
    case ConfigSource::env: return "env";
    case ConfigSource::flag: return "flag";
  }
  return "default";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, set] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

bool is_config_key(std::string_view key) {
  if (agent_of(key)) return true;
  const auto& keys = config_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::string env_name(std::string_view key) {
  std::string out(kEnvPrefix);
  for (char c : key) out.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

std::map<std::string, std::string> flatten_config(const json& j) {
  if (!j.is_object()) throw Error(Errc::config_error, "config file must hold an object");
  std::map<std::string, std::string> out;
  flatten(j, "", out);
  return out;
}

std::map<std::string, std::string> load_config_file(const std::filesystem::path& path) {
  json j;
  try {
    j = io::read_json(path);
  } catch (const Error& e) {
    throw Error(Errc::config_error, "config file " + path.string() + ": " + e.what());
  }
  return flatten_config(j);
}

std::map<std::string, std::string> env_layer(const Environment& env) {
  std::map<std::string, std::string> out;
  auto take = [&](const std::string& key) {
    if (auto it = env.find(env_name(key)); it != env.end()) out[key] = it->second;
  };
  for (const auto& key : config_keys()) take(key);
  for (const auto& agent : agent_names()) take("agents." + agent + ".model");
  return out;
}

ResolvedConfig resolve_config(const ConfigLayers& layers) {
  ResolvedConfig r;
  const std::pair<const std::map<std::string, std::string>*, ConfigSource> order[] = {
      {&layers.file, ConfigSource::file}, {&layers.env, ConfigSource::env}, {&layers.flags, ConfigSource::flag}};
  for (const auto& [layer, source] : order) {
    for (const auto& [key, value] : *layer) {
      apply(r.config, key, value);
      r.sources[key] = source;
    }
  }
  r.config.validate();
  return r;
}

json to_json(const ResolvedConfig& r) {
  const auto& c = r.config;
  json agents = json::object();
  for (const auto& [a, m] : c.agent_models) agents[a] = m;
  json sources = json::object();
  for (const auto& [k, s] : r.sources) sources[k] = std::string(to_string(s));
  return {{"llm",
           {{"base_url", c.llm.base_url},
            {"model", c.llm.model},
            {"api_key_env", c.llm.api_key_env},
            {"rate_limit_rpm", c.llm.rate_limit_rpm ? json(*c.llm.rate_limit_rpm) : json(nullptr)},
            {"token_budget", c.llm.token_budget ? json(*c.llm.token_budget) : json(nullptr)},
            {"max_attempts", c.llm.max_attempts},
            {"backoff_base_ms", c.llm.backoff_base_ms},
            {"transcript", c.llm.transcript},
            {"strict", c.llm.strict}}},
          {"agents", std::move(agents)},
          {"loop", synth::to_json(c.loops)},
          {"align", {{"tau", c.align.tau}, {"similarity", std::string(eval::to_string(c.align.similarity))}}},
          {"run", {{"parallelism", c.parallelism}, {"output_root", c.output_root}, {"prompt_dir", c.prompt_dir}}},
          {"sources", std::move(sources)}};
}

}  // namespace tabdoc::cli

#include "tabdoc/llm/scripted_backend.hpp"

#include <fnmatch.h>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/io.hpp"
#include "tabdoc/model/normalize.hpp"

namespace tabdoc::llm {

using nlohmann::json;

Transcript transcript_from_json(const json& j) {
  Transcript t;
  const json* list = &j;
  if (j.is_object()) {
    t.strict = j.value("strict", false);
    list = &j.at("entries");
  }
  if (!list->is_array()) throw Error(Errc::parse_error, "transcript entries must be an array");
  try {
    for (const auto& e : *list) {
      TranscriptEntry entry;
      entry.match = e.value("match", std::string{});
      const auto& r = e.at("response");
      entry.response = r.is_string() ? r.get<std::string>() : r.dump();
      entry.repeat = e.value("repeat", std::size_t{1});
      entry.status = e.value("status", 200);
      if (entry.repeat == 0) throw Error(Errc::parse_error, "transcript entry with repeat 0");
      t.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed transcript: ") + e.what());
  }
  return t;
}

Transcript load_transcript(const std::filesystem::path& path) {
  return transcript_from_json(io::read_json(path));
}

bool prompt_matches(const std::string& match, const std::string& prompt) {
  if (match.empty()) return true;
  if (match.find_first_of("*?") != std::string::npos) {
    return ::fnmatch(match.c_str(), prompt.c_str(), 0) == 0;
  }
  return prompt.find(match) != std::string::npos;
}

ScriptedBackend::ScriptedBackend(Transcript transcript)
    : transcript_(std::move(transcript)), used_(transcript_.entries.size(), 0) {}

std::optional<std::size_t> ScriptedBackend::find(const std::string& prompt) const {
  for (std::size_t i = 0; i < transcript_.entries.size(); ++i) {
    const auto& e = transcript_.entries[i];
    if (used_[i] >= e.repeat) continue;
    if (prompt_matches(e.match, prompt)) return i;
    if (transcript_.strict) return std::nullopt;
  }
  return std::nullopt;
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
  const std::string prompt = request.rendered_prompt();
  std::lock_guard lock(mu_);
  prompts_.push_back(prompt);
  const auto hit = find(prompt);
  if (!hit) {
    std::string head = prompt.substr(0, 160);
    for (auto& ch : head) {
      if (ch == '\n') ch = ' ';
    }
    throw Error(Errc::transcript_mismatch,
                std::string(transcript_.strict ? "next transcript entry" : "no transcript entry") +
                    " matches request #" + std::to_string(prompts_.size()) + ": " + head);
  }
  ++used_[*hit];
  const auto& entry = transcript_.entries[*hit];
  if (entry.status != 200) {
    const bool retryable = entry.status == 0 || entry.status == 429 || entry.status >= 500;
    if (entry.status == 401 || entry.status == 403) {
      throw Error(Errc::auth_error, "scripted status " + std::to_string(entry.status));
    }
    throw TransportError(entry.status, retryable, "scripted status " + std::to_string(entry.status));
  }
  ChatResponse out;
  out.content = entry.response;
  out.finish_reason = FinishReason::stop;
  out.usage = {model::count_tokens(prompt), model::count_tokens(entry.response)};
  return out;
}

std::vector<std::string> ScriptedBackend::prompts() const {
  std::lock_guard lock(mu_);
  return prompts_;
}

std::size_t ScriptedBackend::remaining() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (std::size_t i = 0; i < transcript_.entries.size(); ++i) {
    n += transcript_.entries[i].repeat - used_[i];
  }
  return n;
}

}  // namespace tabdoc::llm

#include "tabdoc/synth/judge.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/llm/structured.hpp"

namespace tabdoc::synth {

using nlohmann::json;

namespace {

int read_score(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::judge_parse_error, std::string("missing score \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number_integer() && !(v.is_number_float() && std::floor(v.get<double>()) == v.get<double>())) {
    throw Error(Errc::judge_parse_error, std::string("score \"") + key + "\" is not an integer");
  }
  const auto score = v.is_number_integer() ? v.get<long long>() : static_cast<long long>(v.get<double>());
  if (score < 1 || score > 5) {
    throw Error(Errc::judge_parse_error, std::string("score \"") + key + "\" = " + std::to_string(score) +
                                             " is outside 1..5");
  }
  return static_cast<int>(score);
}

}  // namespace

QualityScores parse_judge_reply(std::string_view reply) {
  json j;
  try {
    j = llm::extract_structured(reply);
  } catch (const StructuredParseError& e) {
    throw Error(Errc::judge_parse_error, e.what());
  }
  return {read_score(j, "lexical_richness"), read_score(j, "logical_consistency"),
          read_score(j, "textual_coherence")};
}

QualityScores judge_document(const model::SynthDocument& doc, llm::AgentRuntime& agents) {
  if (doc.assembled_text.empty()) throw Error(Errc::invalid_argument, "judge needs an assembled document");
  const auto reply = agents.ask("judge", {{"document", doc.assembled_text}}, llm::ResponseFormat::structured_object);
  return parse_judge_reply(reply.content);
}

json to_json(const QualityScores& s) {
  return {{"lexical_richness", s.lexical_richness},
          {"logical_consistency", s.logical_consistency},
          {"textual_coherence", s.textual_coherence},
          {"average", std::round(s.average() * 100.0) / 100.0}};
}

}  // namespace tabdoc::synth

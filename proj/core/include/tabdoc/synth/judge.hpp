#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

#include "tabdoc/llm/agent_runtime.hpp"
#include "tabdoc/model/evidence.hpp"

namespace tabdoc::synth {

/// Rubric scores on the 1..5 scale (1 = worst).
struct QualityScores {
  int lexical_richness = 0;
  int logical_consistency = 0;
  int textual_coherence = 0;

  double average() const noexcept {
    return (lexical_richness + logical_consistency + textual_coherence) / 3.0;
  }
};

/// Throws judge_parse_error when a score is missing, not an integer, or
/// outside 1..5.
QualityScores parse_judge_reply(std::string_view reply);

QualityScores judge_document(const model::SynthDocument& doc, llm::AgentRuntime& agents);

/// Scores plus "average" rounded to two decimals.
nlohmann::json to_json(const QualityScores& scores);

}  // namespace tabdoc::synth

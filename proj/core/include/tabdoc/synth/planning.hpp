#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tabdoc/llm/agent_runtime.hpp"
#include "tabdoc/model/evidence.hpp"
#include "tabdoc/synth/loop_config.hpp"

namespace tabdoc::synth {

/// Parses a Planner reply into a plan whose sections are renumbered 1..K in
/// reply order. Throws planner_parse_error for malformed JSON or K = 0, and
/// unknown_evidence_id for an id outside `pool`.
model::WritingPlan parse_plan(std::string_view reply, const std::vector<model::EvidenceItem>& pool);

/// One Planner call. `omitted` lists ids a previous plan left out.
model::WritingPlan plan_sections(const std::vector<model::EvidenceItem>& evidence, llm::AgentRuntime& agents,
                                 const std::vector<std::string>& omitted = {});

/// Pool ids assigned to no section, in pool order. Duplicated assignments
/// are allowed and do not count.
std::vector<std::string> check_plan_coverage(const model::WritingPlan& plan,
                                             const std::vector<model::EvidenceItem>& evidence);

struct PlanOutcome {
  model::WritingPlan plan;
  int attempts = 0;
  std::vector<std::string> problems;
};

/// Plans and re-plans with the omission list until coverage is complete, at
/// most cfg.section_retries times. Parse failures use up an attempt too.
/// Throws plan_incomplete when the bound is hit.
PlanOutcome plan_loop(const std::vector<model::EvidenceItem>& evidence, llm::AgentRuntime& agents,
                      const LoopConfig& cfg);

}  // namespace tabdoc::synth

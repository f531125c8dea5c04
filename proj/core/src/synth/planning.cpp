#include "tabdoc/synth/planning.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/llm/structured.hpp"
#include "tabdoc/synth/render.hpp"

namespace tabdoc::synth {

using model::EvidenceItem;
using model::WritingPlan;
using nlohmann::json;

model::WritingPlan parse_plan(std::string_view reply, const std::vector<EvidenceItem>& pool) {
  json j;
  try {
    j = llm::extract_structured(reply);
  } catch (const StructuredParseError& e) {
    throw Error(Errc::planner_parse_error, e.what());
  }
  WritingPlan plan;
  try {
    plan = model::writing_plan_from_json(j);
  } catch (const Error& e) {
    throw Error(Errc::planner_parse_error, e.what());
  }
  if (plan.sections.empty()) throw Error(Errc::planner_parse_error, "plan has no sections");

  std::set<std::string> known;
  for (const auto& item : pool) known.insert(item.id);
  for (std::size_t k = 0; k < plan.sections.size(); ++k) {
    auto& s = plan.sections[k];
    s.index = k + 1;
    for (const auto& id : s.evidence_ids) {
      if (!known.count(id)) {
        throw Error(Errc::unknown_evidence_id, "section " + std::to_string(k + 1) + " cites unknown evidence '" + id + "'");
      }
    }
  }
  return plan;
}

model::WritingPlan plan_sections(const std::vector<EvidenceItem>& evidence, llm::AgentRuntime& agents,
                                 const std::vector<std::string>& omitted) {
  if (evidence.empty()) throw Error(Errc::invalid_argument, "nothing to plan: evidence pool is empty");
  std::string feedback;
  if (!omitted.empty()) {
    feedback = "- Omitted by the previous plan (assign every one of them):";
    for (const auto& id : omitted) feedback += " " + id;
    feedback += "\n";
  }
  const llm::TemplateVars vars = {
      {"list_of_evidences_with_ids", "\n" + render_evidence_with_ids(evidence)},
      {"coverage_feedback", feedback},
  };
  const auto reply = agents.ask("planner", vars, llm::ResponseFormat::structured_object);
  return parse_plan(reply.content, evidence);
}

std::vector<std::string> check_plan_coverage(const WritingPlan& plan, const std::vector<EvidenceItem>& evidence) {
  std::set<std::string> assigned;
  for (const auto& s : plan.sections) assigned.insert(s.evidence_ids.begin(), s.evidence_ids.end());
  std::vector<std::string> missing;
  for (const auto& item : evidence) {
    if (!assigned.count(item.id)) missing.push_back(item.id);
  }
  return missing;
}

PlanOutcome plan_loop(const std::vector<EvidenceItem>& evidence, llm::AgentRuntime& agents, const LoopConfig& cfg) {
  cfg.validate();
  PlanOutcome out;
  std::vector<std::string> omitted;
  for (int attempt = 0; attempt < cfg.section_retries; ++attempt) {
    ++out.attempts;
    try {
      auto plan = plan_sections(evidence, agents, omitted);
      omitted = check_plan_coverage(plan, evidence);
      if (omitted.empty()) {
        out.plan = std::move(plan);
        return out;
      }
      std::string msg = "attempt " + std::to_string(attempt + 1) + " omitted";
      for (const auto& id : omitted) msg += " " + id;
      out.problems.push_back(std::move(msg));
    } catch (const Error& e) {
      if (e.code() != Errc::planner_parse_error && e.code() != Errc::unknown_evidence_id) throw;
      out.problems.push_back("attempt " + std::to_string(attempt + 1) + ": " + e.what());
    }
  }
  std::string msg = "no complete plan after " + std::to_string(out.attempts) + " attempts";
  if (!out.problems.empty()) msg += " (last: " + out.problems.back() + ")";
  throw Error(Errc::plan_incomplete, msg);
}

}  // namespace tabdoc::synth

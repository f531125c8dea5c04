#include "tabdoc/synth/verdict.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/llm/structured.hpp"

namespace tabdoc::synth {

using nlohmann::json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// "None", "", "n/a" and null all mean no text.
std::optional<std::string> optional_text(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
  const auto& v = obj.at(key);
  if (!v.is_string()) return std::nullopt;
  auto s = v.get<std::string>();
  const auto l = lower(s);
  if (l.empty() || l == "none" || l == "n/a" || l == "null") return std::nullopt;
  return s;
}

std::optional<VerdictStatus> parse_status(const json& v) {
  if (!v.is_string()) return std::nullopt;
  const auto s = lower(v.get<std::string>());
  if (s == "pass") return VerdictStatus::PASS;
  if (s == "fail") return VerdictStatus::FAIL;
  return std::nullopt;
}

std::optional<json> parse_reply(std::string_view reply, std::string& problem) {
  try {
    return llm::extract_structured(reply);
  } catch (const StructuredParseError& e) {
    problem = e.what();
    return std::nullopt;
  }
}

}  // namespace

std::string_view to_string(VerdictStatus s) noexcept { return s == VerdictStatus::PASS ? "PASS" : "FAIL"; }

VerifierVerdict::VerifierVerdict(std::map<std::string, bool> checks, std::optional<std::string> fail_rationale,
                                 std::optional<std::string> revise_suggestion, std::vector<SectionError> errors)
    : checks_(std::move(checks)),
      rationale_(std::move(fail_rationale)),
      suggestion_(std::move(revise_suggestion)),
      errors_(std::move(errors)) {
  if (checks_.empty()) throw Error(Errc::invalid_argument, "a verdict needs at least one check");
  const bool all = std::all_of(checks_.begin(), checks_.end(), [](const auto& kv) { return kv.second; });
  status_ = all ? VerdictStatus::PASS : VerdictStatus::FAIL;
  if (!all && !rationale_) {
    std::string failed;
    for (const auto& [name, ok] : checks_) {
      if (ok) continue;
      if (!failed.empty()) failed += ", ";
      failed += name;
    }
    rationale_ = "failed checks: " + failed;
  }
}

VerifierVerdict VerifierVerdict::unparseable(std::string_view detail) {
  return VerifierVerdict({{"parseable", false}}, "unparseable verdict: " + std::string(detail));
}

std::string VerifierVerdict::feedback_text() const {
  if (passed()) return {};
  std::string out = "Rationale: " + rationale_.value_or("");
  if (suggestion_) out += "\nSuggestion: " + *suggestion_;
  for (const auto& e : errors_) {
    out += "\n- [" + e.type + "] " + e.description;
    if (!e.suggestion.empty()) out += " Fix: " + e.suggestion;
  }
  return out;
}

json to_json(const VerifierVerdict& v) {
  json j = {{"status", to_string(v.status())}, {"checks", v.checks()}};
  j["fail_rationale"] = v.fail_rationale() ? json(*v.fail_rationale()) : json(nullptr);
  j["revise_suggestion"] = v.revise_suggestion() ? json(*v.revise_suggestion()) : json(nullptr);
  json errors = json::array();
  for (const auto& e : v.errors()) {
    errors.push_back({{"type", e.type}, {"description", e.description}, {"suggestion", e.suggestion}});
  }
  j["errors"] = std::move(errors);
  return j;
}

VerifierVerdict parse_evidence_verdict(std::string_view reply) {
  std::string problem;
  const auto parsed = parse_reply(reply, problem);
  if (!parsed) return VerifierVerdict::unparseable(problem);
  const json& j = *parsed;
  if (!j.contains("evaluation") || !j["evaluation"].is_object()) {
    return VerifierVerdict::unparseable("missing \"evaluation\" object");
  }
  std::map<std::string, bool> checks;
  for (const auto key : {kCheckValueCorrectness, kCheckLabelAlignment, kCheckSchemaLeakage}) {
    const std::string k(key);
    const auto& eval = j["evaluation"];
    if (!eval.contains(k) || !eval[k].is_boolean()) {
      return VerifierVerdict::unparseable("missing boolean check \"" + k + "\"");
    }
    checks[k] = eval[k].get<bool>();
  }
  const bool all = checks[std::string(kCheckValueCorrectness)] && checks[std::string(kCheckLabelAlignment)] &&
                   checks[std::string(kCheckSchemaLeakage)];
  if (j.contains("status")) {
    const auto declared = parse_status(j["status"]);
    if (!declared) return VerifierVerdict::unparseable("status is neither PASS nor FAIL");
    if ((*declared == VerdictStatus::PASS) != all) checks[std::string(kCheckStatusConsistent)] = false;
  }
  const json feedback = j.value("feedback", json::object());
  return VerifierVerdict(std::move(checks), optional_text(feedback, "fail_rationale"),
                         optional_text(feedback, "revise_suggest"));
}

VerifierVerdict parse_section_verdict(std::string_view reply) {
  std::string problem;
  const auto parsed = parse_reply(reply, problem);
  if (!parsed) return VerifierVerdict::unparseable(problem);
  const json& j = *parsed;
  if (!j.contains("verification_status")) return VerifierVerdict::unparseable("missing \"verification_status\"");
  const auto declared = parse_status(j["verification_status"]);
  if (!declared) return VerifierVerdict::unparseable("verification_status is neither PASS nor FAIL");

  std::vector<SectionError> errors;
  if (j.contains("errors") && !j["errors"].is_null()) {
    if (!j["errors"].is_array()) return VerifierVerdict::unparseable("\"errors\" is not an array");
    for (const auto& e : j["errors"]) {
      if (!e.is_object()) return VerifierVerdict::unparseable("error entry is not an object");
      SectionError err;
      err.type = e.value("type", std::string{});
      err.description = e.value("description", std::string{});
      err.suggestion = e.value("suggestion", std::string{});
      errors.push_back(std::move(err));
    }
  }

  std::map<std::string, bool> checks = {{std::string(kCheckFaithfulGrounding), true},
                                        {std::string(kCheckSchemaLeakage), true}};
  for (const auto& e : errors) {
    const auto t = lower(e.type);
    if (t.find("leak") != std::string::npos) {
      checks[std::string(kCheckSchemaLeakage)] = false;
    } else {
      checks[std::string(kCheckFaithfulGrounding)] = false;
    }
  }
  if ((*declared == VerdictStatus::PASS) != errors.empty()) checks[std::string(kCheckStatusConsistent)] = false;

  std::optional<std::string> rationale;
  std::optional<std::string> suggestion;
  if (!errors.empty()) {
    rationale = errors.front().description;
    if (!errors.front().suggestion.empty()) suggestion = errors.front().suggestion;
  }
  return VerifierVerdict(std::move(checks), std::move(rationale), std::move(suggestion), std::move(errors));
}

}  // namespace tabdoc::synth

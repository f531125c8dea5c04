#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace tabdoc::synth {

enum class VerdictStatus { PASS, FAIL };

std::string_view to_string(VerdictStatus s) noexcept;

/// One error reported by the section verifier.
struct SectionError {
  std::string type;
  std::string description;
  std::string suggestion;

  friend bool operator==(const SectionError&, const SectionError&) = default;
};

/// Outcome of a checklist verifier. The status is derived from the checks,
/// never taken on trust: PASS iff every check is true. A FAIL always carries
/// a rationale; when the verifier gave none, one naming the failed checks is
/// filled in.
class VerifierVerdict {
 public:
  VerifierVerdict(std::map<std::string, bool> checks, std::optional<std::string> fail_rationale = {},
                  std::optional<std::string> revise_suggestion = {}, std::vector<SectionError> errors = {});

  /// FAIL with rationale "unparseable verdict: <detail>".
  static VerifierVerdict unparseable(std::string_view detail);

  VerdictStatus status() const noexcept { return status_; }
  bool passed() const noexcept { return status_ == VerdictStatus::PASS; }
  const std::map<std::string, bool>& checks() const noexcept { return checks_; }
  const std::optional<std::string>& fail_rationale() const noexcept { return rationale_; }
  const std::optional<std::string>& revise_suggestion() const noexcept { return suggestion_; }
  const std::vector<SectionError>& errors() const noexcept { return errors_; }

  /// Text appended to the generator's next prompt.
  std::string feedback_text() const;

 private:
  VerdictStatus status_;
  std::map<std::string, bool> checks_;
  std::optional<std::string> rationale_;
  std::optional<std::string> suggestion_;
  std::vector<SectionError> errors_;
};

nlohmann::json to_json(const VerifierVerdict& v);

inline constexpr std::string_view kCheckValueCorrectness = "value_correctness";
inline constexpr std::string_view kCheckLabelAlignment = "label_alignment";
inline constexpr std::string_view kCheckSchemaLeakage = "schema_leakage";
inline constexpr std::string_view kCheckFaithfulGrounding = "faithful_grounding";
inline constexpr std::string_view kCheckStatusConsistent = "status_consistent";

/// Parses the evidence verifier's reply. Every check is true when it passes.
/// A missing or non-boolean check key, or no JSON at all, yields
/// unparseable(). A declared status that disagrees with the checks adds a
/// false `status_consistent` check.
VerifierVerdict parse_evidence_verdict(std::string_view reply);

/// Parses the section verifier's reply. Error types mentioning "leak" clear
/// schema_leakage; all other error types clear faithful_grounding. A FAIL
/// with no errors, or a PASS with errors, clears status_consistent.
VerifierVerdict parse_section_verdict(std::string_view reply);

}  // namespace tabdoc::synth

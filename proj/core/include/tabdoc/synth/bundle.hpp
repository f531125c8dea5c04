#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/model/capability_matrix.hpp"
#include "tabdoc/model/evidence.hpp"
#include "tabdoc/model/schema.hpp"
#include "tabdoc/model/table.hpp"

namespace tabdoc::synth {

// Released case layout, one directory per case.
inline constexpr const char* kSchemaFile = "schema.json";
inline constexpr const char* kTableFile = "table.json";
inline constexpr const char* kMatrixFile = "capability_matrix.json";
inline constexpr const char* kEvidenceFile = "evidence.json";
inline constexpr const char* kPlanFile = "plan.json";
inline constexpr const char* kDocumentFile = "document.md";
inline constexpr const char* kProvenanceFile = "provenance.json";
inline constexpr const char* kQualityFile = "quality.json";  // only with --judge

struct CaseBundle {
  std::shared_ptr<const model::Schema> schema;
  model::Table table;
  model::CapabilityMatrix matrix;
  std::vector<model::EvidenceItem> evidence;
  model::WritingPlan plan;
  std::string document;
  nlohmann::json provenance;
};

/// Writes every bundle file; the document last so a half-written directory
/// never looks complete.
void write_case_bundle(const std::filesystem::path& dir, const CaseBundle& bundle);

/// Loads and parses every bundle file. Throws on the first unreadable or
/// malformed one; semantic checks are validate_case's job.
CaseBundle load_case_bundle(const std::filesystem::path& dir);

/// Loads only the schema and ground-truth table of a case.
std::pair<std::shared_ptr<const model::Schema>, model::Table> load_case_table(const std::filesystem::path& dir);

struct Violation {
  std::string kind;  // parse, matrix, plan, completeness, null_evidence, evidence
  std::string detail;
};

/// Deterministic bundle audit. Violations are data: a broken file becomes one
/// "parse" violation and the remaining checks are skipped.
/// Checks: matrix complete, refined, and sized to the table; plan cites only
/// known ids and covers the pool; every non-NULL cell has evidence; every
/// fragment is a substring of document.md; NULL cells carry no evidence;
/// evidence ids are unique and point inside the table.
std::vector<Violation> validate_case(const std::filesystem::path& dir);

}  // namespace tabdoc::synth

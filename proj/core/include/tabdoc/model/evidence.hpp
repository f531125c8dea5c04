#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/model/table.hpp"
#include "tabdoc/model/taxonomy.hpp"

namespace tabdoc::model {

/// Evidence generated for one ground-truth cell: its canonical sentence plus
/// the (possibly transformed) fragments that end up in the document.
struct EvidenceItem {
  std::string id;
  CellRef cell;
  std::string canonical_text;
  std::optional<SubCapability> sub_capability;
  std::vector<std::string> fragments;
  std::optional<std::string> source_tag;

  /// Fragments joined with " | ", used in prompts.
  std::string joined_fragments() const;

  friend bool operator==(const EvidenceItem&, const EvidenceItem&) = default;
};

/// Throws invalid_argument on duplicate ids, empty fragment lists, or cell
/// references outside the table.
void check_evidence_pool(const std::vector<EvidenceItem>& items, const Table& table);

nlohmann::json to_json(const EvidenceItem& item);
EvidenceItem evidence_item_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<EvidenceItem>& items);
std::vector<EvidenceItem> evidence_list_from_json(const nlohmann::json& j);

struct PlanSection {
  std::size_t index = 0;  // 1..K
  std::string title;
  std::string summary;
  std::vector<std::string> evidence_ids;

  friend bool operator==(const PlanSection&, const PlanSection&) = default;
};

struct WritingPlan {
  std::string document_type;
  std::vector<PlanSection> sections;

  friend bool operator==(const WritingPlan&, const WritingPlan&) = default;
};

nlohmann::json to_json(const WritingPlan& plan);
WritingPlan writing_plan_from_json(const nlohmann::json& j);

struct DocumentSection {
  std::string title;
  std::string body;

  friend bool operator==(const DocumentSection&, const DocumentSection&) = default;
};

struct SynthDocument {
  std::vector<DocumentSection> sections;
  std::string assembled_text;
  std::size_t token_count = 0;
};

}  // namespace tabdoc::model

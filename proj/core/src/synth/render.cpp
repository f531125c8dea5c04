#include "tabdoc/synth/loop_config.hpp"
#include "tabdoc/synth/render.hpp"

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"

namespace tabdoc::synth {

void LoopConfig::validate() const {
  if (annotation_rounds < 1 || evidence_retries < 1 || section_retries < 1) {
    throw Error(Errc::invalid_argument, "loop bounds must all be >= 1");
  }
}

nlohmann::json to_json(const LoopConfig& cfg) {
  return {{"annotation_rounds", cfg.annotation_rounds},
          {"evidence_retries", cfg.evidence_retries},
          {"section_retries", cfg.section_retries}};
}

std::string cell_name(const model::Table& table, model::CellRef ref) {
  return table.entity(ref.row) + " / " + table.schema().attribute(ref.col).name;
}

std::string render_label_grid(const model::Table& table, const model::CapabilityMatrix& matrix) {
  const auto& schema = table.schema();
  std::string out = "|";
  for (const auto& a : schema.attributes()) out += " " + a.name + " |";
  out += "\n|";
  for (std::size_t c = 0; c < schema.attribute_count(); ++c) out += " --- |";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out += "\n|";
    for (std::size_t c = 0; c < table.cols(); ++c) {
      if (c == schema.key_attribute_index()) {
        out += " " + table.entity(r);
        const auto& l = matrix.at(r, c);
        out += l ? " (" + l->to_string() + ") |" : " (?) |";
        continue;
      }
      const auto& l = matrix.at(r, c);
      out += " " + (l ? l->to_string() : std::string("?")) + " |";
    }
  }
  return out + "\n";
}

std::string render_evidence_with_ids(const std::vector<model::EvidenceItem>& items) {
  std::string out;
  for (const auto& item : items) out += "- [" + item.id + "] " + item.joined_fragments() + "\n";
  return out;
}

std::string render_fragments(const model::EvidenceItem& item) {
  std::string out;
  for (std::size_t i = 0; i < item.fragments.size(); ++i) {
    out += std::to_string(i + 1) + ". " + item.fragments[i] + "\n";
  }
  return out;
}

}  // namespace tabdoc::synth

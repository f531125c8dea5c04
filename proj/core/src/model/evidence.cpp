#include "tabdoc/model/evidence.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"

namespace tabdoc::model {

using nlohmann::json;

std::string EvidenceItem::joined_fragments() const {
  std::string out;
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    if (i) out += " | ";
    out += fragments[i];
  }
  return out;
}

void check_evidence_pool(const std::vector<EvidenceItem>& items, const Table& table) {
  std::set<std::string> ids;
  for (const auto& item : items) {
    if (item.id.empty()) throw Error(Errc::invalid_argument, "evidence item without id");
    if (!ids.insert(item.id).second) {
      throw Error(Errc::invalid_argument, "duplicate evidence id '" + item.id + "'");
    }
    if (item.fragments.empty()) {
      throw Error(Errc::invalid_argument, "evidence '" + item.id + "' has no fragments");
    }
    if (item.cell.row >= table.rows() || item.cell.col >= table.cols()) {
      throw Error(Errc::invalid_argument, "evidence '" + item.id + "' points outside the table");
    }
  }
}

json to_json(const EvidenceItem& item) {
  json j = {{"id", item.id},
            {"cell", {item.cell.row, item.cell.col}},
            {"canonical_text", item.canonical_text},
            {"fragments", item.fragments}};
  j["sub_capability"] = item.sub_capability ? json(to_string(*item.sub_capability)) : json(nullptr);
  if (item.source_tag) j["source"] = *item.source_tag;
  return j;
}

EvidenceItem evidence_item_from_json(const json& j) {
  try {
    EvidenceItem item;
    item.id = j.at("id").get<std::string>();
    const auto& cell = j.at("cell");
    item.cell = {cell.at(0).get<std::size_t>(), cell.at(1).get<std::size_t>()};
    item.canonical_text = j.value("canonical_text", std::string{});
    item.fragments = j.at("fragments").get<std::vector<std::string>>();
    if (j.contains("sub_capability") && !j.at("sub_capability").is_null()) {
      const auto text = j.at("sub_capability").get<std::string>();
      item.sub_capability = parse_sub_capability(text);
      if (!item.sub_capability) throw Error(Errc::parse_error, "unknown sub-capability '" + text + "'");
    }
    if (j.contains("source") && !j.at("source").is_null()) item.source_tag = j.at("source").get<std::string>();
    return item;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed evidence item: ") + e.what());
  }
}

json to_json(const std::vector<EvidenceItem>& items) {
  json out = json::array();
  for (const auto& item : items) out.push_back(to_json(item));
  return out;
}

std::vector<EvidenceItem> evidence_list_from_json(const json& j) {
  const json& list = j.is_object() && j.contains("evidence") ? j.at("evidence") : j;
  if (!list.is_array()) throw Error(Errc::parse_error, "evidence file must hold an array");
  std::vector<EvidenceItem> out;
  for (const auto& item : list) out.push_back(evidence_item_from_json(item));
  return out;
}

json to_json(const WritingPlan& plan) {
  json sections = json::array();
  for (const auto& s : plan.sections) {
    sections.push_back({{"section_id", s.index},
                        {"title", s.title},
                        {"summary", s.summary},
                        {"assigned_evidence_ids", s.evidence_ids}});
  }
  return {{"document_type", plan.document_type}, {"blueprint", std::move(sections)}};
}

WritingPlan writing_plan_from_json(const json& j) {
  try {
    WritingPlan plan;
    plan.document_type = j.at("document_type").get<std::string>();
    for (const auto& sj : j.at("blueprint")) {
      PlanSection s;
      s.index = sj.value("section_id", plan.sections.size() + 1);
      s.title = sj.at("title").get<std::string>();
      s.summary = sj.value("summary", std::string{});
      s.evidence_ids = sj.at("assigned_evidence_ids").get<std::vector<std::string>>();
      plan.sections.push_back(std::move(s));
    }
    return plan;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed writing plan: ") + e.what());
  }
}

}  // namespace tabdoc::model

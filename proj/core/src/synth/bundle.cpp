#include "tabdoc/synth/bundle.hpp"

#include <set>

#include "tabdoc/error.hpp"
#include "tabdoc/io.hpp"
#include "tabdoc/synth/planning.hpp"
#include "tabdoc/synth/writing.hpp"

namespace tabdoc::synth {

namespace fs = std::filesystem;
using nlohmann::json;

void write_case_bundle(const fs::path& dir, const CaseBundle& b) {
  io::write_json(dir / kSchemaFile, model::to_json(*b.schema));
  io::write_json(dir / kTableFile, model::to_json(b.table));
  io::write_json(dir / kMatrixFile, model::to_json(b.matrix));
  io::write_json(dir / kEvidenceFile, model::to_json(b.evidence));
  io::write_json(dir / kPlanFile, model::to_json(b.plan));
  io::write_json(dir / kProvenanceFile, b.provenance);
  io::write_text(dir / kDocumentFile, b.document);
}

std::pair<std::shared_ptr<const model::Schema>, model::Table> load_case_table(const fs::path& dir) {
  auto schema = std::make_shared<const model::Schema>(model::schema_from_json(io::read_json(dir / kSchemaFile)));
  auto table = model::table_from_json(io::read_json(dir / kTableFile), schema);
  table.check_ground_truth();
  return {schema, std::move(table)};
}

CaseBundle load_case_bundle(const fs::path& dir) {
  auto [schema, table] = load_case_table(dir);
  return CaseBundle{schema,
                    std::move(table),
                    model::capability_matrix_from_json(io::read_json(dir / kMatrixFile)),
                    model::evidence_list_from_json(io::read_json(dir / kEvidenceFile)),
                    model::writing_plan_from_json(io::read_json(dir / kPlanFile)),
                    io::read_text(dir / kDocumentFile),
                    io::read_json(dir / kProvenanceFile)};
}

std::vector<Violation> validate_case(const fs::path& dir) {
  std::vector<Violation> out;
  std::optional<CaseBundle> loaded;
  try {
    loaded.emplace(load_case_bundle(dir));
  } catch (const std::exception& e) {
    out.push_back({"parse", e.what()});
    return out;
  }
  const CaseBundle& b = *loaded;

  if (!b.matrix.matches(b.table)) {
    out.push_back({"matrix", "capability matrix is " + std::to_string(b.matrix.rows()) + "x" +
                                 std::to_string(b.matrix.cols()) + ", table is " + std::to_string(b.table.rows()) +
                                 "x" + std::to_string(b.table.cols())});
  } else {
    for (const auto& ref : b.matrix.holes()) {
      out.push_back({"matrix", "unannotated cell (" + std::to_string(ref.row) + "," + std::to_string(ref.col) + ")"});
    }
    for (std::size_t r = 0; r < b.matrix.rows(); ++r) {
      for (std::size_t c = 0; c < b.matrix.cols(); ++c) {
        const auto& l = b.matrix.at(r, c);
        if (l && !l->is_refined()) {
          out.push_back({"matrix", "cell (" + std::to_string(r) + "," + std::to_string(c) + ") has coarse label " +
                                       l->to_string()});
        }
      }
    }
  }

  std::set<std::string> ids;
  for (const auto& item : b.evidence) {
    if (!ids.insert(item.id).second) out.push_back({"evidence", "duplicate evidence id " + item.id});
    if (item.fragments.empty()) out.push_back({"evidence", item.id + " has no fragments"});
    if (item.cell.row >= b.table.rows() || item.cell.col >= b.table.cols()) {
      out.push_back({"evidence", item.id + " points outside the table"});
      continue;
    }
    if (b.table.at(item.cell).is_null()) {
      out.push_back({"null_evidence", item.id + " is attached to a NULL cell"});
    }
  }

  std::set<std::pair<std::size_t, std::size_t>> covered;
  for (const auto& item : b.evidence) covered.emplace(item.cell.row, item.cell.col);
  for (std::size_t r = 0; r < b.table.rows(); ++r) {
    for (std::size_t c = 0; c < b.table.cols(); ++c) {
      if (!b.table.at(r, c).is_null() && !covered.count({r, c})) {
        out.push_back({"completeness", "cell (" + std::to_string(r) + "," + std::to_string(c) + ") has no evidence"});
      }
    }
  }

  for (const auto& s : b.plan.sections) {
    for (const auto& id : s.evidence_ids) {
      if (!ids.count(id)) out.push_back({"plan", "section " + std::to_string(s.index) + " cites unknown " + id});
    }
  }
  if (b.plan.sections.empty()) out.push_back({"plan", "plan has no sections"});
  for (const auto& id : check_plan_coverage(b.plan, b.evidence)) {
    out.push_back({"plan", id + " is not assigned to any section"});
  }

  for (const auto& id : missing_fragments(b.document, b.evidence)) {
    out.push_back({"completeness", id + " has a fragment missing from " + std::string(kDocumentFile)});
  }
  return out;
}

}  // namespace tabdoc::synth

#include <doctest.h>

#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/io.hpp"
#include "tabdoc/model/capability_matrix.hpp"
#include "tabdoc/model/evidence.hpp"
#include "tabdoc/model/missing_cells.hpp"
#include "tabdoc/model/normalize.hpp"
#include "tabdoc/model/schema.hpp"
#include "tabdoc/model/table.hpp"
#include "tabdoc/model/taxonomy.hpp"
#include "test_support.hpp"

using namespace tabdoc;
using namespace tabdoc::model;
using nlohmann::json;

namespace {

std::vector<std::optional<Category>> all_categories() {
  return {Category::TA, Category::RI, Category::DR, Category::EF, Category::CR, Category::empty};
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("taxonomy has 5 categories and 13 sub-capabilities with fixed parents") {
  CHECK(kCapabilityCategories.size() == 5);
  CHECK(kSubCapabilities.size() == 13);
  std::map<Category, int> per;
  for (auto s : kSubCapabilities) ++per[parent_category(s)];
  CHECK(per[Category::TA] == 3);
  CHECK(per[Category::RI] == 4);
  CHECK(per[Category::DR] == 2);
  CHECK(per[Category::EF] == 1);
  CHECK(per[Category::CR] == 3);
  CHECK(parent_category(SubCapability::missing_value_faithfulness) == Category::EF);
  CHECK(parent_category(SubCapability::constraint_based_resolution) == Category::CR);
}

TEST_CASE("label construction accepts exactly the 13 parent pairings across 6 categories") {
  int accepted = 0;
  for (const auto& cat : all_categories()) {
    for (auto sub : kSubCapabilities) {
      const bool valid = *cat != Category::empty && parent_category(sub) == *cat;
      if (valid) {
        CapabilityLabel l(*cat, sub);
        CHECK(l.is_refined());
        CHECK(CapabilityLabel::parse(l.to_string()) == l);
        ++accepted;
      } else {
        CHECK(code_of([&] { CapabilityLabel(*cat, sub); }) == Errc::invalid_argument);
      }
    }
    // Coarse form.
    CapabilityLabel coarse(*cat, std::nullopt);
    CHECK(coarse.is_refined() == (*cat == Category::empty));
    CHECK(CapabilityLabel::parse(coarse.to_string()) == coarse);
  }
  CHECK(accepted == 13);
}

TEST_CASE("label parsing") {
  CHECK(CapabilityLabel::parse("EMPTY").is_empty());
  CHECK(CapabilityLabel::parse("CR/constraint_based_resolution").sub() == SubCapability::constraint_based_resolution);
  CHECK(CapabilityLabel::parse("unit_transformation").category() == Category::TA);
  CHECK(CapabilityLabel::parse("ta").category() == Category::TA);
  CHECK(code_of([] { CapabilityLabel::parse("XX"); }) == Errc::parse_error);
  CHECK_THROWS_AS(CapabilityLabel::parse("TA/arithmetic_reasoning"), Error);
}

TEST_CASE("schema validation") {
  SUBCASE("duplicate names") {
    CHECK(code_of([] { Schema("x", {{"A"}, {"A"}}); }) == Errc::invalid_argument);
  }
  SUBCASE("key out of range") {
    CHECK(code_of([] { Schema("x", {{"A"}}, 3); }) == Errc::invalid_argument);
  }
  SUBCASE("enumeration needs allowed values") {
    AttributeSpec e{"Status", "", DataType::enumeration};
    CHECK(code_of([&] { Schema("x", {{"A"}, e}); }) == Errc::invalid_argument);
    e.constraints = {"in: open, closed"};
    Schema s("x", {{"A"}, e});
    CHECK(s.attribute(1).allowed_values() == std::vector<std::string>{"open", "closed"});
  }
  SUBCASE("cross constraint must reference attributes") {
    CHECK(code_of([] { Schema("x", {{"A"}}, 0, {{"A", CompareOp::ge, "B"}}); }) == Errc::invalid_argument);
  }
}

TEST_CASE("extraction view hides cross constraints and implicit rules") {
  auto schema = testing::patient_schema();
  const auto full = render_schema(*schema, SchemaView::full);
  const auto ext = render_schema(*schema, SchemaView::extraction);
  CHECK(full.find("Discharge_Date >= Admission_Date") != std::string::npos);
  CHECK(ext.find("Discharge_Date >= Admission_Date") == std::string::npos);
  CHECK(ext.find("Total_Cost_USD") != std::string::npos);

  Schema ruled("x", {{"A"}, {"B"}}, 0, {},
               {{"B", ResolutionRuleKind::latest_timestamp, std::nullopt, false},
                {"A", ResolutionRuleKind::max, std::nullopt, true}});
  const auto ext2 = render_schema(ruled, SchemaView::extraction);
  const auto full2 = render_schema(ruled, SchemaView::full);
  CHECK(ext2.find("- " + ruled.resolution_rules()[1].to_string()) != std::string::npos);
  CHECK(ext2.find("- " + ruled.resolution_rules()[0].to_string()) == std::string::npos);
  CHECK(full2.find("- " + ruled.resolution_rules()[0].to_string()) != std::string::npos);
}

TEST_CASE("schema JSON round trip") {
  auto schema = testing::patient_schema();
  CHECK(schema_from_json(to_json(*schema)) == *schema);
  CHECK(schema->constrained_columns() == std::vector<std::size_t>{1, 2});
}

TEST_CASE("table invariants") {
  auto schema = testing::patient_schema();
  CHECK(code_of([&] { Table(schema, {Tuple{{Cell{"a"}}}}); }) == Errc::invalid_argument);
  const auto t = testing::patient_table();
  CHECK(t.rows() == 4);
  CHECK(t.cols() == 4);
  CHECK(t.at(2, 2).is_null());
  CHECK(t.entity(0) == "Patient-07");
  CHECK_NOTHROW(t.check_ground_truth());

  auto tuples = t.tuples();
  tuples[1].cells[0].value = "Patient-07";
  CHECK(code_of([&] { Table::ground_truth(schema, tuples); }) == Errc::invalid_argument);
  tuples[1].cells[0].value.reset();
  CHECK(code_of([&] { Table::ground_truth(schema, tuples); }) == Errc::invalid_argument);
  CHECK(code_of([&] { Table::ground_truth(schema, {}); }) == Errc::invalid_argument);
}

TEST_CASE("table JSON and CSV round trips") {
  const auto t = testing::patient_table();
  CHECK(table_from_json(to_json(t), t.schema_ptr()) == t);

  json reordered = to_json(t);
  // Columns may come in any order.
  json cols = json::array({"Total_Cost_USD", "Patient", "Admission_Date", "Discharge_Date"});
  json rows = json::array();
  for (const auto& r : reordered["rows"]) rows.push_back(json::array({r[3], r[0], r[1], r[2]}));
  CHECK(table_from_json({{"columns", cols}, {"rows", rows}}, t.schema_ptr()) == t);

  const auto csv = table_from_csv("Patient,Admission_Date,Discharge_Date,Total_Cost_USD\n"
                                  "\"P, 1\",\"NULL\",,5\n",
                                  t.schema_ptr());
  CHECK(csv.at(0, 0).value == "P, 1");
  CHECK(csv.at(0, 1).value == "NULL");  // quoted keeps the literal
  CHECK(csv.at(0, 2).is_null());
  CHECK(code_of([&] { table_from_csv("A,B\n1,2\n", t.schema_ptr()); }) == Errc::schema_mismatch);
}

TEST_CASE("markdown rendering escapes pipes and newlines") {
  auto schema = std::make_shared<const Schema>("x", std::vector<AttributeSpec>{{"A"}, {"B"}});
  Table t(schema, {Tuple{{Cell{"a|b"}, Cell{"line1\nline2"}}}, Tuple{{Cell{"c\\d"}, Cell{}}}});
  const auto md = render_markdown(t);
  CHECK(md.find("a\\|b") != std::string::npos);
  CHECK(md.find("line1<br>line2") != std::string::npos);
  CHECK(md.find("c\\\\d") != std::string::npos);
  CHECK(md.find("| NULL |") != std::string::npos);
}

TEST_CASE("capability matrix") {
  CapabilityMatrix m(2, 3);
  CHECK(m.holes().size() == 6);
  CHECK_FALSE(m.complete());
  m.set({0, 0}, CapabilityLabel::empty());
  m.set({1, 2}, CapabilityLabel(Category::TA, std::nullopt));
  CHECK(m.holes().size() == 4);
  CHECK(m.holes().front() == CellRef{0, 1});
  CHECK(code_of([&] { m.set({2, 0}, CapabilityLabel::empty()); }) == Errc::dimension_mismatch);
  for (auto ref : m.holes()) m.set(ref, CapabilityLabel::empty());
  CHECK(m.complete());
  CHECK_FALSE(m.refined());
  m.set({1, 2}, CapabilityLabel(SubCapability::unit_transformation));
  CHECK(m.refined());
  CHECK(capability_matrix_from_json(to_json(m)) == m);

  CapabilityMatrix holes(1, 2);
  holes.set({0, 1}, CapabilityLabel::empty());
  CHECK(capability_matrix_from_json(to_json(holes)) == holes);
}

TEST_CASE("evidence pool checks and JSON") {
  const auto t = testing::patient_table();
  EvidenceItem a{"e1", {0, 3}, canonical_evidence("Patient-07", "Total_Cost_USD", "12450"),
                 SubCapability::arithmetic_reasoning, {"x", "y"}, std::nullopt};
  EvidenceItem b{"e2", {1, 1}, "c", std::nullopt, {"z"}, "ward log"};
  CHECK_NOTHROW(check_evidence_pool({a, b}, t));
  CHECK(evidence_list_from_json(to_json(std::vector<EvidenceItem>{a, b})) == std::vector<EvidenceItem>{a, b});
  auto dup = b;
  dup.id = "e1";
  CHECK(code_of([&] { check_evidence_pool({a, dup}, t); }) == Errc::invalid_argument);
  auto empty = b;
  empty.fragments.clear();
  CHECK(code_of([&] { check_evidence_pool({empty}, t); }) == Errc::invalid_argument);
  auto outside = b;
  outside.cell = {9, 0};
  CHECK(code_of([&] { check_evidence_pool({outside}, t); }) == Errc::invalid_argument);
  CHECK(a.canonical_text == "the attribute Total_Cost_USD of entity Patient-07 is 12450");
  CHECK(code_of([] { canonical_evidence("P", "A", std::nullopt); }) == Errc::invalid_argument);
}

TEST_CASE("writing plan JSON round trip") {
  WritingPlan p{"report", {{1, "One", "first", {"e1", "e2"}}, {2, "Two", "second", {"e3"}}}};
  CHECK(writing_plan_from_json(to_json(p)) == p);
}

TEST_CASE("token counting and whitespace collapsing") {
  CHECK(count_tokens("") == 0);
  CHECK(count_tokens("  one\ttwo\nthree  ") == 3);
  CHECK(collapse_whitespace("  a \n\t b  ") == "a b");
}

TEST_CASE("missing-cell injection is seeded and respects protected columns") {
  auto schema = std::make_shared<const Schema>(
      "x", std::vector<AttributeSpec>{{"K"}, {"A"}, {"B"}, {"C"}}, 0,
      std::vector<CrossConstraint>{{"B", CompareOp::ge, "C"}});
  std::vector<Tuple> rows;
  for (int r = 0; r < 10; ++r)
    rows.push_back(Tuple{{Cell{"k" + std::to_string(r)}, Cell{"a"}, Cell{"b"}, Cell{"c"}}});
  rows[3].cells[1].value.reset();
  const Table t(schema, rows);

  const auto candidates = removal_candidates(t);
  CHECK(candidates.size() == 9);  // column A minus the existing NULL
  for (const auto& c : candidates) CHECK(c.col == 1);

  const auto a = inject_missing_cells(t, 0.5, 42);
  const auto b = inject_missing_cells(t, 0.5, 42);
  CHECK(a.removed == b.removed);
  CHECK(a.table == b.table);
  CHECK(a.removed.size() == 4);
  CHECK(std::is_sorted(a.removed.begin(), a.removed.end()));
  for (const auto& ref : a.removed) CHECK(a.table.at(ref).is_null());
  std::size_t nulls = 0;
  for (std::size_t r = 0; r < a.table.rows(); ++r)
    for (std::size_t c = 0; c < a.table.cols(); ++c) nulls += a.table.at(r, c).is_null() ? 1 : 0;
  CHECK(nulls == 5);

  std::set<std::vector<CellRef>> distinct;
  for (std::uint64_t seed = 0; seed < 20; ++seed) distinct.insert(inject_missing_cells(t, 0.5, seed).removed);
  CHECK(distinct.size() > 1);

  CHECK(inject_missing_cells(t, 0.0, 1).removed.empty());
  CHECK(code_of([&] { inject_missing_cells(t, 1.0, 1); }) == Errc::invalid_argument);
  CHECK(code_of([&] { inject_missing_cells(t, -0.1, 1); }) == Errc::invalid_argument);
}

TEST_CASE("io writes atomically and hashes content") {
  testing::TempDir dir("io");
  io::write_json(dir / "a/b.json", json{{"k", 1}});
  CHECK(io::read_json(dir / "a/b.json") == json{{"k", 1}});
  CHECK(io::read_text(dir / "a/b.json") == "{\n  \"k\": 1\n}\n");
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK_THROWS_AS(io::read_text(dir / "missing"), Error);
}

TEST_CASE("missing-cell count on a 3x3 table follows the floor rule") {
  auto schema = std::make_shared<const Schema>("x", std::vector<AttributeSpec>{{"K"}, {"A"}, {"B"}});
  std::vector<Tuple> rows;
  for (int r = 0; r < 3; ++r) rows.push_back(Tuple{{Cell{"k" + std::to_string(r)}, Cell{"a"}, Cell{"b"}}});
  const Table t(schema, rows);
  CHECK(removal_candidates(t).size() == 6);
  const auto out = inject_missing_cells(t, 0.25, 1);
  REQUIRE(out.removed.size() == 1);
  CHECK(out.removed[0].col != 0);
  CHECK(inject_missing_cells(t, 0.0, 1).table == t);
}

TEST_CASE("canonical evidence contains its parts verbatim") {
  CHECK(canonical_evidence("Acme", "Revenue", "3480000") == "the attribute Revenue of entity Acme is 3480000");
  CHECK(canonical_evidence("Patient-07", "Discharge_Date", "2025-06-20") ==
        "the attribute Discharge_Date of entity Patient-07 is 2025-06-20");
}

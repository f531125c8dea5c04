#include <doctest.h>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/extract/extraction.hpp"
#include "tabdoc/io.hpp"
#include "tabdoc/llm/scripted_backend.hpp"
#include "test_support.hpp"

using namespace tabdoc;
using namespace tabdoc::extract;
using nlohmann::json;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::invalid_argument;
}

struct Harness {
  std::shared_ptr<llm::ScriptedBackend> backend;
  llm::Gateway gateway;
  llm::PromptLibrary prompts = llm::PromptLibrary::builtin();

  explicit Harness(llm::Transcript t)
      : backend(std::make_shared<llm::ScriptedBackend>(std::move(t))),
        gateway(backend, {}, [](auto) {}) {}
};

const char* kGood =
    "| Patient | Admission_Date | Discharge_Date | Total_Cost_USD |\n"
    "|---|---|---|---|\n"
    "| Patient-07 | 2024-03-02 | 2024-03-09 | 12450 |\n";

}  // namespace

TEST_CASE("markdown tables map reordered headers by loose name") {
  const auto schema = testing::patient_schema();
  const auto t = parse_markdown_table(
      "Here you go:\n\n"
      "| total cost (usd) | patient | Admission Date |\n"
      "| :--- | --- | ---: |\n"
      "| 12,450 | Patient-07 | 2024-03-02 |\n"
      "| --- | --- | --- |\n"
      "| NULL | Patient-12 |  |\n\n"
      "Done.",
      schema);
  REQUIRE(t.rows() == 2);
  CHECK(t.at(0, 0).value == "Patient-07");
  CHECK(t.at(0, 1).value == "2024-03-02");
  CHECK(t.at(0, 2).is_null());  // no header for it
  CHECK(t.at(0, 3).value == "12,450");
  CHECK(t.at(1, 3).is_null());
  CHECK(t.at(1, 1).is_null());
}

TEST_CASE("row width repairs are recorded") {
  const auto schema = testing::patient_schema();
  const auto parsed = parse_markdown_table_detailed(
      "| Patient | Admission_Date | Discharge_Date | Total_Cost_USD |\n"
      "|---|---|---|---|\n"
      "| A | 1 |\n"
      "| B | 1 | 2 | 3 | 4 |\n",
      schema);
  CHECK(parsed.table.rows() == 2);
  CHECK(parsed.table.at(0, 3).is_null());
  CHECK(parsed.table.at(1, 3).value == "3");
  CHECK(parsed.repairs.size() == 2);
}

TEST_CASE("escapes inside cells") {
  const auto schema = testing::patient_schema();
  const auto t = parse_markdown_table(
      "| Patient | Admission_Date | Discharge_Date | Total_Cost_USD |\n"
      "|---|---|---|---|\n"
      "| a\\|b | c\\\\d | x<br>y | 1 |\n",
      schema);
  CHECK(t.at(0, 0).value == "a|b");
  CHECK(t.at(0, 1).value == "c\\d");
  CHECK(t.at(0, 2).value == "x\ny");
}

TEST_CASE("tables that are not there") {
  const auto schema = testing::patient_schema();
  CHECK(code_of([&] { parse_markdown_table("no table at all", schema); }) == Errc::table_not_found);
  CHECK(code_of([&] { parse_markdown_table("| foo | bar |\n|---|---|\n| 1 | 2 |\n", schema); }) ==
        Errc::table_not_found);
}

TEST_CASE("markdown rendering parses back to the same table") {
  const auto t = testing::patient_table();
  CHECK(parse_markdown_table(model::render_markdown(t), t.schema_ptr()) == t);
}

TEST_CASE("structured rows") {
  const auto schema = testing::patient_schema();
  const auto p = parse_structured_rows(
      R"(```json
{"rows": [{"patient": "Patient-07", "Total_Cost_USD": 12450, "Discharge_Date": null}]}
```)",
      schema);
  REQUIRE(p.table.rows() == 1);
  CHECK(p.table.at(0, 0).value == "Patient-07");
  CHECK(p.table.at(0, 3).value == "12450");
  CHECK(p.table.at(0, 2).is_null());
  CHECK(p.table.at(0, 1).is_null());
  CHECK(code_of([&] { parse_structured_rows(R"({"table": []})", schema); }) == Errc::table_not_found);
}

TEST_CASE("extraction prompt uses the extraction view of the schema") {
  const auto schema = testing::patient_schema();
  const auto prompts = llm::PromptLibrary::builtin();
  const auto prompt = render_extraction_prompt("DOC BODY", *schema, OutputFormat::markdown_table, prompts);
  CHECK(prompt.find("DOC BODY") != std::string::npos);
  CHECK(prompt.find("Total_Cost_USD") != std::string::npos);
  CHECK(prompt.find("Discharge_Date >= Admission_Date") == std::string::npos);
}

TEST_CASE("unparseable replies are retried up to the limit") {
  const auto schema = testing::patient_schema();
  Harness ok({{{"", "sorry, no table", 1}, {"", kGood, 1}}, true});
  ExtractionConfig cfg{"cand"};
  const auto p = run_extraction("doc", schema, cfg, ok.gateway, ok.prompts);
  CHECK(p.attempts == 2);
  CHECK(p.table.rows() == 1);
  CHECK(p.raw_response == kGood);
  CHECK(p.model_name == "cand");

  Harness bad({{{"", "nothing", 10}}, false});
  cfg.max_retries = 2;
  try {
    run_extraction("doc", schema, cfg, bad.gateway, bad.prompts);
    FAIL("expected extraction failure");
  } catch (const ExtractionError& e) {
    CHECK(e.code() == Errc::extraction_failed);
    CHECK(e.raw_response() == "nothing");
  }
  CHECK(bad.backend->prompts().size() == 3);
}

TEST_CASE("sectioned extraction concatenates and de-duplicates on the key") {
  CHECK(split_sections("intro\n# A\nx\n# B\ny") == std::vector<std::string>{"intro", "# A\nx", "# B\ny"});
  CHECK(split_sections("# A\nx").size() == 1);

  const auto schema = testing::patient_schema();
  const std::string second =
      "| Patient | Admission_Date | Discharge_Date | Total_Cost_USD |\n|---|---|---|---|\n"
      "| patient-07 | | | 1 |\n| Patient-12 | 2024-04-11 | | |\n";
  Harness h({{{"first section", kGood}, {"second section", second}}, false});
  ExtractionConfig cfg{"cand", OutputFormat::markdown_table, Chunking::sectioned, 0};
  const auto p = run_extraction("# One\nfirst section\n# Two\nsecond section", schema, cfg, h.gateway, h.prompts);
  REQUIRE(p.table.rows() == 2);
  CHECK(p.table.at(0, 3).value == "12450");
  CHECK(p.table.at(1, 0).value == "Patient-12");
  CHECK(p.attempts == 2);
}

TEST_CASE("prediction JSON round trip") {
  const auto schema = testing::patient_schema();
  Harness h({{{"", kGood}}, false});
  auto p = run_extraction("doc", schema, ExtractionConfig{"cand"}, h.gateway, h.prompts);
  const auto j = to_json(p);
  CHECK_FALSE(j.contains("latency_ms"));
  const auto back = prediction_from_json(j, schema);
  CHECK(back.table == p.table);
  CHECK(back.raw_response == p.raw_response);
  CHECK(back.model_name == "cand");
  CHECK(back.usage == p.usage);
  CHECK(back.attempts == p.attempts);
  CHECK(to_json(back) == j);
}

TEST_CASE("format and chunking names") {
  CHECK(parse_output_format(to_string(OutputFormat::structured_rows)) == OutputFormat::structured_rows);
  CHECK(parse_chunking(to_string(Chunking::sectioned)) == Chunking::sectioned);
  CHECK_FALSE(parse_output_format("xml").has_value());
}

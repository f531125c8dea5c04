#include <doctest.h>

#include <filesystem>
#include <set>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/io.hpp"
#include "tabdoc/synth/annotation.hpp"
#include "tabdoc/synth/bundle.hpp"
#include "tabdoc/synth/evidence_stage.hpp"
#include "tabdoc/synth/judge.hpp"
#include "tabdoc/synth/pipeline.hpp"
#include "tabdoc/synth/planning.hpp"
#include "tabdoc/synth/render.hpp"
#include "tabdoc/synth/verdict.hpp"
#include "tabdoc/synth/writing.hpp"
#include "test_support.hpp"

using namespace tabdoc;
using namespace tabdoc::synth;
using model::CapabilityLabel;
using model::CellRef;
using model::EvidenceItem;
using nlohmann::json;
namespace fs = std::filesystem;

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

fs::path transcript(const char* name) { return testing::patient_dir() / name; }

std::vector<EvidenceItem> pool(std::initializer_list<const char*> ids) {
  std::vector<EvidenceItem> out;
  std::size_t col = 0;
  for (const char* id : ids) out.push_back({id, {0, col++}, "c", std::nullopt, {"f"}, std::nullopt});
  return out;
}

std::string file_text(const fs::path& p) { return io::read_text(p); }

}  // namespace

TEST_CASE("evidence verdict status follows the checks") {
  const auto pass = parse_evidence_verdict(
      R"({"status":"PASS","evaluation":{"value_correctness":true,"label_alignment":true,"schema_leakage":true}})");
  CHECK(pass.passed());
  CHECK(pass.feedback_text().empty());

  const auto liar = parse_evidence_verdict(
      R"({"status":"PASS","evaluation":{"value_correctness":false,"label_alignment":true,"schema_leakage":true},
          "feedback":{"fail_rationale":"wrong value","revise_suggest":"None"}})");
  CHECK_FALSE(liar.passed());
  CHECK(liar.checks().at("status_consistent") == false);
  CHECK(liar.fail_rationale() == "wrong value");
  CHECK_FALSE(liar.revise_suggestion().has_value());

  const auto missing = parse_evidence_verdict(R"({"status":"PASS","evaluation":{"value_correctness":true}})");
  CHECK_FALSE(missing.passed());
  REQUIRE(missing.fail_rationale().has_value());
  CHECK(missing.fail_rationale()->find("unparseable verdict") == 0);

  CHECK_FALSE(parse_evidence_verdict("looks fine to me").passed());
}

TEST_CASE("a FAIL always has a rationale") {
  const VerifierVerdict v({{"a", true}, {"b", false}});
  CHECK(v.status() == VerdictStatus::FAIL);
  CHECK(v.fail_rationale() == "failed checks: b");
  CHECK_THROWS_AS(VerifierVerdict({}), Error);
}

TEST_CASE("section verdict maps error types to checks") {
  const auto leak = parse_section_verdict(
      R"({"verification_status":"FAIL","errors":[{"type":"Schema Leakage","description":"names the column","suggestion":"rephrase"}]})");
  CHECK_FALSE(leak.passed());
  CHECK(leak.checks().at("schema_leakage") == false);
  CHECK(leak.checks().at("faithful_grounding") == true);
  CHECK(leak.fail_rationale() == "names the column");
  CHECK(leak.feedback_text().find("[Schema Leakage] names the column Fix: rephrase") != std::string::npos);

  const auto hallucination =
      parse_section_verdict(R"({"verification_status":"FAIL","errors":[{"type":"Hallucination","description":"x"}]})");
  CHECK(hallucination.checks().at("faithful_grounding") == false);

  CHECK(parse_section_verdict(R"({"verification_status":"PASS","errors":[]})").passed());
  CHECK_FALSE(parse_section_verdict(R"({"verification_status":"FAIL","errors":[]})").passed());
  CHECK_FALSE(parse_section_verdict(R"({"errors":[]})").passed());
}

TEST_CASE("seed matrix pre-labels NULL cells") {
  const auto t = testing::patient_table();
  const auto m = seed_matrix(t);
  CHECK(m.holes().size() == 15);
  CHECK(m.at(2, 2) == CapabilityLabel(model::SubCapability::missing_value_faithfulness));
}

TEST_CASE("annotation parsing fills only pending cells and tolerates loose names") {
  const auto t = testing::patient_table();
  const std::vector<CellRef> pending = {{0, 1}, {0, 2}, {1, 3}, {3, 0}};
  const auto m = parse_annotation(
      R"(Here: {"assignments": {"Patient-07": {"admission date": ["EMPTY"], "Discharge_Date": ["CR"]},
                                 "Patient-12": {"Total_Cost_USD": ["ZZ"], "Admission_Date": ["EMPTY"]},
                                 "Nobody": {"Patient": ["EMPTY"]}}})",
      t, pending);
  CHECK(m.at(0, 1) == CapabilityLabel::empty());
  CHECK(m.at(0, 2) == CapabilityLabel(model::Category::CR, std::nullopt));
  CHECK_FALSE(m.at(1, 3).has_value());  // unknown label
  CHECK_FALSE(m.at(1, 1).has_value());  // not pending
  CHECK_FALSE(m.at(3, 0).has_value());
  CHECK(check_annotation_completeness(m).size() == 16 - 2);
  CHECK(code_of([&] { parse_annotation("nothing", t, pending); }) == Errc::annotation_parse_error);
}

TEST_CASE("annotation falls back to EMPTY after exactly the configured rounds") {
  testing::ScriptedRig rig(transcript("annotation_fail_transcript.json"));
  const auto t = testing::patient_table();
  const auto out = annotation_loop(t, rig.agents(), LoopConfig{});
  CHECK(out.rounds == 3);
  CHECK(rig.backend().prompts().size() == 3);
  CHECK(out.problems.size() == 3);
  CHECK(out.fallback_cells.size() == 15);
  CHECK(out.matrix.complete());
  CHECK(out.matrix.at(0, 3) == CapabilityLabel::empty());
  CHECK(out.matrix.at(2, 2) == CapabilityLabel(model::SubCapability::missing_value_faithfulness));

  testing::ScriptedRig rig2(transcript("annotation_fail_transcript.json"));
  CHECK(annotation_loop(t, rig2.agents(), LoopConfig{5, 3, 3}).rounds == 5);
}

TEST_CASE("annotation re-prompts only for the holes") {
  llm::Transcript tr;
  tr.entries.push_back({"annotation assistant",
                        R"({"assignments":{"Patient-07":{"Patient":["EMPTY"],"Admission_Date":["EMPTY"],
                           "Discharge_Date":["EMPTY"],"Total_Cost_USD":["EMPTY"]}}})"});
  tr.entries.push_back({"annotation assistant",
                        R"({"assignments":{"Patient-12":{"Patient":["EMPTY"],"Admission_Date":["EMPTY"],
                           "Discharge_Date":["EMPTY"],"Total_Cost_USD":["EMPTY"]},
                           "Patient-21":{"Patient":["EMPTY"],"Admission_Date":["EMPTY"],"Total_Cost_USD":["EMPTY"]},
                           "Patient-33":{"Patient":["EMPTY"],"Admission_Date":["EMPTY"],
                           "Discharge_Date":["EMPTY"],"Total_Cost_USD":["EMPTY"]}}})"});
  testing::ScriptedRig rig(tr);
  const auto out = annotation_loop(testing::patient_table(), rig.agents(), LoopConfig{});
  CHECK(out.rounds == 2);
  CHECK(out.fallback_cells.empty());
  CHECK(out.matrix.complete());
}

TEST_CASE("refiner replies are validated") {
  const auto p = parse_refiner_reply(R"({"sub_capability":"unit_transformation","evidence":["  a ", ""]})");
  CHECK(p.sub == model::SubCapability::unit_transformation);
  CHECK(p.fragments == std::vector<std::string>{"a"});
  CHECK(code_of([] { parse_refiner_reply(R"({"sub_capability":"flying","evidence":["a"]})"); }) == Errc::parse_error);
  CHECK(code_of([] { parse_refiner_reply(R"({"sub_capability":"unit_transformation","evidence":[" "]})"); }) ==
        Errc::parse_error);
  CHECK(evidence_id(1) == "e1");
}

TEST_CASE("always-FAIL verifiers exhaust the evidence retries and flag the cells") {
  testing::ScriptedRig rig(transcript("always_fail_transcript.json"));
  const auto t = testing::patient_table();
  auto coarse = testing::patient_matrix();
  coarse.set({0, 2}, CapabilityLabel(model::Category::CR, std::nullopt));
  coarse.set({0, 3}, CapabilityLabel(model::Category::RI, std::nullopt));
  coarse.set({1, 3}, CapabilityLabel(model::Category::TA, std::nullopt));
  const auto out = evidence_loop(coarse, t, rig.agents(), LoopConfig{});
  CHECK(out.degraded_cells == std::vector<CellRef>{{0, 2}, {0, 3}, {1, 3}});
  REQUIRE(out.traces.size() == 3);
  for (const auto& tr : out.traces) {
    CHECK(tr.attempts == 3);
    CHECK(tr.calls == 6);
    CHECK_FALSE(tr.passed);
    CHECK(tr.verdicts.size() == 3);
  }
  CHECK(out.items.size() == 15);
  CHECK(out.matrix.refined());
  CHECK(rig.calls_containing("audit the generated evidence set") == 9);

  testing::ScriptedRig rig2(transcript("always_fail_transcript.json"));
  const auto two = evidence_loop(coarse, t, rig2.agents(), LoopConfig{3, 2, 3});
  for (const auto& tr : two.traces) CHECK(tr.attempts == 2);
}

TEST_CASE("plan parsing and coverage") {
  const auto items = pool({"e1", "e2", "e3"});
  const auto plan = parse_plan(
      R"({"document_type":"memo","blueprint":[{"section_id":7,"title":"A","summary":"s","assigned_evidence_ids":["e2","e1"]},
                                               {"section_id":3,"title":"B","summary":"t","assigned_evidence_ids":["e2"]}]})",
      items);
  CHECK(plan.sections.size() == 2);
  CHECK(plan.sections[0].index == 1);
  CHECK(plan.sections[1].index == 2);
  CHECK(check_plan_coverage(plan, items) == std::vector<std::string>{"e3"});
  CHECK(code_of([&] {
          parse_plan(R"({"document_type":"m","blueprint":[{"title":"A","assigned_evidence_ids":["e9"]}]})", items);
        }) == Errc::unknown_evidence_id);
  CHECK(code_of([&] { parse_plan(R"({"document_type":"m","blueprint":[]})", items); }) == Errc::planner_parse_error);
}

TEST_CASE("plan loop re-plans with the omissions and gives up at the bound") {
  const auto items = pool({"e1", "e2"});
  llm::Transcript tr;
  tr.entries.push_back({"document architect",
                        R"({"document_type":"m","blueprint":[{"title":"A","summary":"","assigned_evidence_ids":["e1"]}]})",
                        1});
  tr.entries.push_back(
      {"assign every one of them): e2",
       R"({"document_type":"m","blueprint":[{"title":"A","summary":"","assigned_evidence_ids":["e1","e2"]}]})", 1});
  testing::ScriptedRig rig(tr);
  const auto out = plan_loop(items, rig.agents(), LoopConfig{});
  CHECK(out.attempts == 2);
  CHECK(check_plan_coverage(out.plan, items).empty());

  llm::Transcript never;
  never.entries.push_back({"document architect",
                           R"({"document_type":"m","blueprint":[{"title":"A","summary":"","assigned_evidence_ids":["e1"]}]})",
                           10});
  testing::ScriptedRig rig2(never);
  CHECK(code_of([&] { plan_loop(items, rig2.agents(), LoopConfig{}); }) == Errc::plan_incomplete);
  CHECK(rig2.backend().prompts().size() == 3);
}

TEST_CASE("assembly, provenance and fragment coverage") {
  const auto doc = assemble_document({{"One", "Alpha beta."}, {"Two", "Gamma\n delta."}});
  CHECK(doc.assembled_text == "# One\nAlpha beta.\n\n# Two\nGamma\n delta.\n");
  CHECK(doc.token_count == 8);
  CHECK(code_of([] { assemble_document({}); }) == Errc::assembly_incomplete);
  CHECK(code_of([] { assemble_document({{"T", "  "}}); }) == Errc::assembly_incomplete);

  std::vector<EvidenceItem> ev = {{"e1", {0, 0}, "c", std::nullopt, {"Gamma delta."}, std::nullopt},
                                  {"e2", {0, 1}, "c", std::nullopt, {"alpha beta"}, std::nullopt}};
  CHECK(missing_fragments(doc.assembled_text, ev) == std::vector<std::string>{"e2"});

  const model::WritingPlan plan{"memo", {{1, "One", "", {"e1"}}, {2, "Two", "", {"e1", "e2"}}}};
  const auto prov = build_provenance(plan, ev);
  CHECK(prov["document_type"] == "memo");
  CHECK(prov["evidence"]["e1"]["sections"] == json::array({1, 2}));
  CHECK(prov["evidence"]["e2"]["cell"] == json::array({0, 1}));
}

TEST_CASE("judge scores") {
  const auto q = parse_judge_reply(R"({"lexical_richness":5,"logical_consistency":4,"textual_coherence":4})");
  CHECK(q.average() == doctest::Approx(13.0 / 3));
  CHECK(to_json(q)["average"] == 4.33);
  CHECK(code_of([] { parse_judge_reply(R"({"lexical_richness":6,"logical_consistency":4,"textual_coherence":4})"); }) ==
        Errc::judge_parse_error);
  CHECK(code_of([] { parse_judge_reply(R"({"lexical_richness":3,"logical_consistency":4})"); }) ==
        Errc::judge_parse_error);
  CHECK(code_of([] { parse_judge_reply(R"({"lexical_richness":3.5,"logical_consistency":4,"textual_coherence":4})"); }) ==
        Errc::judge_parse_error);
}

TEST_CASE("prompt fragments") {
  const auto t = testing::patient_table();
  CHECK(cell_name(t, {0, 2}) == "Patient-07 / Discharge_Date");
  auto m = testing::patient_matrix();
  m.clear({3, 3});
  const auto grid = render_label_grid(t, m);
  CHECK(grid.find("Patient-33") != std::string::npos);
  CHECK(grid.find("?") != std::string::npos);
}

TEST_CASE("full offline run produces a valid bundle and resumes without calls") {
  testing::TempDir dir("synth");
  const auto t = testing::patient_table();
  SynthesisOptions opts;
  opts.judge = true;
  std::vector<std::string> events;
  opts.on_event = [&](const json& e) { events.push_back(e.value("event", "")); };

  testing::ScriptedRig rig(transcript("synth_transcript.json"));
  const auto res = run_synthesis(t, rig.agents(), opts, dir.path());
  CHECK_FALSE(res.degraded);
  CHECK(res.bundle_written);
  CHECK(res.matrix == testing::patient_matrix());
  CHECK(res.evidence.size() == 15);
  CHECK(res.plan.sections.size() == 3);
  CHECK(res.missing_fragment_ids.empty());
  REQUIRE(res.quality.has_value());
  CHECK(res.quality->logical_consistency == 5);
  CHECK(res.document.token_count > 0);
  CHECK_FALSE(events.empty());
  CHECK(validate_case(dir.path()).empty());

  const auto bundle = load_case_bundle(dir.path());
  CHECK(bundle.table == t);
  CHECK(bundle.matrix == res.matrix);
  CHECK(bundle.document == res.document.assembled_text);
  const auto first_doc = file_text(dir / kDocumentFile);
  const auto first_matrix = file_text(dir / kMatrixFile);

  // Nothing left to ask: a strict empty transcript fails on any call.
  testing::ScriptedRig idle(llm::Transcript{{}, true});
  const auto again = run_synthesis(t, idle.agents(), opts, dir.path());
  CHECK(idle.backend().prompts().empty());
  CHECK_FALSE(again.resumed_stages.empty());
  CHECK(file_text(dir / kDocumentFile) == first_doc);
  CHECK(file_text(dir / kMatrixFile) == first_matrix);

  // A fresh run in another directory gives byte-identical files.
  testing::TempDir other("synth2");
  testing::ScriptedRig rig2(transcript("synth_transcript.json"));
  run_synthesis(t, rig2.agents(), opts, other.path());
  for (const char* f : {kSchemaFile, kTableFile, kMatrixFile, kEvidenceFile, kPlanFile, kDocumentFile, kProvenanceFile}) {
    CAPTURE(f);
    CHECK(file_text(dir / f) == file_text(other / f));
  }
}

TEST_CASE("degraded cases are quarantined unless allowed") {
  const auto t = testing::patient_table();
  testing::TempDir dir("degraded");
  testing::ScriptedRig rig(transcript("always_fail_transcript.json"));
  const auto res = run_synthesis(t, rig.agents(), SynthesisOptions{}, dir.path());
  CHECK(res.degraded);
  CHECK_FALSE(res.bundle_written);
  CHECK(res.degraded_cells.size() == 3);
  CHECK(res.degraded_sections == std::vector<std::size_t>{1, 2, 3});
  CHECK_FALSE(fs::exists(dir / kDocumentFile));
  CHECK(fs::exists(dir / kWorkDir / kReportFile));

  testing::TempDir allowed("allowed");
  testing::ScriptedRig rig2(transcript("always_fail_transcript.json"));
  SynthesisOptions opts;
  opts.allow_degraded = true;
  const auto res2 = run_synthesis(t, rig2.agents(), opts, allowed.path());
  CHECK(res2.bundle_written);
  CHECK(fs::exists(allowed / kDocumentFile));
}

TEST_CASE("validate_case reports broken bundles") {
  testing::TempDir dir("validate");
  testing::ScriptedRig rig(transcript("synth_transcript.json"));
  run_synthesis(testing::patient_table(), rig.agents(), SynthesisOptions{}, dir.path());
  REQUIRE(validate_case(dir.path()).empty());

  SUBCASE("missing fragment") {
    auto doc = file_text(dir / kDocumentFile);
    const std::string needle = "9.8 thousand USD";
    doc.replace(doc.find(needle), needle.size(), "9800 USD");
    io::write_text(dir / kDocumentFile, doc);
    const auto v = validate_case(dir.path());
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == "completeness");
    CHECK(v[0].detail.find("e8") != std::string::npos);
  }
  SUBCASE("matrix hole") {
    auto j = io::read_json(dir / kMatrixFile);
    j["labels"][1][1] = nullptr;
    io::write_json(dir / kMatrixFile, j);
    const auto v = validate_case(dir.path());
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].kind == "matrix");
  }
  SUBCASE("unparseable file") {
    io::write_text(dir / kPlanFile, "{");
    const auto v = validate_case(dir.path());
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == "parse");
  }
}

TEST_CASE("fusion pool completes supplied evidence") {
  const auto t = testing::patient_table();
  std::vector<EvidenceItem> supplied = {
      {"x1", {0, 3}, "c", model::SubCapability::arithmetic_reasoning, {"8000 plus 4450"}, std::nullopt}};
  const auto [matrix, items] = fusion_pool(t, supplied);
  CHECK(items.size() == 15);
  CHECK(matrix.refined());
  CHECK(matrix.at(0, 3) == CapabilityLabel(model::SubCapability::arithmetic_reasoning));
  CHECK(matrix.at(0, 0) == CapabilityLabel::empty());
  CHECK(matrix.at(2, 2) == CapabilityLabel(model::SubCapability::missing_value_faithfulness));
  std::set<std::string> ids;
  for (const auto& it : items) ids.insert(it.id);
  CHECK(ids.size() == 15);
  CHECK(ids.count("x1") == 1);

  supplied.push_back({"x2", {2, 2}, "c", std::nullopt, {"nothing"}, std::nullopt});
  CHECK(code_of([&] { fusion_pool(t, supplied); }) == Errc::invalid_argument);
}

TEST_CASE("loop bounds must be positive") {
  CHECK_THROWS_AS((LoopConfig{0, 3, 3}.validate()), Error);
  CHECK_NOTHROW(LoopConfig{}.validate());
}

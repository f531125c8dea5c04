#include "tabdoc/synth/pipeline.hpp"

#include <chrono>
#include <map>
#include <set>

#include "tabdoc/error.hpp"
#include "tabdoc/io.hpp"
#include "tabdoc/synth/annotation.hpp"
#include "tabdoc/synth/bundle.hpp"
#include "tabdoc/synth/evidence_stage.hpp"
#include "tabdoc/synth/planning.hpp"
#include "tabdoc/synth/writing.hpp"

namespace tabdoc::synth {

namespace fs = std::filesystem;
using model::CapabilityLabel;
using model::CapabilityMatrix;
using model::CellRef;
using model::EvidenceItem;
using nlohmann::json;

namespace {

json cells_to_json(const std::vector<CellRef>& cells) {
  json out = json::array();
  for (const auto& c : cells) out.push_back({c.row, c.col});
  return out;
}

std::vector<CellRef> cells_from_json(const json& j) {
  std::vector<CellRef> out;
  for (const auto& c : j) out.push_back({c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>()});
  return out;
}

json verdicts_to_json(const std::vector<VerifierVerdict>& verdicts) {
  json out = json::array();
  for (const auto& v : verdicts) out.push_back(to_json(v));
  return out;
}

std::string input_digest(const model::Table& table, const llm::AgentRuntime& agents, const SynthesisOptions& opt) {
  json j = {{"schema", model::to_json(table.schema())},
            {"table", model::to_json(table)},
            {"loops", to_json(opt.loops)},
            {"fusion", opt.fusion_evidence ? model::to_json(*opt.fusion_evidence) : json(nullptr)}};
  json prompts = json::object();
  for (const auto& name : agents.prompts().names()) {
    prompts[name] = {{"template", io::sha256_hex(agents.prompts().get(name))}, {"model", agents.model_for(name)}};
  }
  j["prompts"] = std::move(prompts);
  return io::sha256_hex(j.dump());
}

// Completed stages recorded in work/checkpoint.json.
class Checkpoint {
 public:
  Checkpoint(fs::path work, std::string digest) : work_(std::move(work)), digest_(std::move(digest)) {}

  // Loads the intact prefix of a previous run with the same inputs.
  void load() {
    const auto path = work_ / kCheckpointFile;
    if (!fs::exists(path)) return;
    json j;
    try {
      j = io::read_json(path);
    } catch (const Error&) {
      return;
    }
    if (j.value("input_digest", std::string{}) != digest_) return;
    for (const auto& s : j.value("stages", json::array())) {
      const auto artifact = work_ / s.value("artifact", std::string{});
      std::error_code ec;
      if (!fs::is_regular_file(artifact, ec)) break;
      if (io::sha256_hex(io::read_text(artifact)) != s.value("sha256", std::string{})) break;
      stages_.push_back({s.at("name").get<std::string>(), s.at("artifact").get<std::string>(),
                         s.at("sha256").get<std::string>()});
    }
  }

  std::optional<json> restored(const std::string& name) const {
    for (const auto& s : stages_) {
      if (s.name == name) return io::read_json(work_ / s.artifact);
    }
    return std::nullopt;
  }

  void complete(const std::string& name, const json& artifact) {
    const std::string file = name + ".json";
    io::write_json(work_ / file, artifact);
    std::erase_if(stages_, [&](const Stage& s) { return s.name == name; });
    stages_.push_back({name, file, io::sha256_hex(io::read_text(work_ / file))});
    save();
  }

  void reset() {
    stages_.clear();
    save();
  }

 private:
  struct Stage {
    std::string name;
    std::string artifact;
    std::string sha256;
  };

  void save() const {
    json stages = json::array();
    for (const auto& s : stages_) stages.push_back({{"name", s.name}, {"artifact", s.artifact}, {"sha256", s.sha256}});
    io::write_json(work_ / kCheckpointFile,
                   {{"input_digest", digest_},
                    {"last_completed_stage", stages_.empty() ? json(nullptr) : json(stages_.back().name)},
                    {"stages", std::move(stages)}});
  }

  fs::path work_;
  std::string digest_;
  std::vector<Stage> stages_;
};

class StageClock {
 public:
  StageClock(const SynthesisOptions& opt, std::string stage) : opt_(opt), stage_(std::move(stage)) {
    emit({{"event", "stage_start"}, {"stage", stage_}});
  }
  void done(bool resumed) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_);
    emit({{"event", "stage_end"}, {"stage", stage_}, {"resumed", resumed}, {"elapsed_ms", ms.count()}});
  }

 private:
  void emit(const json& j) const {
    if (opt_.on_event) opt_.on_event(j);
  }
  const SynthesisOptions& opt_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void remove_bundle_files(const fs::path& dir) {
  for (const char* f : {kSchemaFile, kTableFile, kMatrixFile, kEvidenceFile, kPlanFile, kDocumentFile,
                        kProvenanceFile, kQualityFile}) {
    std::error_code ec;
    fs::remove(dir / f, ec);
  }
}

}  // namespace

std::pair<CapabilityMatrix, std::vector<EvidenceItem>> fusion_pool(const model::Table& table,
                                                                   std::vector<EvidenceItem> supplied) {
  model::check_evidence_pool(supplied, table);
  CapabilityMatrix matrix = seed_matrix(table);
  std::set<std::string> used;
  for (const auto& item : supplied) {
    if (table.at(item.cell).is_null()) {
      throw Error(Errc::invalid_argument, "evidence " + item.id + " is attached to a NULL cell");
    }
    used.insert(item.id);
    const auto& current = matrix.at(item.cell);
    if (!current || (current->is_empty() && item.sub_capability)) {
      matrix.set(item.cell, item.sub_capability ? CapabilityLabel(*item.sub_capability) : CapabilityLabel::empty());
    }
  }
  std::size_t next = 1;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      if (table.at(r, c).is_null() || matrix.at(r, c)) continue;
      while (used.count(evidence_id(next))) ++next;
      const auto id = evidence_id(next++);
      used.insert(id);
      supplied.push_back(direct_evidence(table, {r, c}, id));
      matrix.set({r, c}, CapabilityLabel::empty());
    }
  }
  return {std::move(matrix), std::move(supplied)};
}

SynthesisResult run_synthesis(const model::Table& table, llm::AgentRuntime& agents, const SynthesisOptions& opt,
                              const fs::path& out_dir) {
  opt.loops.validate();
  table.check_ground_truth();
  const fs::path work = out_dir / kWorkDir;
  fs::create_directories(work);

  Checkpoint checkpoint(work, input_digest(table, agents, opt));
  if (opt.resume) {
    checkpoint.load();
  } else {
    checkpoint.reset();
  }

  SynthesisResult res;
  res.traces = json::object();

  // Steps 1-2, or the fusion shortcut.
  if (opt.fusion_evidence) {
    StageClock clock(opt, "fusion");
    std::tie(res.matrix, res.evidence) = fusion_pool(table, *opt.fusion_evidence);
    checkpoint.complete("evidence", {{"matrix", model::to_json(res.matrix)},
                                     {"evidence", model::to_json(res.evidence)},
                                     {"degraded_cells", json::array()},
                                     {"traces", json::array()}});
    clock.done(false);
  } else {
    CapabilityMatrix coarse;
    {
      StageClock clock(opt, "annotation");
      if (auto saved = checkpoint.restored("annotation")) {
        coarse = model::capability_matrix_from_json(saved->at("matrix"));
        res.annotation_rounds = saved->at("rounds").get<int>();
        res.annotation_fallback = cells_from_json(saved->at("fallback_cells"));
        res.resumed_stages.push_back("annotation");
        clock.done(true);
      } else {
        auto ann = annotation_loop(table, agents, opt.loops);
        coarse = ann.matrix;
        res.annotation_rounds = ann.rounds;
        res.annotation_fallback = ann.fallback_cells;
        checkpoint.complete("annotation", {{"matrix", model::to_json(ann.matrix)},
                                           {"rounds", ann.rounds},
                                           {"fallback_cells", cells_to_json(ann.fallback_cells)},
                                           {"problems", ann.problems}});
        clock.done(false);
      }
    }
    StageClock clock(opt, "evidence");
    if (auto saved = checkpoint.restored("evidence")) {
      res.matrix = model::capability_matrix_from_json(saved->at("matrix"));
      res.evidence = model::evidence_list_from_json(saved->at("evidence"));
      res.degraded_cells = cells_from_json(saved->at("degraded_cells"));
      res.traces["evidence"] = saved->at("traces");
      res.resumed_stages.push_back("evidence");
      clock.done(true);
    } else {
      auto ev = evidence_loop(coarse, table, agents, opt.loops);
      json traces = json::array();
      for (const auto& t : ev.traces) {
        traces.push_back({{"cell", {t.cell.row, t.cell.col}},
                          {"evidence_id", t.evidence_id},
                          {"attempts", t.attempts},
                          {"calls", t.calls},
                          {"passed", t.passed},
                          {"verdicts", verdicts_to_json(t.verdicts)}});
      }
      res.matrix = std::move(ev.matrix);
      res.evidence = std::move(ev.items);
      res.degraded_cells = std::move(ev.degraded_cells);
      res.traces["evidence"] = traces;
      checkpoint.complete("evidence", {{"matrix", model::to_json(res.matrix)},
                                       {"evidence", model::to_json(res.evidence)},
                                       {"degraded_cells", cells_to_json(res.degraded_cells)},
                                       {"traces", std::move(traces)}});
      clock.done(false);
    }
  }

  // Step 3.
  {
    StageClock clock(opt, "plan");
    if (auto saved = checkpoint.restored("plan")) {
      res.plan = model::writing_plan_from_json(saved->at("plan"));
      res.traces["plan"] = saved->at("trace");
      res.resumed_stages.push_back("plan");
      clock.done(true);
    } else {
      auto planned = plan_loop(res.evidence, agents, opt.loops);
      res.plan = std::move(planned.plan);
      res.traces["plan"] = {{"attempts", planned.attempts}, {"problems", planned.problems}};
      checkpoint.complete("plan", {{"plan", model::to_json(res.plan)}, {"trace", res.traces["plan"]}});
      clock.done(false);
    }
  }

  // Step 4.
  std::vector<model::DocumentSection> sections;
  {
    StageClock clock(opt, "writing");
    if (auto saved = checkpoint.restored("writing")) {
      for (const auto& s : saved->at("sections")) {
        sections.push_back({s.at("title").get<std::string>(), s.at("body").get<std::string>()});
      }
      res.degraded_sections = saved->at("degraded_sections").get<std::vector<std::size_t>>();
      res.traces["writing"] = saved->at("traces");
      res.resumed_stages.push_back("writing");
      clock.done(true);
    } else {
      auto written = writing_loop(res.plan, res.evidence, table, agents, opt.loops);
      json traces = json::array();
      for (const auto& t : written.traces) {
        traces.push_back({{"section", t.index},
                          {"attempts", t.attempts},
                          {"calls", t.calls},
                          {"passed", t.passed},
                          {"verdicts", verdicts_to_json(t.verdicts)}});
      }
      json js = json::array();
      for (const auto& s : written.sections) js.push_back({{"title", s.title}, {"body", s.body}});
      sections = std::move(written.sections);
      res.degraded_sections = std::move(written.degraded_sections);
      res.traces["writing"] = traces;
      checkpoint.complete("writing", {{"sections", std::move(js)},
                                      {"degraded_sections", res.degraded_sections},
                                      {"traces", std::move(traces)}});
      clock.done(false);
    }
  }

  // Step 5 and the deterministic completeness check.
  {
    StageClock clock(opt, "assembly");
    res.document = assemble_document(sections);
    res.missing_fragment_ids = missing_fragments(res.document.assembled_text, res.evidence);
    clock.done(false);
  }

  for (const auto& c : res.degraded_cells) {
    res.degradation.push_back("cell (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                              ") exhausted its evidence retries");
  }
  for (auto k : res.degraded_sections) {
    res.degradation.push_back("section " + std::to_string(k) + " exhausted its rewrite retries");
  }
  for (const auto& id : res.missing_fragment_ids) {
    res.degradation.push_back("evidence " + id + " is not verbatim in the assembled document");
  }
  res.degraded = !res.degradation.empty();

  res.provenance = build_provenance(res.plan, res.evidence);
  res.provenance["fusion"] = opt.fusion_evidence.has_value();
  res.provenance["degraded"] = res.degraded;
  if (res.degraded) res.provenance["degradation"] = res.degradation;

  if (opt.judge) {
    StageClock clock(opt, "judge");
    if (auto saved = checkpoint.restored("judge")) {
      res.quality = parse_judge_reply(saved->at("quality").dump());
      res.resumed_stages.push_back("judge");
      clock.done(true);
    } else {
      res.quality = judge_document(res.document, agents);
      checkpoint.complete("judge", {{"quality", to_json(*res.quality)}});
      clock.done(false);
    }
  }

  json report = {{"degraded", res.degraded},
                 {"degradation", res.degradation},
                 {"degraded_cells", cells_to_json(res.degraded_cells)},
                 {"degraded_sections", res.degraded_sections},
                 {"missing_fragment_ids", res.missing_fragment_ids},
                 {"annotation_rounds", res.annotation_rounds},
                 {"annotation_fallback", cells_to_json(res.annotation_fallback)},
                 {"evidence_items", res.evidence.size()},
                 {"sections", res.plan.sections.size()},
                 {"token_count", res.document.token_count},
                 {"traces", res.traces}};
  if (res.quality) report["quality"] = to_json(*res.quality);
  io::write_json(work / kReportFile, report);

  if (res.degraded && !opt.allow_degraded) {
    remove_bundle_files(out_dir);
    return res;
  }
  write_case_bundle(out_dir, CaseBundle{table.schema_ptr(), table, res.matrix, res.evidence, res.plan,
                                        res.document.assembled_text, res.provenance});
  if (res.quality) {
    io::write_json(out_dir / kQualityFile, to_json(*res.quality));
  } else {
    std::error_code ec;
    fs::remove(out_dir / kQualityFile, ec);
  }
  res.bundle_written = true;
  return res;
}

}  // namespace tabdoc::synth

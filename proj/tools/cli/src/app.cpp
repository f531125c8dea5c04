#include "tabdoc/cli/app.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tabdoc/cli/run_log.hpp"
#include "tabdoc/cli/worker_pool.hpp"
#include "tabdoc/error.hpp"
#include "tabdoc/eval/corpus_stats.hpp"
#include "tabdoc/eval/report.hpp"
#include "tabdoc/extract/extraction.hpp"
#include "tabdoc/io.hpp"
#include "tabdoc/llm/agent_runtime.hpp"
#include "tabdoc/llm/http_backend.hpp"
#include "tabdoc/llm/scripted_backend.hpp"
#include "tabdoc/model/normalize.hpp"
#include "tabdoc/synth/bundle.hpp"
#include "tabdoc/synth/judge.hpp"
#include "tabdoc/synth/pipeline.hpp"

namespace tabdoc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::shared_ptr<llm::ChatBackend> make_backend(const RunConfig& cfg, const Environment& env) {
  if (!cfg.llm.transcript.empty()) {
    auto transcript = llm::load_transcript(cfg.llm.transcript);
    transcript.strict = transcript.strict || cfg.llm.strict;
    return std::make_shared<llm::ScriptedBackend>(std::move(transcript));
  }
  if (cfg.llm.base_url.empty())
    throw Error(Errc::config_error, "no backend configured: set llm.transcript or llm.base_url");
  const auto key = env.find(cfg.llm.api_key_env);
  if (key == env.end() || key->second.empty())
    throw Error(Errc::config_error, "credential variable " + cfg.llm.api_key_env + " is not set");
  return std::make_shared<llm::HttpBackend>(llm::HttpBackendConfig{cfg.llm.base_url, key->second});
}

llm::GatewayOptions gateway_options(const RunConfig& cfg) {
  llm::GatewayOptions opt;
  opt.retry.max_attempts = cfg.llm.max_attempts;
  opt.retry.base_delay = std::chrono::milliseconds(cfg.llm.backoff_base_ms);
  opt.token_budget = cfg.llm.token_budget;
  opt.rate_limit_rpm = cfg.llm.rate_limit_rpm;
  return opt;
}

llm::PromptLibrary load_prompts(const RunConfig& cfg) {
  return cfg.prompt_dir.empty() ? llm::PromptLibrary::builtin() : llm::PromptLibrary::with_overrides(cfg.prompt_dir);
}

namespace {

struct Context {
  const Environment& env;
  std::ostream& out;
  std::ostream& err;
  ResolvedConfig resolved;
  std::mutex io_mu;

  const RunConfig& cfg() const { return resolved.config; }
  fs::path resolve_out(const std::string& p) const {
    const fs::path path(p);
    if (path.is_absolute() || cfg().output_root.empty() || cfg().output_root == ".") return path;
    return fs::path(cfg().output_root) / path;
  }
  void say(const std::string& line) {
    std::lock_guard lock(io_mu);
    out << line << '\n';
  }
  void warn(const std::string& line) {
    std::lock_guard lock(io_mu);
    err << line << '\n';
  }
};

/// Live model plumbing shared by the commands that call a backend.
struct Backend {
  std::shared_ptr<llm::ChatBackend> chat;
  llm::Gateway gateway;
  llm::PromptLibrary prompts;

  explicit Backend(const Context& ctx)
      : chat(make_backend(ctx.cfg(), ctx.env)), gateway(chat, gateway_options(ctx.cfg())), prompts(load_prompts(ctx.cfg())) {}

  std::string default_model(const RunConfig& cfg) const { return cfg.llm.model.empty() ? "default" : cfg.llm.model; }
};

json stats_json(const llm::GatewayStats& s) {
  return {{"calls", s.calls},
          {"attempts", s.attempts},
          {"retries", s.retries},
          {"failures", s.failures},
          {"prompt_tokens", s.usage.prompt_tokens},
          {"completion_tokens", s.usage.completion_tokens}};
}

fs::path sibling_log(const fs::path& out) { return fs::path(out.string() + ".log.jsonl"); }

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<std::string> out;
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  globfree(&g);
  std::sort(out.begin(), out.end());
  return out;
}

std::string describe(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& x) {
    return x.what();
  }
}

// ---- synth ----

struct SynthJob {
  std::string schema;
  std::string table;
  std::string evidence;
  std::string out;
};

struct SynthArgs {
  SynthJob job;
  std::string manifest;
  bool allow_degraded = false;
  bool judge = false;
  bool no_resume = false;
};

std::vector<SynthJob> load_manifest(const std::string& path) {
  const auto j = io::read_json(path);
  if (!j.is_array()) throw Error(Errc::config_error, "manifest must be an array of jobs");
  const fs::path base = fs::path(path).parent_path();
  auto rel = [&](const std::string& p) { return p.empty() || fs::path(p).is_absolute() ? p : (base / p).string(); };
  std::vector<SynthJob> jobs;
  for (const auto& e : j) {
    try {
      jobs.push_back({rel(e.at("schema").get<std::string>()), rel(e.at("table").get<std::string>()),
                      rel(e.value("evidence", std::string())), e.at("out").get<std::string>()});
    } catch (const json::exception& x) {
      throw Error(Errc::config_error, std::string("bad manifest entry: ") + x.what());
    }
  }
  return jobs;
}

void run_synth_job(Context& ctx, Backend& backend, const SynthArgs& args, const SynthJob& job) {
  const fs::path out = ctx.resolve_out(job.out);
  RunLog log(out / "run_log.jsonl");
  log.write({{"event", "synth_start"}, {"schema", job.schema}, {"table", job.table}, {"config", to_json(ctx.resolved)}});

  auto schema = std::make_shared<const model::Schema>(model::load_schema(job.schema));
  const auto table = model::load_table(job.table, schema);
  table.check_ground_truth();

  synth::SynthesisOptions opt;
  opt.loops = ctx.cfg().loops;
  opt.allow_degraded = args.allow_degraded;
  opt.judge = args.judge;
  opt.resume = !args.no_resume;
  if (!job.evidence.empty()) opt.fusion_evidence = model::evidence_list_from_json(io::read_json(job.evidence));
  opt.on_event = [&log](const json& e) { log.write(e); };

  llm::AgentRuntime agents(backend.gateway, backend.prompts, backend.default_model(ctx.cfg()), ctx.cfg().agent_models);
  std::map<std::string, std::size_t> calls;
  llm::Usage usage;
  std::mutex mu;
  agents.set_call_hook([&](std::string_view agent, const std::string&, const llm::ChatResponse& r) {
    std::lock_guard lock(mu);
    ++calls[std::string(agent)];
    usage += r.usage;
  });

  const auto res = synth::run_synthesis(table, agents, opt, out);
  log.write({{"event", "synth_end"},
             {"degraded", res.degraded},
             {"bundle_written", res.bundle_written},
             {"resumed_stages", res.resumed_stages},
             {"agent_calls", calls},
             {"prompt_tokens", usage.prompt_tokens},
             {"completion_tokens", usage.completion_tokens}});

  std::ostringstream line;
  line << out.string() << ": ";
  if (!res.degraded) {
    line << "ok (" << res.evidence.size() << " evidence items, " << res.plan.sections.size() << " sections, "
         << res.document.token_count << " tokens)";
  } else {
    line << (res.bundle_written ? "degraded, bundle written" : "degraded, bundle withheld");
    for (const auto& reason : res.degradation) line << "\n  " << reason;
  }
  ctx.say(line.str());
  if (!res.bundle_written)
    throw Error(Errc::invalid_argument, "case degraded; rerun with --allow-degraded to keep the bundle");
}

int cmd_synth(Context& ctx, const SynthArgs& args) {
  std::vector<SynthJob> jobs;
  if (!args.manifest.empty()) {
    jobs = load_manifest(args.manifest);
  } else {
    if (args.job.schema.empty() || args.job.table.empty() || args.job.out.empty())
      throw Error(Errc::config_error, "synth needs --schema, --table and --out (or --manifest)");
    jobs.push_back(args.job);
  }
  Backend backend(ctx);
  const auto errors = run_parallel(jobs.size(), ctx.cfg().parallelism,
                                   [&](std::size_t i) { run_synth_job(ctx, backend, args, jobs[i]); });
  int code = kExitOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i]) continue;
    ctx.warn("synth " + jobs[i].out + " failed: " + describe(errors[i]));
    code = kExitCaseFailure;
  }
  return code;
}

// ---- extract ----

struct ExtractArgs {
  std::string case_dir;
  std::string model;
  std::string format = "markdown_table";
  std::string chunking = "none";
  int max_retries = 1;
  std::string out;
};

int cmd_extract(Context& ctx, const ExtractArgs& args) {
  extract::ExtractionConfig cfg;
  cfg.candidate_model = args.model;
  cfg.max_retries = args.max_retries;
  const auto format = extract::parse_output_format(args.format);
  const auto chunking = extract::parse_chunking(args.chunking);
  if (!format) throw Error(Errc::config_error, "unknown --format " + args.format);
  if (!chunking) throw Error(Errc::config_error, "unknown --chunking " + args.chunking);
  if (args.max_retries < 0) throw Error(Errc::config_error, "--max-retries must be >= 0");
  cfg.output_format = *format;
  cfg.chunking = *chunking;

  Backend backend(ctx);
  const fs::path case_dir(args.case_dir);
  const fs::path out = ctx.resolve_out(args.out);
  RunLog log(sibling_log(out));
  try {
    auto schema = std::make_shared<const model::Schema>(model::load_schema(case_dir / synth::kSchemaFile));
    const auto document = io::read_text(case_dir / synth::kDocumentFile);
    log.write({{"event", "extract_start"}, {"case", case_dir.string()}, {"model", args.model},
               {"config", to_json(ctx.resolved)}});
    const auto pred = extract::run_extraction(document, schema, cfg, backend.gateway, backend.prompts);
    io::write_json(out, extract::to_json(pred));
    log.write({{"event", "extract_end"}, {"latency_ms", pred.latency_ms}, {"attempts", pred.attempts},
               {"rows", pred.table.rows()}, {"repairs", pred.repairs}, {"gateway", stats_json(backend.gateway.stats())}});
    ctx.say(out.string() + ": " + std::to_string(pred.table.rows()) + " rows in " + std::to_string(pred.attempts) +
            " attempt(s)");
    return kExitOk;
  } catch (const extract::ExtractionError& e) {
    log.write({{"event", "extract_failed"}, {"error", e.what()}, {"raw_response", e.raw_response()},
               {"gateway", stats_json(backend.gateway.stats())}});
    throw;
  }
}

// ---- eval ----

struct EvalArgs {
  std::string case_dir;
  std::string pred;
  std::string out;
  std::string model_name;
  std::string case_id;
};

std::pair<model::Table, std::string> load_prediction(const fs::path& path, std::shared_ptr<const model::Schema> schema) {
  const auto ext = path.extension().string();
  if (ext == ".md" || ext == ".markdown")
    return {extract::parse_markdown_table(io::read_text(path), schema), std::string()};
  if (ext == ".csv") return {model::table_from_csv(io::read_text(path), schema), std::string()};
  const auto j = io::read_json(path);
  if (j.is_object() && j.contains("raw_response")) {
    auto p = extract::prediction_from_json(j, schema);
    return {std::move(p.table), p.model_name};
  }
  return {model::table_from_json(j.contains("table") ? j.at("table") : j, schema), j.value("model", std::string())};
}

int cmd_eval(Context& ctx, const EvalArgs& args) {
  const fs::path case_dir(args.case_dir);
  auto [schema, gt] = synth::load_case_table(case_dir);
  const auto matrix = model::capability_matrix_from_json(io::read_json(case_dir / synth::kMatrixFile));
  auto [pred, pred_model] = load_prediction(args.pred, schema);

  eval::CaseReport report;
  report.case_id = args.case_id.empty() ? fs::absolute(case_dir).lexically_normal().filename().string() : args.case_id;
  if (report.case_id.empty()) report.case_id = fs::absolute(case_dir).lexically_normal().parent_path().filename().string();
  report.model = !args.model_name.empty() ? args.model_name : (pred_model.empty() ? "unknown" : pred_model);
  report.alignment_config = ctx.cfg().align;
  report.alignment = eval::align_rows(pred, gt, report.alignment_config);
  report.score = eval::score_cells(report.alignment, pred, gt, matrix);

  const fs::path out = ctx.resolve_out(args.out);
  io::write_json(out, eval::to_json(report, gt));
  const auto m = eval::compute_metrics(report.score.counts);
  RunLog log(sibling_log(out));
  log.write({{"event", "eval"}, {"case", report.case_id}, {"model", report.model}, {"metrics", eval::to_json(m)}});
  auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return std::string(buf);
  };
  ctx.say(report.case_id + " [" + report.model + "]: P=" + fmt(m.precision) + " R=" + fmt(m.recall) +
          " F1=" + fmt(m.f1));
  return kExitOk;
}

// ---- judge ----

struct JudgeArgs {
  std::string case_dir;
  std::string out;
};

int cmd_judge(Context& ctx, const JudgeArgs& args) {
  const fs::path case_dir(args.case_dir);
  model::SynthDocument doc;
  doc.assembled_text = io::read_text(case_dir / synth::kDocumentFile);
  doc.token_count = model::count_tokens(doc.assembled_text);
  Backend backend(ctx);
  llm::AgentRuntime agents(backend.gateway, backend.prompts, backend.default_model(ctx.cfg()), ctx.cfg().agent_models);
  const auto scores = synth::judge_document(doc, agents);
  const fs::path out = args.out.empty() ? case_dir / synth::kQualityFile : ctx.resolve_out(args.out);
  io::write_json(out, synth::to_json(scores));
  RunLog log(sibling_log(out));
  log.write({{"event", "judge"}, {"case", case_dir.string()}, {"model", agents.model_for("judge")},
             {"gateway", stats_json(backend.gateway.stats())}});
  std::ostringstream line;
  line << out.string() << ": LR=" << scores.lexical_richness << " LC=" << scores.logical_consistency
       << " TC=" << scores.textual_coherence;
  ctx.say(line.str());
  return kExitOk;
}

// ---- report ----

struct ReportArgs {
  std::string glob;
  std::string cases;
  std::string out;
};

eval::CaseShape case_shape(const fs::path& dir) {
  auto [schema, table] = synth::load_case_table(dir);
  eval::CaseShape shape{table.rows(), table.cols(), 0, std::nullopt};
  if (fs::exists(dir / synth::kDocumentFile)) shape.tokens = model::count_tokens(io::read_text(dir / synth::kDocumentFile));
  if (fs::exists(dir / synth::kMatrixFile))
    shape.matrix = model::capability_matrix_from_json(io::read_json(dir / synth::kMatrixFile));
  return shape;
}

int cmd_report(Context& ctx, const ReportArgs& args) {
  const fs::path out = ctx.resolve_out(args.out);
  fs::path json_out = out, md_out = out;
  json_out.replace_extension(".json");
  md_out.replace_extension(".md");

  std::vector<eval::CaseRecord> records;
  for (const auto& path : expand_glob(args.glob)) {
    if (fs::path(path) == json_out) continue;
    records.push_back(eval::case_record_from_json(io::read_json(path)));
  }
  if (records.empty()) throw Error(Errc::invalid_argument, "no evaluation reports match " + args.glob);

  const auto summaries = eval::summarize(records);
  auto j = eval::summary_json(summaries);
  auto md = eval::summary_markdown(summaries);
  if (!args.cases.empty()) {
    std::vector<eval::CaseShape> shapes;
    for (const auto& dir : expand_glob(args.cases))
      if (fs::is_directory(dir)) shapes.push_back(case_shape(dir));
    if (shapes.empty()) throw Error(Errc::invalid_argument, "no case directories match " + args.cases);
    const auto stats = eval::corpus_stats(shapes);
    j["corpus"] = eval::to_json(stats);
    md += "\n## Corpus\n\n" + eval::corpus_stats_markdown(stats);
  }
  io::write_json(json_out, j);
  io::write_text(md_out, md);
  ctx.say(json_out.string() + ", " + md_out.string() + ": " + std::to_string(records.size()) + " reports, " +
          std::to_string(summaries.size()) + " model(s)");
  return kExitOk;
}

// ---- validate ----

int cmd_validate(Context& ctx, const std::vector<std::string>& cases) {
  std::vector<std::vector<synth::Violation>> found(cases.size());
  const auto errors = run_parallel(cases.size(), ctx.cfg().parallelism,
                                   [&](std::size_t i) { found[i] = synth::validate_case(cases[i]); });
  int code = kExitOk;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (errors[i]) {
      ctx.warn(cases[i] + ": " + describe(errors[i]));
      code = kExitCaseFailure;
      continue;
    }
    if (found[i].empty()) {
      ctx.say(cases[i] + ": ok");
      continue;
    }
    code = kExitCaseFailure;
    for (const auto& v : found[i]) ctx.say(cases[i] + ": [" + v.kind + "] " + v.detail);
  }
  return code;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, const Environment& env, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"tabdoc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), env, out, err);
}

int dispatch(int argc, const char* const* argv, const Environment& env, std::ostream& out, std::ostream& err) {
  CLI::App app{"Table-to-document synthesis and document-to-table evaluation"};
  app.name("tabdoc");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flag_values;
  auto config_flag = [&](CLI::App* on, const std::string& name, const std::string& key, const std::string& help) {
    on->add_option_function<std::string>(name, [&flag_values, key](const std::string& v) { flag_values[key] = v; },
                                         help + " (" + key + ")");
  };

  app.add_option("--config", config_path, "JSON config file (default: $TABDOC_CONFIG)");
  app.add_option("--set", sets, "Override a config key, key=value; repeatable")->allow_extra_args(false);
  config_flag(&app, "--transcript", "llm.transcript", "Scripted transcript for offline runs");
  config_flag(&app, "--base-url", "llm.base_url", "Chat-completions endpoint");
  config_flag(&app, "--llm-model", "llm.model", "Default model for every agent");
  config_flag(&app, "--parallelism", "run.parallelism", "Concurrent cases");
  config_flag(&app, "--output-root", "run.output_root", "Base for relative output paths");
  config_flag(&app, "--prompt-dir", "run.prompt_dir", "Directory of prompt template overrides");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Synthesize a document bundle from a schema and table");
  synth->add_option("--schema", synth_args.job.schema, "Schema JSON")->check(CLI::ExistingFile);
  synth->add_option("--table", synth_args.job.table, "Ground-truth table (.json or .csv)")->check(CLI::ExistingFile);
  synth->add_option("--evidence", synth_args.job.evidence, "Evidence pool for the fusion shortcut")->check(CLI::ExistingFile);
  synth->add_option("--out", synth_args.job.out, "Output case directory");
  synth->add_option("--manifest", synth_args.manifest, "JSON array of {schema, table, evidence?, out} jobs")
      ->check(CLI::ExistingFile)
      ->excludes("--schema")
      ->excludes("--table")
      ->excludes("--out");
  synth->add_flag("--allow-degraded", synth_args.allow_degraded, "Write the bundle even when degraded");
  synth->add_flag("--judge", synth_args.judge, "Score the document with the quality judge");
  synth->add_flag("--no-resume", synth_args.no_resume, "Ignore checkpoints and rerun every stage");

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand("extract", "Run a candidate model on a case document");
  extract->add_option("--case", extract_args.case_dir, "Case directory")->required()->check(CLI::ExistingDirectory);
  extract->add_option("--model", extract_args.model, "Candidate model name")->required();
  extract->add_option("--format", extract_args.format, "markdown_table or structured_rows")->capture_default_str();
  extract->add_option("--chunking", extract_args.chunking, "none or sectioned")->capture_default_str();
  extract->add_option("--max-retries", extract_args.max_retries, "Extra attempts after unparseable output")
      ->capture_default_str();
  extract->add_option("--out", extract_args.out, "Prediction JSON")->required();

  EvalArgs eval_args;
  auto* evaluate = app.add_subcommand("eval", "Score a prediction against a case");
  evaluate->add_option("--case", eval_args.case_dir, "Case directory")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--pred", eval_args.pred, "Prediction (.json, .md or .csv)")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", eval_args.out, "Report JSON")->required();
  evaluate->add_option("--model-name", eval_args.model_name, "Model label for the report");
  evaluate->add_option("--case-id", eval_args.case_id, "Case label (default: directory name)");
  config_flag(evaluate, "--tau", "align.tau", "Row-alignment similarity threshold");
  config_flag(evaluate, "--sim", "align.similarity", "normalized_edit or token_jaccard");

  JudgeArgs judge_args;
  auto* judge = app.add_subcommand("judge", "Score a case document with the quality rubric");
  judge->add_option("--case", judge_args.case_dir, "Case directory")->required()->check(CLI::ExistingDirectory);
  judge->add_option("--out", judge_args.out, "Scores JSON (default: <case>/quality.json)");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Aggregate evaluation reports per model");
  report->add_option("--glob", report_args.glob, "Pattern matching report JSON files")->required();
  report->add_option("--cases", report_args.cases, "Pattern matching case directories for corpus statistics");
  report->add_option("--out", report_args.out, "Summary path; .json and .md are both written")->required();

  std::vector<std::string> validate_cases;
  auto* validate = app.add_subcommand("validate", "Audit case bundles");
  validate->add_option("--case", validate_cases, "Case directory; repeatable")
      ->required()
      ->allow_extra_args(false)
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  Context ctx{env, out, err, {}, {}};
  try {
    ConfigLayers layers;
    if (config_path.empty())
      if (auto it = env.find("TABDOC_CONFIG"); it != env.end()) config_path = it->second;
    if (!config_path.empty()) layers.file = load_config_file(config_path);
    layers.env = env_layer(env);
    layers.flags = flag_values;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw Error(Errc::config_error, "--set expects key=value, got " + s);
      const auto key = s.substr(0, eq);
      if (!is_config_key(key)) throw Error(Errc::config_error, "unknown config key: " + key);
      layers.flags[key] = s.substr(eq + 1);
    }
    ctx.resolved = resolve_config(layers);

    if (synth->parsed()) return cmd_synth(ctx, synth_args);
    if (extract->parsed()) return cmd_extract(ctx, extract_args);
    if (evaluate->parsed()) return cmd_eval(ctx, eval_args);
    if (judge->parsed()) return cmd_judge(ctx, judge_args);
    if (report->parsed()) return cmd_report(ctx, report_args);
    return cmd_validate(ctx, validate_cases);
  } catch (const Error& e) {
    if (e.code() == Errc::config_error) {
      err << e.what() << '\n';
      return kExitUsage;
    }
    err << e.what() << '\n';
    return kExitCaseFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCaseFailure;
  }
}

}  // namespace tabdoc::cli

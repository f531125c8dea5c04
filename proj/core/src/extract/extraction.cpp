#include "tabdoc/extract/extraction.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "tabdoc/llm/structured.hpp"
#include "tabdoc/model/normalize.hpp"

namespace tabdoc::extract {

using model::Cell;
using model::Schema;
using model::Table;
using model::Tuple;
using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(text.substr(start, end - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

// Cells of one pipe row, raw (escapes intact), outer pipes dropped.
std::vector<std::string> split_row(std::string_view line) {
  line = trim(line);
  if (!line.empty() && line.front() == '|') line.remove_prefix(1);
  std::vector<std::string> cells;
  std::string cur;
  bool trailing_pipe = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '\\' && i + 1 < line.size()) {
      cur += c;
      cur += line[++i];
      continue;
    }
    if (c == '|') {
      cells.emplace_back(trim(cur));
      cur.clear();
      trailing_pipe = true;
      continue;
    }
    trailing_pipe = false;
    cur += c;
  }
  if (!trailing_pipe || !trim(cur).empty()) cells.emplace_back(trim(cur));
  return cells;
}

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == '|' || s[i + 1] == '\\')) {
      out += s[++i];
    } else if (s.compare(i, 4, "<br>") == 0) {
      out += '\n';
      i += 3;
    } else {
      out += s[i];
    }
  }
  return out;
}

bool is_separator_cell(std::string_view c) {
  c = trim(c);
  if (c.empty()) return false;
  if (c.front() == ':') c.remove_prefix(1);
  if (!c.empty() && c.back() == ':') c.remove_suffix(1);
  return !c.empty() && c.find_first_not_of('-') == std::string_view::npos;
}

bool is_separator_row(const std::vector<std::string>& cells) {
  if (cells.empty()) return false;
  bool any = false;
  for (const auto& c : cells) {
    if (trim(c).empty()) continue;
    if (!is_separator_cell(c)) return false;
    any = true;
  }
  return any;
}

bool is_pipe_line(std::string_view line) { return line.find('|') != std::string_view::npos; }

std::optional<std::string> read_cell(std::string_view raw) {
  const auto t = trim(raw);
  if (t.empty()) return std::nullopt;
  if (t.size() == 4 && (t[0] | 0x20) == 'n' && (t[1] | 0x20) == 'u' && (t[2] | 0x20) == 'l' && (t[3] | 0x20) == 'l') {
    return std::nullopt;
  }
  return unescape(t);
}

// Schema column for each header (or nullopt); first header wins on a clash.
std::vector<std::optional<std::size_t>> map_headers(const std::vector<std::string>& headers, const Schema& schema) {
  std::map<std::string, std::size_t> by_loose;
  for (std::size_t j = 0; j < schema.attribute_count(); ++j) by_loose.emplace(model::loose_name(schema.attribute(j).name), j);
  std::set<std::size_t> taken;
  std::vector<std::optional<std::size_t>> out;
  for (const auto& h : headers) {
    const auto it = by_loose.find(model::loose_name(unescape(h)));
    if (it != by_loose.end() && taken.insert(it->second).second) {
      out.push_back(it->second);
    } else {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string_view to_string(OutputFormat f) noexcept {
  return f == OutputFormat::markdown_table ? "markdown_table" : "structured_rows";
}
std::string_view to_string(Chunking c) noexcept { return c == Chunking::none ? "none" : "sectioned"; }

std::optional<OutputFormat> parse_output_format(std::string_view text) {
  if (text == "markdown_table" || text == "markdown") return OutputFormat::markdown_table;
  if (text == "structured_rows" || text == "json") return OutputFormat::structured_rows;
  return std::nullopt;
}

std::optional<Chunking> parse_chunking(std::string_view text) {
  if (text == "none") return Chunking::none;
  if (text == "sectioned") return Chunking::sectioned;
  return std::nullopt;
}

ParsedTable parse_markdown_table_detailed(std::string_view text, std::shared_ptr<const Schema> schema) {
  const auto lines = split_lines(text);
  std::optional<std::size_t> header_line;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    if (is_pipe_line(lines[i]) && is_pipe_line(lines[i + 1]) && is_separator_row(split_row(lines[i + 1]))) {
      header_line = i;
      break;
    }
  }
  if (!header_line) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (!trim(lines[i]).empty() && trim(lines[i]).front() == '|') {
        header_line = i;
        break;
      }
    }
  }
  if (!header_line) throw Error(Errc::table_not_found, "no pipe table in model output");

  const auto headers = split_row(lines[*header_line]);
  const auto mapping = map_headers(headers, *schema);
  if (std::none_of(mapping.begin(), mapping.end(), [](const auto& m) { return m.has_value(); })) {
    throw Error(Errc::table_not_found, "no table header matches a schema attribute");
  }

  ParsedTable out{Table(schema, {}), {}};
  std::vector<Tuple> tuples;
  const std::size_t m = schema->attribute_count();
  for (std::size_t i = *header_line + 1; i < lines.size(); ++i) {
    if (!is_pipe_line(lines[i])) break;
    const auto cells = split_row(lines[i]);
    if (is_separator_row(cells)) continue;
    const std::size_t row = tuples.size();
    if (cells.size() < headers.size()) {
      out.repairs.push_back("row " + std::to_string(row) + ": " + std::to_string(cells.size()) +
                            " cells, padded with NULL to " + std::to_string(headers.size()));
    } else if (cells.size() > headers.size()) {
      out.repairs.push_back("row " + std::to_string(row) + ": " + std::to_string(cells.size()) +
                            " cells, truncated to " + std::to_string(headers.size()));
    }
    Tuple t{std::vector<Cell>(m)};
    for (std::size_t h = 0; h < headers.size() && h < cells.size(); ++h) {
      if (mapping[h]) t.cells[*mapping[h]].value = read_cell(cells[h]);
    }
    tuples.push_back(std::move(t));
  }
  out.table = Table(schema, std::move(tuples));
  return out;
}

Table parse_markdown_table(std::string_view text, std::shared_ptr<const Schema> schema) {
  return parse_markdown_table_detailed(text, std::move(schema)).table;
}

ParsedTable parse_structured_rows(std::string_view text, std::shared_ptr<const Schema> schema) {
  json j;
  try {
    j = llm::extract_structured(text);
  } catch (const StructuredParseError& e) {
    throw Error(Errc::table_not_found, e.what());
  }
  if (!j.contains("rows") || !j["rows"].is_array()) throw Error(Errc::table_not_found, "reply has no \"rows\" array");
  std::map<std::string, std::size_t> by_loose;
  for (std::size_t c = 0; c < schema->attribute_count(); ++c) {
    by_loose.emplace(model::loose_name(schema->attribute(c).name), c);
  }
  ParsedTable out{Table(schema, {}), {}};
  std::vector<Tuple> tuples;
  for (const auto& row : j["rows"]) {
    Tuple t{std::vector<Cell>(schema->attribute_count())};
    if (!row.is_object()) {
      out.repairs.push_back("row " + std::to_string(tuples.size()) + ": not an object, read as all-NULL");
      tuples.push_back(std::move(t));
      continue;
    }
    for (const auto& [key, value] : row.items()) {
      const auto it = by_loose.find(model::loose_name(key));
      if (it == by_loose.end()) {
        out.repairs.push_back("row " + std::to_string(tuples.size()) + ": ignored unknown key '" + key + "'");
        continue;
      }
      if (!value.is_null()) t.cells[it->second].value = read_cell(cell_text(value));
    }
    tuples.push_back(std::move(t));
  }
  out.table = Table(schema, std::move(tuples));
  return out;
}

std::string render_extraction_prompt(std::string_view document, const Schema& schema, OutputFormat format,
                                     const llm::PromptLibrary& prompts) {
  std::string directive;
  if (format == OutputFormat::markdown_table) {
    directive = "Output ONLY a markdown table with this header row:\n|";
    for (const auto& a : schema.attributes()) directive += " " + a.name + " |";
    directive += "\nWrite NULL for a missing value.";
  } else {
    directive = "Output a JSON object {\"rows\": [...]} holding one object per row; each object maps every "
                "attribute name to its value, or to null when the value is missing.";
  }
  return prompts.render("extractor", {{"entity_type", schema.entity_type()},
                                      {"target_schema", model::render_schema(schema, model::SchemaView::extraction)},
                                      {"document", std::string(document)},
                                      {"output_format_instructions", directive}});
}

std::vector<std::string> split_sections(std::string_view document) {
  std::vector<std::string> chunks;
  std::string cur;
  for (auto line : split_lines(document)) {
    if (line.substr(0, 2) == "# " && !trim(cur).empty()) {
      chunks.push_back(std::move(cur));
      cur.clear();
    }
    if (!cur.empty()) cur += '\n';
    cur += line;
  }
  if (!trim(cur).empty()) chunks.push_back(std::move(cur));
  return chunks;
}

ExtractionError::ExtractionError(const std::string& message, std::string raw_response)
    : Error(Errc::extraction_failed, message), raw_(std::move(raw_response)) {}

Prediction run_extraction(std::string_view document, std::shared_ptr<const Schema> schema,
                          const ExtractionConfig& cfg, llm::Gateway& gateway, const llm::PromptLibrary& prompts) {
  if (trim(document).empty()) throw Error(Errc::invalid_argument, "document is empty");
  if (cfg.max_retries < 0) throw Error(Errc::invalid_argument, "max_retries must be >= 0");
  const auto started = std::chrono::steady_clock::now();

  Prediction pred{Table(schema, {}), {}, cfg.candidate_model, 0, {}, cfg.output_format, cfg.chunking, {}, 0};
  const auto chunks = cfg.chunking == Chunking::sectioned ? split_sections(document)
                                                          : std::vector<std::string>{std::string(document)};
  std::vector<Tuple> rows;
  std::set<std::string> seen_keys;
  const auto key_col = schema->key_attribute_index();

  for (std::size_t k = 0; k < chunks.size(); ++k) {
    const auto prompt = render_extraction_prompt(chunks[k], *schema, cfg.output_format, prompts);
    const auto format = cfg.output_format == OutputFormat::structured_rows ? llm::ResponseFormat::structured_object
                                                                           : llm::ResponseFormat::free_text;
    std::optional<ParsedTable> parsed;
    std::string last_raw;
    std::string last_problem;
    for (int attempt = 0; attempt <= cfg.max_retries && !parsed; ++attempt) {
      ++pred.attempts;
      const auto reply = gateway.complete(llm::make_request(cfg.candidate_model, prompt, format));
      pred.usage += reply.usage;
      last_raw = reply.content;
      if (trim(reply.content).empty()) {
        last_problem = "empty response";
        continue;
      }
      try {
        parsed = cfg.output_format == OutputFormat::markdown_table
                     ? parse_markdown_table_detailed(reply.content, schema)
                     : parse_structured_rows(reply.content, schema);
      } catch (const Error& e) {
        if (e.code() != Errc::table_not_found) throw;
        last_problem = e.what();
      }
    }
    if (!parsed) {
      throw ExtractionError("no usable table after " + std::to_string(cfg.max_retries + 1) + " attempt(s)" +
                                (chunks.size() > 1 ? " on chunk " + std::to_string(k + 1) : std::string{}) + ": " +
                                last_problem,
                            last_raw);
    }
    if (!pred.raw_response.empty()) pred.raw_response += "\n\n";
    pred.raw_response += last_raw;
    for (auto& r : parsed->repairs) {
      pred.repairs.push_back(chunks.size() > 1 ? "chunk " + std::to_string(k + 1) + ", " + r : r);
    }
    for (const auto& t : parsed->table.tuples()) {
      const auto& key = t.cells[key_col].value;
      if (chunks.size() > 1 && key && !seen_keys.insert(model::normalize_cell(*key)).second) continue;
      rows.push_back(t);
    }
  }
  pred.table = Table(schema, std::move(rows));
  pred.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
  return pred;
}

json to_json(const Prediction& p) {
  return {{"model", p.model_name},
          {"raw_response", p.raw_response},
          {"table", model::to_json(p.table)},
          {"usage", {{"prompt_tokens", p.usage.prompt_tokens}, {"completion_tokens", p.usage.completion_tokens}}},
          {"output_format", to_string(p.output_format)},
          {"chunking", to_string(p.chunking)},
          {"repairs", p.repairs},
          {"attempts", p.attempts}};
}

Prediction prediction_from_json(const json& j, std::shared_ptr<const Schema> schema) {
  try {
    Prediction p{model::table_from_json(j.at("table"), schema), j.value("raw_response", std::string{}),
                 j.value("model", std::string{}), 0, {}, OutputFormat::markdown_table, Chunking::none, {}, 0};
    if (j.contains("usage")) {
      p.usage.prompt_tokens = j["usage"].value("prompt_tokens", std::size_t{0});
      p.usage.completion_tokens = j["usage"].value("completion_tokens", std::size_t{0});
    }
    p.output_format = parse_output_format(j.value("output_format", std::string("markdown_table")))
                          .value_or(OutputFormat::markdown_table);
    p.chunking = parse_chunking(j.value("chunking", std::string("none"))).value_or(Chunking::none);
    p.repairs = j.value("repairs", std::vector<std::string>{});
    p.attempts = j.value("attempts", 0);
    return p;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed prediction: ") + e.what());
  }
}

}  // namespace tabdoc::extract

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/llm/agent_runtime.hpp"
#include "tabdoc/model/schema.hpp"
#include "tabdoc/model/table.hpp"

namespace tabdoc::extract {

enum class OutputFormat { markdown_table, structured_rows };
enum class Chunking { none, sectioned };

std::string_view to_string(OutputFormat f) noexcept;
std::string_view to_string(Chunking c) noexcept;
std::optional<OutputFormat> parse_output_format(std::string_view text);
std::optional<Chunking> parse_chunking(std::string_view text);

struct ExtractionConfig {
  std::string candidate_model;
  OutputFormat output_format = OutputFormat::markdown_table;
  Chunking chunking = Chunking::none;
  int max_retries = 1;  // extra attempts after an unparseable reply
};

/// A table recovered from model output plus what had to be fixed on the way.
struct ParsedTable {
  model::Table table;
  std::vector<std::string> repairs;
};

/// First pipe table in `text` (header row followed by a dash separator row;
/// failing that, the first run of lines starting with '|'). Headers map to
/// attributes by loose name and may come in any order; attributes without a
/// header are all-NULL. Dash-only rows are skipped. Rows of the wrong width
/// are padded with NULL or truncated, and each fix is listed in `repairs`.
/// Empty cells and "NULL" read as NULL; "\|", "\\" and "<br>" are unescaped.
/// Throws table_not_found when there is no table or no header maps.
ParsedTable parse_markdown_table_detailed(std::string_view text, std::shared_ptr<const model::Schema> schema);
model::Table parse_markdown_table(std::string_view text, std::shared_ptr<const model::Schema> schema);

/// {"rows": [{attribute: value|null}, ...]}; keys map by loose name, missing
/// keys are NULL, numbers and booleans are kept as their JSON text.
/// Throws table_not_found when there is no rows array.
ParsedTable parse_structured_rows(std::string_view text, std::shared_ptr<const model::Schema> schema);

/// The extraction prompt: schema in extraction view (no cross constraints,
/// no implicit resolution rules), the document, and a format directive.
std::string render_extraction_prompt(std::string_view document, const model::Schema& schema,
                                     OutputFormat format, const llm::PromptLibrary& prompts);

/// Splits on level-1 "# " headers; text before the first header is its own
/// chunk when not blank.
std::vector<std::string> split_sections(std::string_view document);

struct Prediction {
  model::Table table;
  std::string raw_response;
  std::string model_name;
  long long latency_ms = 0;  // logged, not serialized
  llm::Usage usage;
  OutputFormat output_format = OutputFormat::markdown_table;
  Chunking chunking = Chunking::none;
  std::vector<std::string> repairs;
  int attempts = 0;
};

/// Raised when no attempt produced a usable table.
class ExtractionError : public Error {
 public:
  ExtractionError(const std::string& message, std::string raw_response);
  const std::string& raw_response() const noexcept { return raw_; }

 private:
  std::string raw_;
};

/// Runs the candidate model on (document, schema). Each chunk gets
/// 1 + max_retries attempts; an empty or unparseable reply uses one up.
/// Sectioned results are concatenated and de-duplicated on the normalized
/// key, first occurrence kept.
Prediction run_extraction(std::string_view document, std::shared_ptr<const model::Schema> schema,
                          const ExtractionConfig& cfg, llm::Gateway& gateway, const llm::PromptLibrary& prompts);

/// {"model", "raw_response", "table", "usage", "output_format", "chunking", "repairs", "attempts"}
nlohmann::json to_json(const Prediction& p);
Prediction prediction_from_json(const nlohmann::json& j, std::shared_ptr<const model::Schema> schema);

}  // namespace tabdoc::extract

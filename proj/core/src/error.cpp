#include "tabdoc/error.hpp"

namespace tabdoc {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::io_error: return "io_error";
    case Errc::parse_error: return "parse_error";
    case Errc::schema_mismatch: return "schema_mismatch";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::template_error: return "template_error";
    case Errc::transcript_mismatch: return "transcript_mismatch";
    case Errc::transport_error: return "transport_error";
    case Errc::auth_error: return "auth_error";
    case Errc::budget_exceeded: return "budget_exceeded";
    case Errc::annotation_parse_error: return "annotation_parse_error";
    case Errc::planner_parse_error: return "planner_parse_error";
    case Errc::unknown_evidence_id: return "unknown_evidence_id";
    case Errc::plan_incomplete: return "plan_incomplete";
    case Errc::writer_empty_output: return "writer_empty_output";
    case Errc::assembly_incomplete: return "assembly_incomplete";
    case Errc::judge_parse_error: return "judge_parse_error";
    case Errc::checkpoint_error: return "checkpoint_error";
    case Errc::extraction_failed: return "extraction_failed";
    case Errc::table_not_found: return "table_not_found";
    case Errc::config_error: return "config_error";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

StructuredParseError::StructuredParseError(std::size_t offset, const std::string& message)
    : Error(Errc::parse_error, message + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset) {}

TransportError::TransportError(int status, bool retryable, const std::string& message)
    : Error(Errc::transport_error, message), status_(status), retryable_(retryable) {}

}  // namespace tabdoc

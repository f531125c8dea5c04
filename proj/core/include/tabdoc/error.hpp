#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tabdoc {

enum class Errc {
  invalid_argument,
  io_error,
  parse_error,
  schema_mismatch,
  dimension_mismatch,
  template_error,
  // llm gateway
  transcript_mismatch,
  transport_error,
  auth_error,
  budget_exceeded,
  // synthesis
  annotation_parse_error,
  planner_parse_error,
  unknown_evidence_id,
  plan_incomplete,
  writer_empty_output,
  assembly_incomplete,
  judge_parse_error,
  checkpoint_error,
  // extraction
  extraction_failed,
  table_not_found,
  // command line
  config_error,
};

std::string_view to_string(Errc code) noexcept;

/// Base exception for every failure surfaced by the library. The code is the
/// stable, machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised when no structured object can be recovered from model output.
class StructuredParseError : public Error {
 public:
  StructuredParseError(std::size_t offset, const std::string& message);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Transport-level failure. `retryable` is false for failures that a retry
/// cannot fix (e.g. a 400 from the endpoint).
class TransportError : public Error {
 public:
  TransportError(int status, bool retryable, const std::string& message);

  int status() const noexcept { return status_; }
  bool retryable() const noexcept { return retryable_; }

 private:
  int status_;
  bool retryable_;
};

}  // namespace tabdoc

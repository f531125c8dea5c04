#pragma once

#include <nlohmann/json.hpp>

namespace tabdoc::synth {

/// Retry bounds for the synthesis loops. All must be >= 1.
struct LoopConfig {
  int annotation_rounds = 3;
  int evidence_retries = 3;
  int section_retries = 3;

  void validate() const;  // throws invalid_argument
};

nlohmann::json to_json(const LoopConfig& cfg);

}  // namespace tabdoc::synth

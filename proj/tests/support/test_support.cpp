#include "test_support.hpp"

#include <atomic>
#include <chrono>
#include <random>

#include "tabdoc/llm/gateway.hpp"

namespace tabdoc::testing {

namespace fs = std::filesystem;

fs::path fixture_dir() { return TABDOC_FIXTURE_DIR; }
fs::path patient_dir() { return fixture_dir() / "patient_stays"; }

std::shared_ptr<const model::Schema> patient_schema() {
  return std::make_shared<const model::Schema>(model::load_schema(patient_dir() / "schema.json"));
}

model::Table patient_table() { return model::load_table(patient_dir() / "table.csv", patient_schema()); }

TempDir::TempDir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("tabdoc_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

ScriptedRig::ScriptedRig(llm::Transcript transcript)
    : backend_(std::make_shared<llm::ScriptedBackend>(std::move(transcript))),
      prompts_(llm::PromptLibrary::builtin()) {
  llm::GatewayOptions opt;
  opt.retry.base_delay = std::chrono::milliseconds(0);
  gateway_ = std::make_unique<llm::Gateway>(backend_, opt, [](std::chrono::milliseconds) {});
  agents_ = std::make_unique<llm::AgentRuntime>(*gateway_, prompts_, "scripted");
}

ScriptedRig::ScriptedRig(const fs::path& transcript_file) : ScriptedRig(llm::load_transcript(transcript_file)) {}

std::size_t ScriptedRig::calls_containing(const std::string& needle) const {
  std::size_t n = 0;
  for (const auto& p : backend_->prompts()) n += p.find(needle) != std::string::npos ? 1 : 0;
  return n;
}

model::CapabilityMatrix patient_matrix() {
  using model::CapabilityLabel;
  using model::SubCapability;
  model::CapabilityMatrix m(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) m.set({r, c}, CapabilityLabel::empty());
  m.set({0, 2}, CapabilityLabel(SubCapability::constraint_based_resolution));
  m.set({0, 3}, CapabilityLabel(SubCapability::arithmetic_reasoning));
  m.set({1, 3}, CapabilityLabel(SubCapability::unit_transformation));
  m.set({2, 2}, CapabilityLabel(SubCapability::missing_value_faithfulness));
  return m;
}

}  // namespace tabdoc::testing

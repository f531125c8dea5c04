#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>

#include <nlohmann/json.hpp>

namespace tabdoc::cli {

/// Append-only JSON-lines log. Each record gets a UTC "ts" field; timestamps
/// live here and nowhere in the artifacts. Thread-safe.
class RunLog {
 public:
  RunLog() = default;  // discards records
  explicit RunLog(const std::filesystem::path& path);

  void write(nlohmann::json record);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mu_;
};

}  // namespace tabdoc::cli

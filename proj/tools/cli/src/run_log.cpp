#include "tabdoc/cli/run_log.hpp"

#include <chrono>
#include <ctime>

#include "tabdoc/error.hpp"

namespace tabdoc::cli {

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  const auto n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + n, sizeof buf - n, ".%03dZ", static_cast<int>(ms));
  return buf;
}

}  // namespace

RunLog::RunLog(const std::filesystem::path& path) : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::app);
  if (!out_) throw Error(Errc::io_error, "cannot open run log " + path.string());
}

void RunLog::write(nlohmann::json record) {
  std::lock_guard lock(mu_);
  if (!out_.is_open()) return;
  record["ts"] = utc_now();
  out_ << record.dump() << '\n';
  out_.flush();
}

}  // namespace tabdoc::cli

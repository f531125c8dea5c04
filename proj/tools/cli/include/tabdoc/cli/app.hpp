#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "tabdoc/cli/config.hpp"
#include "tabdoc/llm/chat.hpp"
#include "tabdoc/llm/gateway.hpp"
#include "tabdoc/llm/prompt_library.hpp"

namespace tabdoc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCaseFailure = 1;
inline constexpr int kExitUsage = 2;

/// Scripted backend when llm.transcript is set, else the HTTP backend with
/// the secret read from the variable named by llm.api_key_env. Throws
/// config_error when neither is usable.
std::shared_ptr<llm::ChatBackend> make_backend(const RunConfig& cfg, const Environment& env);
llm::GatewayOptions gateway_options(const RunConfig& cfg);
llm::PromptLibrary load_prompts(const RunConfig& cfg);

/// Entry point behind the binary. `args` excludes the program name.
/// Exit codes: 0 success, 1 any case failure, 2 usage or config error.
int dispatch(const std::vector<std::string>& args, const Environment& env, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, const Environment& env, std::ostream& out, std::ostream& err);

}  // namespace tabdoc::cli

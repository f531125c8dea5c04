#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "tabdoc/llm/chat.hpp"
#include "tabdoc/llm/gateway.hpp"
#include "tabdoc/llm/prompt_library.hpp"

namespace tabdoc::llm {

/// What an agent step needs to talk to a model: the shared gateway, the
/// prompt templates, and which model each agent uses.
class AgentRuntime {
 public:
  /// Observer invoked after every call with (agent, rendered prompt, reply).
  using CallHook = std::function<void(std::string_view, const std::string&, const ChatResponse&)>;

  AgentRuntime(Gateway& gateway, const PromptLibrary& prompts, std::string default_model,
               std::map<std::string, std::string, std::less<>> agent_models = {});

  /// Model configured for `agent`, falling back to the default.
  const std::string& model_for(std::string_view agent) const;

  /// Renders template `agent` with `vars` and sends it as one user turn.
  ChatResponse ask(std::string_view agent, const TemplateVars& vars,
                   ResponseFormat format = ResponseFormat::free_text);

  void set_call_hook(CallHook hook) { hook_ = std::move(hook); }
  const PromptLibrary& prompts() const noexcept { return prompts_; }
  Gateway& gateway() noexcept { return gateway_; }

 private:
  Gateway& gateway_;
  const PromptLibrary& prompts_;
  std::string default_model_;
  std::map<std::string, std::string, std::less<>> agent_models_;
  CallHook hook_;
};

}  // namespace tabdoc::llm

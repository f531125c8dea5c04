#include "tabdoc/llm/agent_runtime.hpp"

namespace tabdoc::llm {

AgentRuntime::AgentRuntime(Gateway& gateway, const PromptLibrary& prompts, std::string default_model,
                           std::map<std::string, std::string, std::less<>> agent_models)
    : gateway_(gateway),
      prompts_(prompts),
      default_model_(std::move(default_model)),
      agent_models_(std::move(agent_models)) {}

const std::string& AgentRuntime::model_for(std::string_view agent) const {
  const auto it = agent_models_.find(agent);
  return it != agent_models_.end() && !it->second.empty() ? it->second : default_model_;
}

ChatResponse AgentRuntime::ask(std::string_view agent, const TemplateVars& vars, ResponseFormat format) {
  std::string prompt = prompts_.render(agent, vars);
  ChatResponse reply = gateway_.complete(make_request(model_for(agent), prompt, format));
  if (hook_) hook_(agent, prompt, reply);
  return reply;
}

}  // namespace tabdoc::llm

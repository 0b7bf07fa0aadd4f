#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "mapcs/agent.hpp"
#include "mapcs/translator.hpp"

namespace mapcs::net {

/// An HTTP(S) service: full URL of the call, credential and request timeout.
struct Endpoint {
  std::string url;
  std::string api_key;
  std::chrono::milliseconds timeout{20'000};
};

/// Value of an environment variable, or empty.
std::string env_or_empty(const char* name);

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // starts with '/'
};
/// Throws std::invalid_argument for URLs without an http(s) scheme.
SplitUrl split_url(std::string_view url);

/// Chat-completions style backend: the rendered role prompt as the system
/// message, the participant's latest line as the user message, and
/// choices[0].message.content as the reply. Failures raise BackendError.
class ChatCompletionsBackend final : public AgentBackend {
 public:
  ChatCompletionsBackend(Endpoint endpoint, std::string model, PromptTemplates prompts, double temperature = 0.7);
  std::string generate(const PromptContext& ctx) override;

 private:
  Endpoint endpoint_;
  std::string model_;
  PromptTemplates prompts_;
  double temperature_;
};

/// Translation API in the v2 "translate" shape: {"q", "target", "format"} in,
/// data.translations[0].translatedText out. Failures raise TranslationError.
class CloudTranslator final : public Translator {
 public:
  explicit CloudTranslator(Endpoint endpoint);
  std::string translate(std::string_view text, Language target) const override;

 private:
  Endpoint endpoint_;
};

}  // namespace mapcs::net

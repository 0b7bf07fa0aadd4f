#include "mapcs/net/adapters.hpp"

#include <httplib.h>

#include <cstdlib>

#include <nlohmann/json.hpp>

namespace mapcs::net {

using nlohmann::json;

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

SplitUrl split_url(std::string_view url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) throw std::invalid_argument("URL needs a scheme: " + std::string(url));
  auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw std::invalid_argument("unsupported URL scheme: " + std::string(url));
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string_view::npos) return {std::string(url), "/"};
  return {std::string(url.substr(0, path_start)), std::string(url.substr(path_start))};
}

namespace {

httplib::Client client_for(const SplitUrl& u, std::chrono::milliseconds timeout) {
  httplib::Client cli(u.origin);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());
  return cli;
}

std::string append_query(const std::string& path, const std::string& key, const std::string& value) {
  return path + (path.find('?') == std::string::npos ? "?" : "&") + key + "=" + httplib::detail::encode_query_param(value);
}

}  // namespace

ChatCompletionsBackend::ChatCompletionsBackend(Endpoint endpoint, std::string model, PromptTemplates prompts,
                                               double temperature)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), prompts_(std::move(prompts)), temperature_(temperature) {
  split_url(endpoint_.url);
}

std::string ChatCompletionsBackend::generate(const PromptContext& ctx) {
  auto u = split_url(endpoint_.url);
  auto cli = client_for(u, endpoint_.timeout);
  std::string user = ctx.latest_human.empty() ? "(The game has started. Send your first message.)" : ctx.latest_human;
  json body = {{"model", model_},
               {"temperature", temperature_},
               {"messages", json::array({{{"role", "system"}, {"content", prompts_.render(ctx)}},
                                         {{"role", "user"}, {"content", user}}})}};
  httplib::Headers headers;
  if (!endpoint_.api_key.empty()) headers.emplace("Authorization", "Bearer " + endpoint_.api_key);
  auto res = cli.Post(u.path, headers, body.dump(), "application/json");
  if (!res) throw BackendError("chat backend unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) throw BackendError("chat backend returned HTTP " + std::to_string(res->status));
  auto reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw BackendError("chat backend returned invalid JSON");
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw BackendError("chat backend reply has no choices[0].message.content");
  }
}

CloudTranslator::CloudTranslator(Endpoint endpoint) : endpoint_(std::move(endpoint)) { split_url(endpoint_.url); }

std::string CloudTranslator::translate(std::string_view text, Language target) const {
  if (target == Language::undecided) throw TranslationError("translation target must be English or Spanish");
  auto u = split_url(endpoint_.url);
  auto cli = client_for(u, endpoint_.timeout);
  std::string path = endpoint_.api_key.empty() ? u.path : append_query(u.path, "key", endpoint_.api_key);
  json body = {{"q", std::string(text)}, {"target", target == Language::english ? "en" : "es"}, {"format", "text"}};
  auto res = cli.Post(path, body.dump(), "application/json");
  if (!res) throw TranslationError("translator unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) throw TranslationError("translator returned HTTP " + std::to_string(res->status));
  auto reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw TranslationError("translator returned invalid JSON");
  try {
    return reply.at("data").at("translations").at(0).at("translatedText").get<std::string>();
  } catch (const json::exception&) {
    throw TranslationError("translator reply has no data.translations[0].translatedText");
  }
}

}  // namespace mapcs::net

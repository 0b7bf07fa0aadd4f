// mapcs-server: HTTP + WebSocket session service.
#include <csignal>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "mapcs/net/adapters.hpp"
#include "mapcs/net/http_server.hpp"
#include "mapcs/simulate.hpp"

#ifndef MAPCS_DEFAULT_RESOURCE_DIR
#define MAPCS_DEFAULT_RESOURCE_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace mapcs;

namespace {

mapcs::net::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mapcs-server: session service for the map task"};

  net::HttpServerOptions http;
  std::string data_dir = "mapcs-data";
  std::string resources = MAPCS_DEFAULT_RESOURCE_DIR;
  if (const char* env = std::getenv("MAPCS_RESOURCES"); env && *env) resources = env;
  std::string conditions = "all";
  std::uint64_t seed = 0;
  std::string backend = "scripted";
  std::string translator = "phrase-table";
  std::string questionnaire = "once";
  std::string backend_url = "https://api.openai.com/v1/chat/completions";
  std::string backend_model = "gpt-4o-mini";
  std::string translator_url = "https://translation.googleapis.com/language/translate/v2";
  int timeout_ms = 20'000;
  std::string static_dir;
  std::string log_level = "info";

  app.add_option("--port", http.port, "Listen port (0 picks a free one)")->capture_default_str();
  app.add_option("--address", http.address, "Listen address")->capture_default_str();
  app.add_option("--data-dir", data_dir, "Event logs and index")->capture_default_str();
  app.add_option("--resources", resources, "Resource directory")->capture_default_str();
  app.add_option("--conditions", conditions, "Conditions 'auto' cycles through, comma-separated, or 'all'")
      ->capture_default_str();
  app.add_option("--seed", seed, "Master seed for per-session seeds")->capture_default_str();
  app.add_option("--backend", backend, "scripted | external")
      ->capture_default_str()
      ->check(CLI::IsMember({"scripted", "external"}));
  app.add_option("--translator", translator, "phrase-table | external")
      ->capture_default_str()
      ->check(CLI::IsMember({"phrase-table", "external"}));
  app.add_option("--questionnaire", questionnaire, "once | per_game")
      ->capture_default_str()
      ->check(CLI::IsMember({"once", "per_game"}));
  app.add_option("--backend-url", backend_url, "Chat-completions endpoint (key: MAPCS_BACKEND_API_KEY)")
      ->capture_default_str();
  app.add_option("--backend-model", backend_model, "Model name sent to the backend")->capture_default_str();
  app.add_option("--translator-url", translator_url, "Translation endpoint (key: MAPCS_TRANSLATOR_API_KEY)")
      ->capture_default_str();
  app.add_option("--timeout-ms", timeout_ms, "Timeout for external calls")->capture_default_str();
  app.add_option("--static-dir", static_dir, "Built web client to serve at /");
  app.add_option("--workers", http.worker_threads, "Threads for service calls")->capture_default_str();
  app.add_option("--log-level", log_level, "trace | debug | info | warn | error")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    ServiceConfig cfg;
    cfg.conditions = parse_condition_list(conditions);
    cfg.seed = seed;
    cfg.questionnaire_mode = *parse_questionnaire_mode(questionnaire);
    cfg.token_secret = net::env_or_empty("MAPCS_TOKEN_SECRET");

    auto res = load_scripted_resources(resources, derive_seed(seed, "bot"));
    std::chrono::milliseconds timeout{timeout_ms};
    if (backend == "external") {
      std::string key = net::env_or_empty("MAPCS_BACKEND_API_KEY");
      if (key.empty()) spdlog::warn("MAPCS_BACKEND_API_KEY is not set");
      res.backend = std::make_shared<net::ChatCompletionsBackend>(net::Endpoint{backend_url, key, timeout},
                                                                  backend_model,
                                                                  PromptTemplates::load(fs::path(resources) / "prompts"));
    }
    if (translator == "external") {
      std::string key = net::env_or_empty("MAPCS_TRANSLATOR_API_KEY");
      if (key.empty()) spdlog::warn("MAPCS_TRANSLATOR_API_KEY is not set");
      res.translator = std::make_shared<net::CloudTranslator>(net::Endpoint{translator_url, key, timeout});
    }

    FileSessionStore store(data_dir);
    SystemClock clock;
    SessionService service(res, cfg, store, clock);
    http.static_dir = static_dir;
    net::HttpServer server(service, http);
    unsigned short port = server.start();
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    spdlog::info("listening on http://{}:{} ({} conditions, backend {}, translator {})", http.address, port,
                 cfg.conditions.size(), backend, translator);
    server.wait();
    g_server = nullptr;
    spdlog::info("stopped");
  } catch (const std::exception& e) {
    std::cerr << "mapcs-server: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

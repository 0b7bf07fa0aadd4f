#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>

#include "mapcs/service.hpp"

namespace mapcs::net {

struct HttpServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8080;  // 0 picks a free port
  std::filesystem::path static_dir;  // built client assets; empty disables static serving
  int io_threads = 1;
  int worker_threads = 2;  // service calls (bot turns may wait on a backend)
  std::chrono::milliseconds tick_interval{1000};
};

/// HTTP + WebSocket front end for a SessionService.
///
///   POST /api/sessions   {"condition": "auto" | spec, "seed": n}  -> 201 {"session_id", "token", ...}
///   GET  /api/export     [?condition=a,b]                          -> JSON Lines dataset
///   GET  /healthz                                                  -> {"status": "ok"}
///   GET  /ws             WebSocket; first frame must be a join with the session token
///   GET  /*              static files from static_dir
class HttpServer {
 public:
  HttpServer(SessionService& service, HttpServerOptions opts);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and starts serving on background threads. Returns the bound port.
  unsigned short start();
  void stop();
  /// Blocks until stop() is called (from another thread or a signal).
  void wait();

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

/// MIME type by file extension; application/octet-stream when unknown.
std::string mime_type(const std::filesystem::path& p);

/// Resolves a request target under `root`, or an empty path when it escapes
/// the root or does not name a regular file. "/" maps to index.html.
std::filesystem::path resolve_static(const std::filesystem::path& root, std::string_view target);

}  // namespace mapcs::net

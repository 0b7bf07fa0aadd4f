#include "mapcs/net/http_server.hpp"

#include <spdlog/spdlog.h>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <condition_variable>
#include <deque>
#include <fstream>
#include <sstream>
#include <thread>

#include "mapcs/dataset.hpp"

namespace mapcs::net {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

std::string mime_type(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
  if (ext == ".css") return "text/css; charset=utf-8";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".woff2") return "font/woff2";
  if (ext == ".txt") return "text/plain; charset=utf-8";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

std::filesystem::path resolve_static(const std::filesystem::path& root, std::string_view target) {
  if (root.empty()) return {};
  auto q = target.find('?');
  std::string path(target.substr(0, q));
  if (path.empty() || path.front() != '/') return {};
  if (path.back() == '/') path += "index.html";
  std::filesystem::path rel;
  std::stringstream parts(path.substr(1));
  std::string seg;
  while (std::getline(parts, seg, '/')) {
    if (seg.empty() || seg == ".") continue;
    if (seg == ".." || seg.find('\\') != std::string::npos || seg.find('\0') != std::string::npos) return {};
    rel /= seg;
  }
  auto full = root / rel;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(full, ec)) return {};
  return full;
}

namespace {

std::string query_param(std::string_view target, std::string_view key) {
  auto q = target.find('?');
  if (q == std::string_view::npos) return {};
  std::string_view rest = target.substr(q + 1);
  while (!rest.empty()) {
    auto amp = rest.find('&');
    auto pair = rest.substr(0, amp);
    auto eq = pair.find('=');
    if (pair.substr(0, eq) == key) return eq == std::string_view::npos ? std::string() : std::string(pair.substr(eq + 1));
    if (amp == std::string_view::npos) break;
    rest = rest.substr(amp + 1);
  }
  return {};
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

using Response = http::response<http::string_body>;

Response make_response(http::status status, std::string body, const std::string& type, unsigned version, bool keep) {
  Response res{status, version};
  res.set(http::field::server, "mapcs");
  res.set(http::field::content_type, type);
  res.keep_alive(keep);
  res.body() = std::move(body);
  res.prepare_payload();
  return res;
}

Response json_response(http::status status, const json& j, unsigned version, bool keep) {
  return make_response(status, j.dump(), "application/json", version, keep);
}

}  // namespace

struct HttpServer::Impl {
  SessionService& service;
  HttpServerOptions opts;
  asio::io_context ioc;
  asio::thread_pool workers;
  tcp::acceptor acceptor{ioc};
  asio::steady_timer ticker{ioc};
  std::vector<std::thread> threads;
  std::mutex stop_mu;
  std::condition_variable stop_cv;
  bool stopped = false;
  std::optional<asio::executor_work_guard<asio::io_context::executor_type>> guard;

  Impl(SessionService& s, HttpServerOptions o)
      : service(s), opts(std::move(o)), workers(static_cast<std::size_t>(std::max(1, opts.worker_threads))) {}

  Response route(const http::request<http::string_body>& req);
  void accept();
  void schedule_tick();
};

namespace {

/// One WebSocket connection bound to one session after its join frame.
class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, SessionService& service, asio::thread_pool& workers)
      : ws_(std::move(socket)), service_(service), work_strand_(asio::make_strand(workers)) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

  /// Thread-safe: queues a text frame for sending.
  void send(std::string text) {
    asio::post(ws_.get_executor(), [self = shared_from_this(), text = std::move(text)]() mutable {
      self->queue_.push_back(std::move(text));
      if (self->queue_.size() == 1) self->write_next();
    });
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    read();
  }

  void read() { ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this())); }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;  // closed or failed
    std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    asio::post(work_strand_, [self = shared_from_this(), text = std::move(text)] { self->dispatch(text); });
    read();
  }

  void dispatch(const std::string& text) {
    WireMessage in;
    try {
      in = WireMessage::parse(text);
    } catch (const ProtocolError& e) {
      send(error_message(session_id_, e.code(), e.what()).dump());
      return;
    }
    if (session_id_.empty()) {
      if (in.type != MessageType::join) {
        send(error_message(in.session_id, "not_joined", "send a join frame first").dump());
        return;
      }
      std::string token = in.payload.value("token", std::string());
      if (in.session_id.empty() || token != service_.token_for(in.session_id)) {
        send(error_message(in.session_id, "bad_token", "unknown session or wrong token").dump());
        return;
      }
      session_id_ = in.session_id;
      std::weak_ptr<WsSession> weak = shared_from_this();
      service_.set_listener(session_id_, [weak](const WireMessage& m) {
        if (auto self = weak.lock()) self->send(m.dump());
      });
    }
    if (in.session_id.empty()) in.session_id = session_id_;
    if (in.session_id != session_id_) {
      send(error_message(in.session_id, "wrong_session", "this connection belongs to " + session_id_).dump());
      return;
    }
    // Replies reach the client through the listener, in seq order. Errors
    // that never enter the session's stream come back directly.
    for (const auto& m : service_.handle(in)) {
      if (m.seq == 0) send(m.dump());
    }
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()), beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return;
    queue_.pop_front();
    if (!queue_.empty()) write_next();
  }

  websocket::stream<beast::tcp_stream> ws_;
  SessionService& service_;
  asio::strand<asio::thread_pool::executor_type> work_strand_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  std::string session_id_;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, HttpServer::Impl& server) : stream_(std::move(socket)), server_(server) {}

  void run() {
    asio::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::read, shared_from_this()));
  }

 private:
  void read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      beast::error_code ignored;
      stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
      return;
    }
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      std::string_view target(req_.target().data(), req_.target().size());
      if (target.substr(0, target.find('?')) == "/ws") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), server_.service, server_.workers)->run(std::move(req_));
        return;
      }
    }
    // Service calls can block; answer from the worker pool.
    asio::post(server_.workers, [self = shared_from_this()] {
      auto res = std::make_shared<Response>(self->server_.route(self->req_));
      asio::post(self->stream_.get_executor(), [self, res] { self->write(res); });
    });
  }

  void write(std::shared_ptr<Response> res) {
    bool close = !res->keep_alive();
    http::async_write(stream_, *res, [self = shared_from_this(), res, close](beast::error_code ec, std::size_t) {
      if (ec) return;
      if (close) {
        beast::error_code ignored;
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        return;
      }
      self->read();
    });
  }

  beast::tcp_stream stream_;
  HttpServer::Impl& server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

}  // namespace

Response HttpServer::Impl::route(const http::request<http::string_body>& req) {
  std::string_view target(req.target().data(), req.target().size());
  std::string_view path = target.substr(0, target.find('?'));
  unsigned v = req.version();
  bool keep = req.keep_alive();
  try {
    if (path == "/healthz") {
      return json_response(http::status::ok, {{"status", "ok"}}, v, keep);
    }
    if (path == "/api/sessions") {
      if (req.method() != http::verb::post) {
        return json_response(http::status::method_not_allowed, {{"error", "use POST"}}, v, keep);
      }
      json body = req.body().empty() ? json::object() : json::parse(req.body(), nullptr, false);
      if (body.is_discarded() || !body.is_object()) {
        return json_response(http::status::bad_request, {{"error", "body must be a JSON object"}}, v, keep);
      }
      std::string condition = body.value("condition", std::string("auto"));
      std::optional<std::uint64_t> seed;
      if (auto s = body.find("seed"); s != body.end()) {
        if (!s->is_number_unsigned()) {
          return json_response(http::status::bad_request, {{"error", "'seed' must be a non-negative integer"}}, v, keep);
        }
        seed = s->get<std::uint64_t>();
      }
      try {
        auto created = service.create_session(condition, seed);
        return json_response(http::status::created,
                             {{"session_id", created.session_id},
                              {"token", created.token},
                              {"condition", created.condition.name()},
                              {"ws_path", "/ws"}},
                             v, keep);
      } catch (const RequestError& e) {
        return json_response(http::status::bad_request, {{"error", e.what()}}, v, keep);
      }
    }
    if (path == "/api/export") {
      if (req.method() != http::verb::get) {
        return json_response(http::status::method_not_allowed, {{"error", "use GET"}}, v, keep);
      }
      ExportFilter filter;
      filter.conditions = split_csv(query_param(target, "condition"));
      std::ostringstream out;
      ReplayContext ctx{*service.resources().analyzer, *service.resources().maps};
      export_dataset(service.store(), ctx, out, filter);
      return make_response(http::status::ok, out.str(), "application/x-ndjson", v, keep);
    }
    if (req.method() == http::verb::get || req.method() == http::verb::head) {
      auto file = resolve_static(opts.static_dir, target);
      if (!file.empty()) {
        std::ifstream in(file, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return make_response(http::status::ok, ss.str(), mime_type(file), v, keep);
      }
    }
    return json_response(http::status::not_found, {{"error", "not found"}}, v, keep);
  } catch (const std::exception& e) {
    spdlog::error("{} {}: {}", std::string(req.method_string()), std::string(target), e.what());
    return json_response(http::status::internal_server_error, {{"error", e.what()}}, v, keep);
  }
}

void HttpServer::Impl::accept() {
  acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec) {
      if (ec != asio::error::operation_aborted) spdlog::warn("accept failed: {}", ec.message());
      if (!acceptor.is_open()) return;
    } else {
      std::make_shared<HttpSession>(std::move(socket), *this)->run();
    }
    accept();
  });
}

void HttpServer::Impl::schedule_tick() {
  ticker.expires_after(opts.tick_interval);
  ticker.async_wait([this](beast::error_code ec) {
    if (ec) return;
    asio::post(workers, [this] { service.tick_all(); });
    schedule_tick();
  });
}

HttpServer::HttpServer(SessionService& service, HttpServerOptions opts)
    : impl_(std::make_unique<Impl>(service, std::move(opts))) {}

HttpServer::~HttpServer() { stop(); }

unsigned short HttpServer::start() {
  auto& im = *impl_;
  tcp::endpoint ep{asio::ip::make_address(im.opts.address), im.opts.port};
  im.acceptor.open(ep.protocol());
  im.acceptor.set_option(asio::socket_base::reuse_address(true));
  im.acceptor.bind(ep);
  im.acceptor.listen(asio::socket_base::max_listen_connections);
  im.guard.emplace(im.ioc.get_executor());
  im.accept();
  im.schedule_tick();
  for (int i = 0; i < std::max(1, im.opts.io_threads); ++i) {
    im.threads.emplace_back([&im] { im.ioc.run(); });
  }
  auto port = im.acceptor.local_endpoint().port();
  spdlog::info("listening on {}:{}", im.opts.address, port);
  return port;
}

void HttpServer::stop() {
  auto& im = *impl_;
  {
    std::lock_guard lock(im.stop_mu);
    if (im.stopped) return;
    im.stopped = true;
  }
  asio::post(im.ioc, [&im] {
    beast::error_code ignored;
    im.acceptor.close(ignored);
    im.ticker.cancel();
  });
  im.guard.reset();
  im.ioc.stop();
  for (auto& t : im.threads) {
    if (t.joinable()) t.join();
  }
  im.workers.join();
  im.stop_cv.notify_all();
}

void HttpServer::wait() {
  std::unique_lock lock(impl_->stop_mu);
  impl_->stop_cv.wait(lock, [this] { return impl_->stopped; });
}

}  // namespace mapcs::net

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <deque>
#include <fstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast.hpp>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "mapcs/dataset.hpp"
#include "mapcs/net/adapters.hpp"
#include "mapcs/net/http_server.hpp"
#include "mapcs/simulate.hpp"
#include "support.hpp"

using namespace mapcs;
namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;
using namespace std::chrono_literals;

namespace {

struct HttpReply {
  int status = 0;
  std::string content_type;
  std::string body;
};

HttpReply request(unsigned short port, http::verb verb, const std::string& target, const std::string& body = "") {
  asio::io_context ioc;
  beast::tcp_stream stream(ioc);
  stream.connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port));
  http::request<http::string_body> req{verb, target, 11};
  req.set(http::field::host, "127.0.0.1");
  if (!body.empty()) {
    req.set(http::field::content_type, "application/json");
    req.body() = body;
    req.prepare_payload();
  }
  http::write(stream, req);
  beast::flat_buffer buf;
  http::response<http::string_body> res;
  http::read(stream, buf, res);
  beast::error_code ec;
  stream.socket().shutdown(tcp::socket::shutdown_both, ec);
  return {static_cast<int>(res.result_int()), std::string(res[http::field::content_type]), res.body()};
}

/// WebSocket client with one read always outstanding; frames queue up as
/// they arrive and `next` pumps the io_context until one is available.
class WsClient {
 public:
  explicit WsClient(unsigned short port) : ws_(ioc_) {
    beast::get_lowest_layer(ws_).connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port));
    ws_.handshake("127.0.0.1", "/ws");
    ws_.text(true);
    read();
  }
  ~WsClient() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

  void send(const json& j) {
    bool done = false;
    std::string text = j.dump();
    ws_.async_write(asio::buffer(text), [&](beast::error_code ec, std::size_t) {
      ASSERT_FALSE(ec) << ec.message();
      done = true;
    });
    ioc_.restart();
    while (!done) ioc_.run_one_for(100ms);
  }

  std::optional<WireMessage> next(std::chrono::milliseconds timeout = 5000ms) {
    auto deadline = std::chrono::steady_clock::now() + timeout;
    while (frames_.empty() && std::chrono::steady_clock::now() < deadline && !closed_) {
      ioc_.restart();
      ioc_.run_one_for(20ms);
    }
    if (frames_.empty()) return std::nullopt;
    auto m = WireMessage::parse(frames_.front());
    frames_.pop_front();
    return m;
  }

  // Frames up to (not including) the reply to a probe; the probe's error
  // comes back after everything the previous frame produced.
  std::vector<WireMessage> drain() {
    send({{"type", "move"}, {"session_id", "PROBE"}, {"seq", 1}, {"payload", {{"step", "up"}}}});
    std::vector<WireMessage> out;
    while (auto m = next()) {
      if (m->type == MessageType::error && m->payload.value("code", "") == "wrong_session") return out;
      out.push_back(*m);
    }
    ADD_FAILURE() << "probe reply never arrived";
    return out;
  }

 private:
  void read() {
    ws_.async_read(buf_, [this](beast::error_code ec, std::size_t) {
      if (ec) {
        closed_ = true;
        return;
      }
      frames_.push_back(beast::buffers_to_string(buf_.data()));
      buf_.consume(buf_.size());
      read();
    });
  }

  asio::io_context ioc_;
  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buf_;
  std::deque<std::string> frames_;
  bool closed_ = false;
};

json frame(MessageType type, const std::string& sid, std::uint64_t seq, json payload) {
  return WireMessage{type, sid, seq, std::move(payload)}.to_json();
}

std::vector<StrategyConfig> conditions(std::initializer_list<const char*> specs) {
  std::vector<StrategyConfig> out;
  for (const char* s : specs) out.push_back(StrategyConfig::parse(s));
  return out;
}

/// Service plus HTTP server on an ephemeral port.
struct Server {
  MemorySessionStore store;
  ManualClock clock;
  SessionService service;
  net::HttpServer http;
  unsigned short port = 0;

  Server(ServiceConfig cfg, net::HttpServerOptions opts = {}, ServiceResources res = fixtures::resources())
      : service(std::move(res), std::move(cfg), store, clock), http(service, with_port0(std::move(opts))) {
    port = http.start();
  }
  ~Server() { http.stop(); }

  static net::HttpServerOptions with_port0(net::HttpServerOptions o) {
    o.port = 0;
    return o;
  }
};

ServiceConfig config(std::initializer_list<const char*> specs, std::uint64_t seed = 9) {
  ServiceConfig cfg;
  cfg.conditions = conditions(specs);
  cfg.seed = seed;
  cfg.token_secret = "net-test";
  return cfg;
}

net::HttpServerOptions slow_ticks() {
  net::HttpServerOptions o;
  o.tick_interval = std::chrono::hours(1);
  return o;
}

json create(const Server& s, const std::string& body) {
  auto r = request(s.port, http::verb::post, "/api/sessions", body);
  EXPECT_EQ(r.status, 201) << r.body;
  return json::parse(r.body);
}

}  // namespace

TEST(HttpEndpoints, HealthAndSessionCreation) {
  Server s(config({"alt_random", "ins_congruent"}), slow_ticks());
  auto h = request(s.port, http::verb::get, "/healthz");
  EXPECT_EQ(h.status, 200);
  EXPECT_EQ(json::parse(h.body), (json{{"status", "ok"}}));

  auto a = create(s, R"({"condition":"auto"})");
  auto b = create(s, R"({"condition":"auto"})");
  EXPECT_EQ(a["session_id"], "S000001");
  EXPECT_EQ(a["ws_path"], "/ws");
  EXPECT_NE(a["condition"], b["condition"]);
  EXPECT_EQ(a["token"], s.service.token_for("S000001"));

  auto c = create(s, R"({"condition":"alt_k5","seed":17})");
  EXPECT_EQ(c["condition"], "alt_short_context:k=5");
  EXPECT_EQ(s.service.snapshot(c["session_id"]).rng_seed, 17u);

  EXPECT_EQ(request(s.port, http::verb::post, "/api/sessions", R"({"condition":"alt_nonsense"})").status, 400);
  EXPECT_EQ(request(s.port, http::verb::post, "/api/sessions", "not json").status, 400);
  EXPECT_EQ(request(s.port, http::verb::post, "/api/sessions", R"({"condition":"auto","seed":-1})").status, 400);
  EXPECT_EQ(request(s.port, http::verb::get, "/api/sessions").status, 405);
  EXPECT_EQ(request(s.port, http::verb::get, "/nowhere").status, 404);
}

TEST(HttpEndpoints, StaticAssets) {
  auto root = std::filesystem::temp_directory_path() / ("mapcs-static-" + std::to_string(::getpid()));
  std::filesystem::create_directories(root / "assets");
  std::ofstream(root / "index.html") << "<!doctype html><title>map</title>";
  std::ofstream(root / "assets" / "app.js") << "console.log(1)";
  std::ofstream(root.parent_path() / "mapcs-secret.txt") << "secret";
  net::HttpServerOptions opts = slow_ticks();
  opts.static_dir = root;
  Server s(config({"alt_baseline"}), opts);

  auto index = request(s.port, http::verb::get, "/");
  EXPECT_EQ(index.status, 200);
  EXPECT_EQ(index.content_type, "text/html; charset=utf-8");
  EXPECT_EQ(index.body, "<!doctype html><title>map</title>");
  auto js = request(s.port, http::verb::get, "/assets/app.js?v=3");
  EXPECT_EQ(js.status, 200);
  EXPECT_EQ(js.content_type, "text/javascript; charset=utf-8");
  EXPECT_EQ(request(s.port, http::verb::get, "/../mapcs-secret.txt").status, 404);
  EXPECT_EQ(request(s.port, http::verb::get, "/assets/../../mapcs-secret.txt").status, 404);
  EXPECT_EQ(request(s.port, http::verb::get, "/missing.css").status, 404);

  EXPECT_EQ(net::mime_type("a.css"), "text/css; charset=utf-8");
  EXPECT_EQ(net::mime_type("a.wasm"), "application/wasm");
  EXPECT_EQ(net::mime_type("a.bin"), "application/octet-stream");
  EXPECT_TRUE(net::resolve_static(root, "/").filename() == "index.html");
  EXPECT_TRUE(net::resolve_static(root, "/..%2fmapcs-secret.txt").empty());
  std::filesystem::remove_all(root);
  std::filesystem::remove(root.parent_path() / "mapcs-secret.txt");
}

TEST(WebSocket, JoinHandshakeAndErrors) {
  Server s(config({"alt_adversarial"}), slow_ticks());
  auto created = create(s, R"({"condition":"alt_adversarial"})");
  std::string sid = created["session_id"];
  {
    WsClient ws(s.port);
    ws.send(frame(MessageType::chat_send, sid, 1, {{"text", "hello"}}));
    auto m = ws.next();
    ASSERT_TRUE(m);
    EXPECT_EQ(m->type, MessageType::error);
    EXPECT_EQ(m->payload["code"], "not_joined");
    ws.send(frame(MessageType::join, sid, 1, {{"token", "forged"}}));
    m = ws.next();
    ASSERT_TRUE(m);
    EXPECT_EQ(m->payload["code"], "bad_token");
    ws.send(json::parse(R"({"type":"dance"})"));
    m = ws.next();
    ASSERT_TRUE(m);
    EXPECT_EQ(m->payload["code"], "bad_message");
  }
  WsClient ws(s.port);
  ws.send(frame(MessageType::join, sid, 1, {{"token", created["token"]}}));
  auto first = ws.drain();
  ASSERT_EQ(first.size(), 3u);
  EXPECT_EQ(first[0].type, MessageType::session_config);
  EXPECT_EQ(first[1].type, MessageType::chat_recv);
  EXPECT_EQ(first[2].type, MessageType::game_state);
  EXPECT_EQ(first[0].payload["human_role"], "instructor");
  EXPECT_TRUE(first[0].payload["map"].contains("target_path"));

  ws.send(frame(MessageType::chat_send, sid, 2, {{"text", "hello"}}));
  auto turn = ws.drain();
  ASSERT_GE(turn.size(), 2u);
  EXPECT_EQ(turn[0].type, MessageType::chat_recv);
  EXPECT_EQ(turn[0].payload["speaker"], "human");
  EXPECT_EQ(turn[1].payload["speaker"], "bot");
  EXPECT_EQ(turn[1].payload["label"], "spanish");
  EXPECT_EQ(turn[1].payload["raw_sha256"].get<std::string>().size(), 64u);
  std::uint64_t seq = 3;
  for (const auto& m : turn) EXPECT_EQ(m.seq, ++seq);

  ws.send(frame(MessageType::chat_send, sid, 2, {{"text", "again"}}));
  auto stale = ws.drain();
  ASSERT_EQ(stale.size(), 1u);
  EXPECT_EQ(stale[0].payload["code"], "stale_seq");
  ws.send(frame(MessageType::move, sid, 3, {{"step", "down"}}));
  auto nav = ws.drain();
  ASSERT_EQ(nav.size(), 1u);
  EXPECT_EQ(nav[0].payload["code"], "not_navigator");
}

TEST(WebSocket, ReconnectResendsMissedFrames) {
  Server s(config({"alt_baseline"}), slow_ticks());
  auto created = create(s, R"({"condition":"alt_baseline"})");
  std::string sid = created["session_id"];
  std::uint64_t last = 0;
  {
    WsClient ws(s.port);
    ws.send(frame(MessageType::join, sid, 1, {{"token", created["token"]}}));
    auto frames = ws.drain();
    last = frames.back().seq;
    ws.send(frame(MessageType::chat_send, sid, 2, {{"text", "Go down two steps"}}));
    ASSERT_FALSE(ws.drain().empty());
  }
  WsClient ws(s.port);
  ws.send(frame(MessageType::join, sid, 3, {{"token", created["token"]}, {"last_seen_seq", last}}));
  auto resent = ws.drain();
  ASSERT_FALSE(resent.empty());
  EXPECT_EQ(resent.front().seq, last + 1);
  EXPECT_EQ(resent.front().payload["text"], "Go down two steps");
}

TEST(WebSocket, ServerClockClosesIdleGames) {
  net::HttpServerOptions opts;
  opts.tick_interval = 20ms;
  Server s(config({"alt_baseline"}), opts);
  auto created = create(s, R"({"condition":"alt_baseline"})");
  std::string sid = created["session_id"];
  WsClient ws(s.port);
  ws.send(frame(MessageType::join, sid, 1, {{"token", created["token"]}}));
  ws.drain();
  s.clock.advance(kGameTimeLimit + 1ms);
  std::optional<WireMessage> over;
  while (auto m = ws.next(3000ms)) {
    if (m->type == MessageType::game_over) {
      over = m;
      break;
    }
  }
  ASSERT_TRUE(over) << "no game_over pushed by the server clock";
  EXPECT_EQ(over->payload["status"], "timed_out");
  EXPECT_EQ(over->payload["duration_s"], 420.0);
  ws.send(frame(MessageType::chat_send, sid, 2, {{"text", "too late?"}}));
  ws.drain();
  EXPECT_EQ(s.service.snapshot(sid).games[0].status, GameStatus::timed_out);
}

// A scripted participant playing through the socket produces exactly the
// dataset the in-process runner produces, and the export endpoint serves it.
TEST(WebSocket, ScriptedSessionOverTheWireMatchesInProcess) {
  const std::uint64_t human_seed = 77;
  Server s(config({"ins_fem_incongruent"}), slow_ticks());
  auto created = create(s, R"({"condition":"auto"})");
  std::string sid = created["session_id"];

  ScriptedHuman human(HumanProfile{}, human_seed);
  WsClient ws(s.port);
  std::uint64_t seq = 0;
  auto send = [&](WireMessage m) {
    m.session_id = sid;
    m.seq = ++seq;
    ws.send(m.to_json());
    for (const auto& r : ws.drain()) human.observe(r);
  };
  send(WireMessage{MessageType::join, sid, 0, {{"token", created["token"]}}});
  // Same pacing as the in-process runner; the tick it calls is the one the
  // server's timer would run, and its frames arrive over the socket.
  auto tick = [&] {
    bool any = !s.service.tick(sid).empty();
    for (const auto& r : ws.drain()) human.observe(r);
    return any;
  };
  int guard = 0;
  while (!human.finished() && ++guard < 5000) {
    auto action = human.next();
    if (!action) {
      ASSERT_EQ(s.service.snapshot(sid).stage, Stage::playing);
      s.clock.set(std::max(s.clock.now(), Millis{0}) + kGameTimeLimit);
      tick();
      continue;
    }
    s.clock.advance(action->think_time);
    if (tick()) continue;
    send(std::move(action->message));
  }
  ASSERT_TRUE(human.finished());

  auto exported = request(s.port, http::verb::get, "/api/export");
  EXPECT_EQ(exported.status, 200);
  EXPECT_EQ(exported.content_type, "application/x-ndjson");
  std::istringstream in(exported.body);
  EXPECT_TRUE(validate_dataset(in).empty());

  MemorySessionStore store;
  ManualClock clock;
  SessionService local(fixtures::resources(), config({"ins_fem_incongruent"}), store, clock);
  auto c = local.create_session("auto");
  run_scripted_session(local, clock, c, HumanProfile{}, human_seed);
  std::ostringstream expected;
  const auto& r = fixtures::resources();
  export_dataset(store, ReplayContext{*r.analyzer, *r.maps}, expected);
  EXPECT_EQ(exported.body, expected.str());

  auto none = request(s.port, http::verb::get, "/api/export?condition=alt_random,alt_baseline");
  EXPECT_EQ(none.body, dataset_header(0).dump() + "\n");
  auto some = request(s.port, http::verb::get, "/api/export?condition=ins_fem_incongruent");
  EXPECT_EQ(some.body, expected.str());
}

// ---- external adapters against local stubs ---------------------------------

namespace {

struct Stub {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  Stub() {
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~Stub() {
    server.stop();
    thread.join();
  }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port) + path; }
};

PromptContext prompt_context(const std::string& latest) {
  PromptContext ctx;
  ctx.bot_role = Role::instructor;
  ctx.map = MapKnowledge::for_role(fixtures::resources().maps->at("farm"), Role::instructor);
  ctx.latest_human = latest;
  return ctx;
}

PromptTemplates prompts() { return PromptTemplates::load(fixtures::data_dir() / "prompts"); }

}  // namespace

TEST(SplitUrl, OriginAndPath) {
  auto u = net::split_url("https://api.example.com/v1/chat/completions");
  EXPECT_EQ(u.origin, "https://api.example.com");
  EXPECT_EQ(u.path, "/v1/chat/completions");
  u = net::split_url("http://127.0.0.1:8081");
  EXPECT_EQ(u.origin, "http://127.0.0.1:8081");
  EXPECT_EQ(u.path, "/");
  EXPECT_EQ(net::split_url("http://h/x?y=1").path, "/x?y=1");
  EXPECT_THROW(net::split_url("localhost:80/x"), std::invalid_argument);
}

TEST(ChatCompletionsBackend, SendsPromptAndReadsReply) {
  Stub stub;
  json seen;
  std::string auth;
  stub.server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"Baja dos pasos. [MOVE down]"}}]})",
                    "application/json");
  });
  net::ChatCompletionsBackend backend({stub.url("/v1/chat/completions"), "k-123", 2000ms}, "test-model", prompts(),
                                      0.2);
  EXPECT_EQ(backend.generate(prompt_context("¿a dónde voy?")), "Baja dos pasos. [MOVE down]");
  EXPECT_EQ(auth, "Bearer k-123");
  EXPECT_EQ(seen["model"], "test-model");
  EXPECT_EQ(seen["temperature"], 0.2);
  ASSERT_EQ(seen["messages"].size(), 2u);
  EXPECT_EQ(seen["messages"][0]["role"], "system");
  EXPECT_EQ(seen["messages"][0]["content"], prompts().render(prompt_context("¿a dónde voy?")));
  EXPECT_EQ(seen["messages"][1]["content"], "¿a dónde voy?");
}

TEST(ChatCompletionsBackend, FailuresRaiseBackendError) {
  Stub stub;
  stub.server.Post("/500", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  stub.server.Post("/garbage", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("{not json", "application/json");
  });
  stub.server.Post("/shape", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"choices":[]})", "application/json");
  });
  stub.server.Post("/slow", [](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(600ms);
    res.set_content(R"({"choices":[{"message":{"content":"late"}}]})", "application/json");
  });
  for (const char* path : {"/500", "/garbage", "/shape", "/slow"}) {
    net::ChatCompletionsBackend backend({stub.url(path), "", 200ms}, "m", prompts());
    EXPECT_THROW(backend.generate(prompt_context("hi")), BackendError) << path;
  }
  net::ChatCompletionsBackend closed({"http://127.0.0.1:1/v1", "", 200ms}, "m", prompts());
  EXPECT_THROW(closed.generate(prompt_context("hi")), BackendError);
  EXPECT_THROW(net::ChatCompletionsBackend({"ftp://x/y", "", 1s}, "m", prompts()), std::invalid_argument);
}

TEST(CloudTranslator, RequestShapeAndErrors) {
  Stub stub;
  json seen;
  std::string key;
  stub.server.Post("/language/translate/v2", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    key = req.get_param_value("key");
    std::string out = seen["target"] == "en" ? "Go down two steps." : "Baja dos pasos.";
    res.set_content(json{{"data", {{"translations", {{{"translatedText", out}}}}}}}.dump(), "application/json");
  });
  stub.server.Post("/403", [](const httplib::Request&, httplib::Response& res) { res.status = 403; });
  net::CloudTranslator tr({stub.url("/language/translate/v2"), "sek ret", 2000ms});
  EXPECT_EQ(tr.translate("Baja dos pasos.", Language::english), "Go down two steps.");
  EXPECT_EQ(seen, (json{{"q", "Baja dos pasos."}, {"target", "en"}, {"format", "text"}}));
  EXPECT_EQ(key, "sek ret");
  EXPECT_EQ(tr.translate("Go down two steps.", Language::spanish), "Baja dos pasos.");
  EXPECT_EQ(seen["target"], "es");
  EXPECT_THROW(tr.translate("x", Language::undecided), TranslationError);
  net::CloudTranslator denied({stub.url("/403"), "", 500ms});
  EXPECT_THROW(denied.translate("hola", Language::english), TranslationError);
}

// The service runs its strategy over what an external backend returns, and a
// translator outage degrades the turn instead of failing it.
TEST(ExternalAdapters, DriveTheServiceEndToEnd) {
  Stub stub;
  std::atomic<bool> translator_up{true};
  stub.server.Post("/chat", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"choices":[{"message":{"content":"Go down two steps."}}]})", "application/json");
  });
  stub.server.Post("/translate", [&](const httplib::Request& req, httplib::Response& res) {
    if (!translator_up) {
      res.status = 503;
      return;
    }
    auto body = json::parse(req.body);
    std::string out = body["q"] == "Go down two steps." ? "Baja dos pasos." : body["q"].get<std::string>();
    res.set_content(json{{"data", {{"translations", {{{"translatedText", out}}}}}}}.dump(), "application/json");
  });
  ServiceResources res = fixtures::resources();
  res.backend = std::make_shared<net::ChatCompletionsBackend>(net::Endpoint{stub.url("/chat"), "", 2000ms}, "m",
                                                              prompts());
  res.translator = std::make_shared<net::CloudTranslator>(net::Endpoint{stub.url("/translate"), "", 2000ms});
  MemorySessionStore store;
  ManualClock clock;
  SessionService service(res, config({"alt_alignment"}), store, clock);
  auto c = service.create_session("alt_alignment");
  service.handle(WireMessage{MessageType::join, c.session_id, 1, {{"token", c.token}}});
  clock.advance(5s);
  auto out = service.handle(WireMessage{MessageType::chat_send, c.session_id, 2, {{"text", "Hola, ¿empezamos?"}}});
  ASSERT_GE(out.size(), 2u);
  EXPECT_EQ(out[1].payload["text"], "Baja dos pasos.");
  EXPECT_EQ(out[1].payload["degraded"], false);

  translator_up = false;
  clock.advance(5s);
  out = service.handle(WireMessage{MessageType::chat_send, c.session_id, 3, {{"text", "Sí, ¿y luego?"}}});
  ASSERT_GE(out.size(), 2u);
  EXPECT_EQ(out[1].payload["text"], "Go down two steps.");
  EXPECT_EQ(out[1].payload["degraded"], true);
}

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::err);
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}

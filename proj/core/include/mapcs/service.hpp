#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapcs/agent.hpp"
#include "mapcs/session_log.hpp"
#include "mapcs/store.hpp"
#include "mapcs/wire.hpp"

namespace mapcs {

/// Wall clock in milliseconds. The service only looks at differences.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Millis now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Millis now() const override;
};

class ManualClock final : public Clock {
 public:
  explicit ManualClock(Millis start = Millis{0}) : now_(start.count()) {}
  Millis now() const override { return Millis{now_.load()}; }
  void set(Millis t) { now_ = t.count(); }
  void advance(Millis d) { now_ += d.count(); }

 private:
  std::atomic<std::int64_t> now_;
};

struct ServiceResources {
  std::shared_ptr<const TextAnalyzer> analyzer;
  std::shared_ptr<const Translator> translator;
  std::shared_ptr<AgentBackend> backend;
  std::shared_ptr<const MapCatalog> maps;
  std::shared_ptr<const WelcomeMessages> welcome;
};

struct ServiceConfig {
  std::vector<StrategyConfig> conditions;  // the pool "auto" cycles through
  std::uint64_t seed = 0;
  QuestionnaireMode questionnaire_mode = QuestionnaireMode::once;
  std::string token_secret;  // empty: a random secret per process
};

/// Rejected session-creation request (unknown condition and the like).
class RequestError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CreatedSession {
  std::string session_id;
  std::string token;
  StrategyConfig condition;
};

/// Orchestrates sessions: condition assignment, turn relay through the
/// agent, avatar moves, timeouts and questionnaires. Every state change is an
/// event appended to the store and folded through the reducer. Messages for
/// one session are handled one at a time; distinct sessions run in parallel.
class SessionService {
 public:
  using Listener = std::function<void(const WireMessage&)>;

  SessionService(ServiceResources res, ServiceConfig cfg, SessionStore& store, const Clock& clock);
  ~SessionService();

  /// `condition` is a strategy spec or "auto". `seed` overrides the
  /// per-session seed derived from the service seed. Throws RequestError.
  CreatedSession create_session(std::string_view condition, std::optional<std::uint64_t> seed = std::nullopt);

  /// Processes one client frame and returns the frames it produced, in seq
  /// order. Failures come back as `error` frames; nothing is thrown.
  std::vector<WireMessage> handle(const WireMessage& in);

  /// Closes the session's game if its time is up.
  std::vector<WireMessage> tick(const std::string& session_id);
  void tick_all();

  /// Receives every outgoing frame of the session as it is produced, under
  /// the session's lock (so in seq order). Pass an empty function to detach.
  void set_listener(const std::string& session_id, Listener fn);

  Session snapshot(const std::string& session_id);
  std::vector<std::string> session_ids() const { return store_.list(); }
  std::string token_for(const std::string& session_id) const;

  const ServiceResources& resources() const { return res_; }
  const ServiceConfig& config() const { return cfg_; }
  SessionStore& store() { return store_; }

 private:
  struct Live;

  std::shared_ptr<Live> find(const std::string& session_id);
  std::vector<WireMessage> process(Live& live, const WireMessage& in);
  void record(Live& live, Event e);
  void emit(Live& live, MessageType type, nlohmann::json payload, std::vector<WireMessage>* out);
  void check_time(Live& live, std::vector<WireMessage>* out);
  void after_state_change(Live& live, int game_before, Stage stage_before, std::vector<WireMessage>* out);
  void bot_reply(Live& live, std::vector<WireMessage>* out, bool opening);
  Millis rel_now(const Live& live) const;
  nlohmann::json config_payload(const Live& live) const;
  nlohmann::json state_payload(const Live& live) const;
  nlohmann::json chat_payload(const Utterance& u, int game_index) const;

  ServiceResources res_;
  ServiceConfig cfg_;
  SessionStore& store_;
  const Clock& clock_;
  ReplayContext ctx_;

  mutable std::mutex registry_mu_;
  std::map<std::string, std::shared_ptr<Live>> live_;
  std::size_t next_number_ = 1;
  std::size_t auto_counter_ = 0;
};

/// Role-filtered map for the human's view: the target path (and the goal)
/// only for the instructor.
nlohmann::json map_view(const GameMap& map, Role human_role);

}  // namespace mapcs

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapcs/analyzer.hpp"
#include "mapcs/game.hpp"
#include "mapcs/random.hpp"
#include "mapcs/translator.hpp"

namespace mapcs {

enum class EventKind { created, utterance, move, timeout, questionnaire };
std::string_view to_string(EventKind k);

/// One entry of a session's append-only log. Only the fields relevant to
/// `kind` are meaningful or serialized. `at` is milliseconds since the
/// session was created.
struct Event {
  EventKind kind = EventKind::created;
  Millis at{0};

  // created
  std::string session_id;
  StrategyConfig condition;
  std::uint64_t rng_seed = 0;
  std::vector<std::string> map_ids;
  QuestionnaireMode questionnaire_mode = QuestionnaireMode::once;
  std::int64_t wall_ms = 0;  // creation time on the service clock; not part of the record

  // utterance
  Speaker speaker = Speaker::human;
  std::string text;
  std::string backend_text;  // bot only
  bool degraded = false;     // bot only
  std::vector<Step> moves;   // bot navigator only

  // move
  Step step = Step::up;

  // questionnaire
  QuestionnaireResponse response;

  nlohmann::json to_json() const;
  /// Throws std::invalid_argument on malformed entries.
  static Event from_json(const nlohmann::json& j);
};

Event created_event(const Session& fresh);
Event human_utterance_event(std::string text, Millis at);
Event bot_utterance_event(std::string final_text, std::string backend_text, bool degraded, std::vector<Step> moves,
                          Millis at);
Event move_event(Step step, Millis at);
Event timeout_event(Millis at);
Event questionnaire_event(QuestionnaireResponse response, Millis at);

struct ReplayContext {
  const TextAnalyzer& analyzer;
  const MapCatalog& maps;
};

/// The reducer. Live sessions and replays both go through here, so a log
/// replays to exactly the state that produced it. A game that closes on an
/// event (goal reached, timeout) is advanced past immediately. Throws
/// GameStateError for events the current state does not allow.
void apply_event(std::optional<Session>& state, const Event& e, const ReplayContext& ctx);

/// Folds a whole log. The first event must be `created`.
Session replay(std::span<const Event> log, const ReplayContext& ctx);

/// Deterministic JSON snapshot of a session (the SessionRecord).
nlohmann::json session_to_json(const Session& s);
nlohmann::json utterance_to_json(const Utterance& u);
nlohmann::json game_to_json(const GameRecord& g);

struct AuditMismatch {
  std::size_t event_index = 0;
  std::string expected;  // recomputed from the backend reply
  std::string recorded;
};

/// Re-derives every bot utterance from its recorded backend reply by running
/// the session's strategy with a fresh session RNG stream. Degraded turns
/// still consume their draws but are not compared. `rng_after`, when given,
/// receives the stream as it stands after the last event.
std::vector<AuditMismatch> audit_strategy(std::span<const Event> log, const ReplayContext& ctx, const Translator& tr,
                                          const std::vector<std::string>& welcome_pool,
                                          SeededRandom* rng_after = nullptr);

}  // namespace mapcs

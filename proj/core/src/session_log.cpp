#include "mapcs/session_log.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "mapcs/agent.hpp"
#include "mapcs/random.hpp"
#include "mapcs/strategy.hpp"

namespace mapcs {

using nlohmann::json;

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::created: return "created";
    case EventKind::utterance: return "utterance";
    case EventKind::move: return "move";
    case EventKind::timeout: return "timeout";
    case EventKind::questionnaire: return "questionnaire";
  }
  return "created";
}

namespace {

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (auto k : {EventKind::created, EventKind::utterance, EventKind::move, EventKind::timeout,
                 EventKind::questionnaire}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

template <typename T>
T need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("event is missing '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("event field '") + key + "' has the wrong type");
  }
}

template <typename T, typename F>
T need_enum(const json& j, const char* key, F parse) {
  auto s = need<std::string>(j, key);
  auto v = parse(s);
  if (!v) throw std::invalid_argument(std::string("event field '") + key + "' has unknown value '" + s + "'");
  return *v;
}

json questionnaire_to_json(const QuestionnaireResponse& r) {
  return {{"game_index", r.game_index},         {"task_enjoy", r.task_enjoy},
          {"task_success", r.task_success},     {"difficult_comm", r.difficult_comm},
          {"difficult_ins", r.difficult_ins},   {"background", r.background}};
}

QuestionnaireResponse questionnaire_from_json(const json& j) {
  QuestionnaireResponse r;
  r.game_index = j.value("game_index", -1);
  r.task_enjoy = need<int>(j, "task_enjoy");
  r.task_success = need<int>(j, "task_success");
  r.difficult_comm = need<int>(j, "difficult_comm");
  r.difficult_ins = need<int>(j, "difficult_ins");
  if (auto b = j.find("background"); b != j.end()) {
    r.background = b->get<std::map<std::string, std::string>>();
  }
  return r;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

void close_and_advance(Session& s, const ReplayContext& ctx, Millis at) {
  if (!s.current_game().active()) advance_session(s, ctx.maps, at);
}

}  // namespace

json Event::to_json() const {
  json j = {{"kind", std::string(mapcs::to_string(kind))}, {"at_ms", at.count()}};
  switch (kind) {
    case EventKind::created:
      j["session_id"] = session_id;
      j["condition"] = condition.name();
      j["rng_seed"] = rng_seed;
      j["map_ids"] = map_ids;
      j["questionnaire_mode"] = std::string(mapcs::to_string(questionnaire_mode));
      j["wall_ms"] = wall_ms;
      break;
    case EventKind::utterance: {
      j["speaker"] = std::string(mapcs::to_string(speaker));
      j["text"] = text;
      if (speaker == Speaker::bot) {
        j["backend_text"] = backend_text;
        j["degraded"] = degraded;
        json m = json::array();
        for (Step s : moves) m.push_back(std::string(mapcs::to_string(s)));
        j["moves"] = std::move(m);
      }
      break;
    }
    case EventKind::move:
      j["step"] = std::string(mapcs::to_string(step));
      break;
    case EventKind::timeout:
      break;
    case EventKind::questionnaire:
      j["response"] = questionnaire_to_json(response);
      break;
  }
  return j;
}

Event Event::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("event must be a JSON object");
  Event e;
  e.kind = need_enum<EventKind>(j, "kind", parse_event_kind);
  e.at = Millis{need<std::int64_t>(j, "at_ms")};
  switch (e.kind) {
    case EventKind::created:
      e.session_id = need<std::string>(j, "session_id");
      try {
        e.condition = StrategyConfig::parse(need<std::string>(j, "condition"));
      } catch (const ConfigError& err) {
        throw std::invalid_argument(err.what());
      }
      e.rng_seed = need<std::uint64_t>(j, "rng_seed");
      e.condition.rng_seed = e.rng_seed;
      e.map_ids = need<std::vector<std::string>>(j, "map_ids");
      e.questionnaire_mode = need_enum<QuestionnaireMode>(j, "questionnaire_mode", parse_questionnaire_mode);
      e.wall_ms = j.value("wall_ms", std::int64_t{0});
      break;
    case EventKind::utterance:
      e.speaker = need_enum<Speaker>(j, "speaker", parse_speaker);
      e.text = need<std::string>(j, "text");
      if (e.speaker == Speaker::bot) {
        e.backend_text = need<std::string>(j, "backend_text");
        e.degraded = need<bool>(j, "degraded");
        for (const auto& m : need<std::vector<std::string>>(j, "moves")) {
          auto s = parse_step(m);
          if (!s) throw std::invalid_argument("unknown move '" + m + "'");
          e.moves.push_back(*s);
        }
      }
      break;
    case EventKind::move:
      e.step = need_enum<Step>(j, "step", parse_step);
      break;
    case EventKind::timeout:
      break;
    case EventKind::questionnaire:
      e.response = questionnaire_from_json(need<json>(j, "response"));
      break;
  }
  return e;
}

Event created_event(const Session& fresh) {
  Event e;
  e.kind = EventKind::created;
  e.session_id = fresh.session_id;
  e.condition = fresh.condition;
  e.rng_seed = fresh.rng_seed;
  e.map_ids = fresh.map_ids;
  e.questionnaire_mode = fresh.questionnaire_mode;
  return e;
}

Event human_utterance_event(std::string text, Millis at) {
  Event e;
  e.kind = EventKind::utterance;
  e.at = at;
  e.speaker = Speaker::human;
  e.text = std::move(text);
  return e;
}

Event bot_utterance_event(std::string final_text, std::string backend_text, bool degraded, std::vector<Step> moves,
                          Millis at) {
  Event e;
  e.kind = EventKind::utterance;
  e.at = at;
  e.speaker = Speaker::bot;
  e.text = std::move(final_text);
  e.backend_text = std::move(backend_text);
  e.degraded = degraded;
  e.moves = std::move(moves);
  return e;
}

Event move_event(Step step, Millis at) {
  Event e;
  e.kind = EventKind::move;
  e.at = at;
  e.step = step;
  return e;
}

Event timeout_event(Millis at) {
  Event e;
  e.kind = EventKind::timeout;
  e.at = at;
  return e;
}

Event questionnaire_event(QuestionnaireResponse response, Millis at) {
  Event e;
  e.kind = EventKind::questionnaire;
  e.at = at;
  e.response = std::move(response);
  return e;
}

void apply_event(std::optional<Session>& state, const Event& e, const ReplayContext& ctx) {
  if (e.kind == EventKind::created) {
    if (state) throw GameStateError("session already created");
    StrategyConfig cfg = e.condition;
    cfg.rng_seed = e.rng_seed;
    state = start_session(e.session_id, cfg, e.rng_seed, e.map_ids, e.questionnaire_mode, ctx.maps, e.at);
    return;
  }
  if (!state) throw GameStateError("log does not start with a created event");
  Session& s = *state;

  if (e.kind == EventKind::questionnaire) {
    submit_questionnaire(s, e.response, ctx.maps, e.at);
    return;
  }
  if (s.stage != Stage::playing) throw GameStateError("no game is running");
  GameRecord& game = s.current_game();
  const GameMap& map = ctx.maps.at(game.map_id);

  switch (e.kind) {
    case EventKind::utterance: {
      if (!game.active()) throw GameStateError("game is closed");
      if (e.at - game.started_at >= kGameTimeLimit) throw GameStateError("game time is up");
      if (blank(e.text)) throw GameStateError("empty utterance");
      Utterance u = ctx.analyzer.analyze(e.speaker, e.text, e.at);
      if (e.speaker == Speaker::bot) {
        u.backend_text = e.backend_text;
        u.degraded = e.degraded;
      }
      game.transcript.push_back(std::move(u));
      if (e.speaker == Speaker::bot && game.human_role == Role::instructor) {
        for (Step step : e.moves) {
          if (!game.active()) break;
          move_avatar(game, map, step, e.at);
        }
      }
      close_and_advance(s, ctx, e.at);
      break;
    }
    case EventKind::move:
      if (game.human_role != Role::navigator) throw GameStateError("only the navigator moves the avatar");
      move_avatar(game, map, e.step, e.at);
      close_and_advance(s, ctx, e.at);
      break;
    case EventKind::timeout:
      if (!check_timeout(game, map, e.at)) throw GameStateError("timeout before the game limit");
      close_and_advance(s, ctx, e.at);
      break;
    default:
      break;
  }
}

Session replay(std::span<const Event> log, const ReplayContext& ctx) {
  if (log.empty() || log.front().kind != EventKind::created) {
    throw GameStateError("log does not start with a created event");
  }
  std::optional<Session> state;
  for (const auto& e : log) apply_event(state, e, ctx);
  return std::move(*state);
}

json utterance_to_json(const Utterance& u) {
  json tokens = json::array();
  for (const auto& t : u.tokens) {
    tokens.push_back({{"s", t.surface}, {"k", std::string(to_string(t.kind))}, {"l", std::string(to_string(t.lang))}});
  }
  json nps = json::array();
  for (const auto& np : u.noun_phrases) {
    json n = {{"det_index", np.det_index},
              {"noun_index", np.noun_index},
              {"det", u.tokens[np.det_index].surface},
              {"noun", u.tokens[np.noun_index].surface},
              {"det_gender", std::string(to_string(np.det_gender))},
              {"noun_gender", std::string(to_string(np.noun_gender))},
              {"noun_lang", std::string(to_string(np.noun_lang))},
              {"noun_spanish_lemma", np.noun_spanish_lemma}};
    n["mixed_class"] = np.noun_lang == Language::english ? json(std::string(to_string(classify_mixed_np(np)))) : json();
    nps.push_back(std::move(n));
  }
  json j = {{"speaker", std::string(to_string(u.speaker))},
            {"timestamp_ms", u.timestamp.count()},
            {"text", u.text},
            {"label", std::string(to_string(u.label))},
            {"tokens", std::move(tokens)},
            {"noun_phrases", std::move(nps)}};
  if (u.speaker == Speaker::bot) {
    j["backend_text"] = u.backend_text;
    j["degraded"] = u.degraded;
  }
  return j;
}

json game_to_json(const GameRecord& g) {
  json transcript = json::array();
  for (const auto& u : g.transcript) transcript.push_back(utterance_to_json(u));
  json trace = json::array();
  for (const auto& p : g.avatar_trace) trace.push_back({p.cell.x, p.cell.y, p.t.count()});
  json j = {{"map_id", g.map_id},
            {"human_role", std::string(to_string(g.human_role))},
            {"status", std::string(to_string(g.status))},
            {"started_at_ms", g.started_at.count()},
            {"ended_at_ms", g.ended_at.count()},
            {"transcript", std::move(transcript)},
            {"avatar_trace", std::move(trace)}};
  if (g.route) {
    j["route"] = {{"raw_dtw_cost", g.route->raw_dtw_cost}, {"normalized", g.route->normalized}};
  } else {
    j["route"] = nullptr;
  }
  return j;
}

json session_to_json(const Session& s) {
  json games = json::array();
  for (const auto& g : s.games) games.push_back(game_to_json(g));
  json qs = json::array();
  for (const auto& q : s.questionnaires) qs.push_back(questionnaire_to_json(q));
  return {{"session_id", s.session_id},
          {"condition", s.condition.name()},
          {"rng_seed", s.rng_seed},
          {"questionnaire_mode", std::string(to_string(s.questionnaire_mode))},
          {"map_ids", s.map_ids},
          {"stage", std::string(to_string(s.stage))},
          {"games", std::move(games)},
          {"questionnaires", std::move(qs)}};
}

std::vector<AuditMismatch> audit_strategy(std::span<const Event> log, const ReplayContext& ctx, const Translator& tr,
                                          const std::vector<std::string>& welcome_pool, SeededRandom* rng_after) {
  std::vector<AuditMismatch> out;
  if (log.empty()) return out;
  std::optional<Session> state;
  std::optional<SeededRandom> rng;
  bool welcomed = false;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const Event& e = log[i];
    if (e.kind == EventKind::created) rng = SeededRandom::for_session(e.session_id, e.rng_seed);
    if (e.kind == EventKind::utterance && e.speaker == Speaker::bot && state && rng) {
      std::string candidate;
      if (!welcomed) {
        welcomed = true;
        candidate = welcome_pool.empty() ? e.backend_text : welcome_pool[rng->index(welcome_pool.size())];
        if (candidate != e.backend_text) out.push_back({i, candidate, e.backend_text});
      } else {
        candidate = parse_move_commands(e.backend_text).text;
        if (blank(candidate)) candidate = "Ok.";
      }
      const auto& transcript = state->current_game().transcript;
      DialogState dialog(transcript);
      auto outcome = apply_strategy(state->condition, dialog, candidate, ctx.analyzer, tr, *rng);
      if (!e.degraded && outcome.text != e.text) out.push_back({i, outcome.text, e.text});
    }
    apply_event(state, e, ctx);
  }
  if (rng_after && rng) *rng_after = *rng;
  return out;
}

}  // namespace mapcs

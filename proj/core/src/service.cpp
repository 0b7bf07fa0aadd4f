#include "mapcs/service.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <random>

namespace mapcs {

using nlohmann::json;

Millis SystemClock::now() const {
  return std::chrono::duration_cast<Millis>(std::chrono::system_clock::now().time_since_epoch());
}

struct SessionService::Live {
  std::mutex mu;
  std::string id;
  std::optional<Session> session;
  SeededRandom rng{0};
  Millis created_wall{0};
  Millis last_at{0};
  std::uint64_t in_seq = 0;
  std::uint64_t out_seq = 0;
  std::vector<WireMessage> outbox;
  Listener listener;
};

namespace {

std::string trimmed(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

json cell_json(Cell c) { return json::array({c.x, c.y}); }

std::string random_secret() {
  std::random_device rd;
  std::string s;
  for (int i = 0; i < 4; ++i) s += std::to_string(rd());
  return s;
}

constexpr const char* kQuestionnaireItems[] = {"task_enjoy", "task_success", "difficult_comm", "difficult_ins"};

}  // namespace

json map_view(const GameMap& map, Role human_role) {
  json landmarks = json::array();
  for (const auto& l : map.landmarks) {
    landmarks.push_back({{"english", l.english_name},
                         {"spanish", l.spanish_name},
                         {"gender", std::string(to_string(l.gender))},
                         {"cell", cell_json(l.cell)}});
  }
  json j = {{"map_id", map.map_id},
            {"width", map.width},
            {"height", map.height},
            {"start", cell_json(map.start)},
            {"landmarks", std::move(landmarks)}};
  if (human_role == Role::instructor) {
    json path = json::array();
    for (Cell c : map.target_path) path.push_back(cell_json(c));
    j["target_path"] = std::move(path);
    j["end"] = cell_json(map.end);
  }
  return j;
}

SessionService::SessionService(ServiceResources res, ServiceConfig cfg, SessionStore& store, const Clock& clock)
    : res_(std::move(res)), cfg_(std::move(cfg)), store_(store), clock_(clock), ctx_{*res_.analyzer, *res_.maps} {
  if (cfg_.token_secret.empty()) cfg_.token_secret = random_secret();
  for (const auto& c : cfg_.conditions) c.validate();
  next_number_ = store_.list().size() + 1;
}

SessionService::~SessionService() = default;

std::string SessionService::token_for(const std::string& session_id) const {
  return sha256_hex(cfg_.token_secret + ":" + session_id).substr(0, 32);
}

Millis SessionService::rel_now(const Live& live) const {
  return std::max(clock_.now() - live.created_wall, live.last_at);
}

CreatedSession SessionService::create_session(std::string_view condition, std::optional<std::uint64_t> seed) {
  StrategyConfig cond;
  std::lock_guard reg(registry_mu_);
  if (condition == "auto") {
    if (cfg_.conditions.empty()) throw RequestError("no conditions configured for automatic assignment");
    cond = cfg_.conditions[auto_counter_++ % cfg_.conditions.size()];
  } else {
    try {
      cond = StrategyConfig::parse(condition);
    } catch (const ConfigError& e) {
      throw RequestError(e.what());
    }
  }
  if (res_.maps->size() < kGamesPerSession) throw RequestError("fewer than four maps are available");

  auto existing = store_.list();
  std::string id;
  do {
    char buf[16];
    std::snprintf(buf, sizeof buf, "S%06zu", next_number_++);
    id = buf;
  } while (std::find(existing.begin(), existing.end(), id) != existing.end());

  std::uint64_t session_seed = seed.value_or(derive_seed(cfg_.seed, id));
  cond.rng_seed = session_seed;

  auto ids = res_.maps->ids();
  SeededRandom shuffle(derive_seed(session_seed, "maps"));
  for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[shuffle.index(i)]);
  ids.resize(kGamesPerSession);

  auto live = std::make_shared<Live>();
  live->id = id;
  live->created_wall = clock_.now();
  Session fresh = start_session(id, cond, session_seed, ids, cfg_.questionnaire_mode, *res_.maps, Millis{0});
  Event created = created_event(fresh);
  created.wall_ms = live->created_wall.count();
  store_.create(created);
  live->session = std::move(fresh);
  live->rng = SeededRandom::for_session(id, session_seed);

  std::lock_guard lock(live->mu);
  std::vector<WireMessage> out;
  emit(*live, MessageType::session_config, config_payload(*live), &out);
  const std::string& welcome = res_.welcome->pick(live->rng);
  DialogState empty(std::span<const Utterance>{});
  auto outcome = apply_strategy(cond, empty, welcome, *res_.analyzer, *res_.translator, live->rng);
  record(*live, bot_utterance_event(outcome.text, welcome, outcome.degraded, {}, Millis{0}));
  emit(*live, MessageType::chat_recv, chat_payload(live->session->current_game().transcript.back(), 0), &out);
  emit(*live, MessageType::game_state, state_payload(*live), &out);
  live_[id] = live;
  spdlog::debug("created session {} with condition {}", id, cond.name());
  return {id, token_for(id), cond};
}

std::shared_ptr<SessionService::Live> SessionService::find(const std::string& session_id) {
  std::lock_guard reg(registry_mu_);
  if (auto it = live_.find(session_id); it != live_.end()) return it->second;
  auto ids = store_.list();
  if (std::find(ids.begin(), ids.end(), session_id) == ids.end()) return nullptr;

  auto log = store_.load(session_id);
  auto live = std::make_shared<Live>();
  live->id = session_id;
  live->session = replay(log, ctx_);
  audit_strategy(log, ctx_, *res_.translator, res_.welcome->pool(), &live->rng);
  live->created_wall = Millis{log.front().wall_ms};
  live->last_at = log.back().at;
  // A reloaded session starts a fresh outgoing stream with its current view.
  emit(*live, MessageType::session_config, config_payload(*live), nullptr);
  if (live->session->stage == Stage::playing) {
    for (const auto& u : live->session->current_game().transcript) {
      emit(*live, MessageType::chat_recv, chat_payload(u, live->session->current_index()), nullptr);
    }
    emit(*live, MessageType::game_state, state_payload(*live), nullptr);
  }
  live_[session_id] = live;
  return live;
}

void SessionService::set_listener(const std::string& session_id, Listener fn) {
  auto live = find(session_id);
  if (!live) return;
  std::lock_guard lock(live->mu);
  live->listener = std::move(fn);
}

Session SessionService::snapshot(const std::string& session_id) {
  auto live = find(session_id);
  if (!live) throw StoreError("unknown session: " + session_id);
  std::lock_guard lock(live->mu);
  return *live->session;
}

std::vector<WireMessage> SessionService::handle(const WireMessage& in) {
  auto live = find(in.session_id);
  if (!live) return {error_message(in.session_id, "unknown_session", "no session '" + in.session_id + "'")};
  std::lock_guard lock(live->mu);
  try {
    return process(*live, in);
  } catch (const std::exception& e) {
    spdlog::error("session {}: {}", live->id, e.what());
    std::vector<WireMessage> out;
    emit(*live, MessageType::error, {{"code", "internal"}, {"message", e.what()}}, &out);
    return out;
  }
}

std::vector<WireMessage> SessionService::tick(const std::string& session_id) {
  auto live = find(session_id);
  if (!live) return {};
  std::lock_guard lock(live->mu);
  std::vector<WireMessage> out;
  check_time(*live, &out);
  return out;
}

void SessionService::tick_all() {
  std::vector<std::string> ids;
  {
    std::lock_guard reg(registry_mu_);
    for (const auto& [id, live] : live_) ids.push_back(id);
  }
  for (const auto& id : ids) tick(id);
}

void SessionService::emit(Live& live, MessageType type, json payload, std::vector<WireMessage>* out) {
  WireMessage m;
  m.type = type;
  m.session_id = live.id;
  m.seq = ++live.out_seq;
  m.payload = std::move(payload);
  live.outbox.push_back(m);
  if (live.listener) live.listener(m);
  if (out) out->push_back(std::move(m));
}

void SessionService::record(Live& live, Event e) {
  e.at = std::max(e.at, live.last_at);
  std::optional<Session> next = live.session;
  apply_event(next, e, ctx_);
  store_.append(live.id, e);
  live.session = std::move(next);
  live.last_at = e.at;
}

void SessionService::check_time(Live& live, std::vector<WireMessage>* out) {
  Session& s = *live.session;
  if (s.stage != Stage::playing || !s.current_game().active()) return;
  Millis now = rel_now(live);
  if (now - s.current_game().started_at < kGameTimeLimit) return;
  int gi = s.current_index();
  record(live, timeout_event(now));
  after_state_change(live, gi, Stage::playing, out);
}

void SessionService::after_state_change(Live& live, int game_before, Stage stage_before, std::vector<WireMessage>* out) {
  Session& s = *live.session;
  if (stage_before == Stage::playing) {
    const GameRecord& g = s.games[game_before];
    if (g.active()) return;
    json route = g.route ? json{{"raw_dtw_cost", g.route->raw_dtw_cost}, {"normalized", g.route->normalized}} : json();
    std::string next = s.stage == Stage::playing ? "game" : "questionnaire";
    emit(live, MessageType::game_over,
         {{"game_index", game_before},
          {"status", std::string(to_string(g.status))},
          {"completed", g.completed()},
          {"duration_s", g.duration_s()},
          {"route", route},
          {"next", next}},
         out);
  }
  emit(live, MessageType::session_config, config_payload(live), out);
  if (s.stage != Stage::playing) return;
  emit(live, MessageType::game_state, state_payload(live), out);
  if (s.current_game().human_role == Role::navigator && s.current_game().transcript.empty()) {
    bot_reply(live, out, true);
  }
}

void SessionService::bot_reply(Live& live, std::vector<WireMessage>* out, bool opening) {
  Session& s = *live.session;
  const GameRecord& game = s.current_game();
  const GameMap& map = res_.maps->at(game.map_id);
  int gi = s.current_index();

  PromptContext pc;
  pc.bot_role = other_role(game.human_role);
  pc.directive = directive_for(s.condition.kind);
  pc.map = MapKnowledge::for_role(map, pc.bot_role);
  pc.history = game.transcript;
  pc.opening = opening;
  for (auto it = game.transcript.rbegin(); it != game.transcript.rend(); ++it) {
    if (it->speaker == Speaker::human) {
      pc.latest_human = it->text;
      break;
    }
  }
  if (!game.avatar_trace.empty()) pc.avatar = game.avatar_trace.back().cell;

  SeededRandom before = live.rng;
  DialogState state(game.transcript);
  BotTurn turn = bot_turn(*res_.backend, pc, s.condition, state, *res_.analyzer, *res_.translator, live.rng);

  Millis now = rel_now(live);
  if (now - game.started_at >= kGameTimeLimit) {
    // The reply arrived after the deadline: drop it, and its draws, so the
    // log still replays.
    live.rng = before;
    check_time(live, out);
    return;
  }
  std::vector<Step> moves = turn.moves;
  record(live, bot_utterance_event(turn.final_text, turn.raw_text, turn.degraded, std::move(moves), now));
  const GameRecord& after = s.games[gi];
  auto it = std::find_if(after.transcript.rbegin(), after.transcript.rend(),
                         [](const Utterance& u) { return u.speaker == Speaker::bot; });
  emit(live, MessageType::chat_recv, chat_payload(*it, gi), out);
  if (!turn.moves.empty() && s.current_index() == gi && s.stage == Stage::playing) {
    emit(live, MessageType::game_state, state_payload(live), out);
  }
  after_state_change(live, gi, Stage::playing, out);
}

std::vector<WireMessage> SessionService::process(Live& live, const WireMessage& in) {
  std::vector<WireMessage> out;
  auto fail = [&](const char* code, const std::string& message) {
    emit(live, MessageType::error, {{"code", code}, {"message", message}, {"in_reply_to", in.seq}}, &out);
    return out;
  };

  if (in.type == MessageType::join) {
    std::string token = in.payload.value("token", std::string());
    if (token != token_for(live.id)) return fail("bad_token", "session token does not match");
  }
  if (in.seq <= live.in_seq) {
    return fail("stale_seq", "seq " + std::to_string(in.seq) + " is not after " + std::to_string(live.in_seq));
  }
  live.in_seq = in.seq;
  check_time(live, &out);
  Session& s = *live.session;

  switch (in.type) {
    case MessageType::join: {
      std::uint64_t last_seen = 0;
      if (auto it = in.payload.find("last_seen_seq"); it != in.payload.end() && it->is_number_integer() && it->get<std::int64_t>() > 0) {
        last_seen = it->get<std::uint64_t>();
      }
      if (last_seen > live.out_seq) last_seen = 0;  // the service restarted; resend the fresh stream
      for (const auto& m : live.outbox) {
        if (m.seq <= last_seen) continue;
        if (std::any_of(out.begin(), out.end(), [&](const WireMessage& o) { return o.seq == m.seq; })) continue;
        if (live.listener) live.listener(m);
        out.push_back(m);
      }
      std::sort(out.begin(), out.end(), [](const WireMessage& a, const WireMessage& b) { return a.seq < b.seq; });
      return out;
    }
    case MessageType::chat_send: {
      if (s.stage != Stage::playing) return fail("not_playing", "chat is closed outside a game");
      auto text_it = in.payload.find("text");
      if (text_it == in.payload.end() || !text_it->is_string()) return fail("bad_message", "chat_send needs 'text'");
      std::string text = trimmed(text_it->get<std::string>());
      if (text.empty()) return fail("empty_text", "message is empty");
      if (!s.current_game().active()) return fail("game_closed", "the game is over");
      int gi = s.current_index();
      record(live, human_utterance_event(text, rel_now(live)));
      emit(live, MessageType::chat_recv, chat_payload(s.games[gi].transcript.back(), gi), &out);
      bot_reply(live, &out, false);
      return out;
    }
    case MessageType::move: {
      if (s.stage != Stage::playing) return fail("not_playing", "no game is running");
      GameRecord& game = s.current_game();
      if (game.human_role != Role::navigator) return fail("not_navigator", "only the navigator moves the avatar");
      auto step = parse_step(in.payload.value("step", std::string()));
      if (!step) return fail("bad_message", "move needs 'step' of up, down, left or right");
      int gi = s.current_index();
      std::size_t before = game.avatar_trace.size();
      record(live, move_event(*step, rel_now(live)));
      bool moved = s.games[gi].avatar_trace.size() > before;
      if (s.current_index() == gi && s.stage == Stage::playing) {
        json st = state_payload(live);
        st["last_move"] = {{"step", std::string(to_string(*step))}, {"accepted", moved}};
        emit(live, MessageType::game_state, std::move(st), &out);
      }
      after_state_change(live, gi, Stage::playing, &out);
      return out;
    }
    case MessageType::questionnaire_submit: {
      if (s.stage != Stage::questionnaire) return fail("no_questionnaire", "no questionnaire is open");
      QuestionnaireResponse r;
      try {
        r.task_enjoy = in.payload.at("task_enjoy").get<int>();
        r.task_success = in.payload.at("task_success").get<int>();
        r.difficult_comm = in.payload.at("difficult_comm").get<int>();
        r.difficult_ins = in.payload.at("difficult_ins").get<int>();
        if (auto b = in.payload.find("background"); b != in.payload.end()) {
          r.background = b->get<std::map<std::string, std::string>>();
        }
        r.validate();
      } catch (const std::exception& e) {
        return fail("bad_questionnaire", e.what());
      }
      record(live, questionnaire_event(std::move(r), rel_now(live)));
      after_state_change(live, s.current_index(), Stage::questionnaire, &out);
      return out;
    }
    default:
      return fail("bad_message", "unexpected message type '" + std::string(to_string(in.type)) + "'");
  }
}

json SessionService::config_payload(const Live& live) const {
  const Session& s = *live.session;
  json j = {{"stage", std::string(to_string(s.stage))},
            {"games_total", kGamesPerSession},
            {"game_index", s.current_index()},
            {"time_limit_ms", kGameTimeLimit.count()},
            {"questionnaire_mode", std::string(to_string(s.questionnaire_mode))}};
  if (s.stage == Stage::playing) {
    const GameRecord& g = s.current_game();
    j["human_role"] = std::string(to_string(g.human_role));
    j["bot_role"] = std::string(to_string(other_role(g.human_role)));
    j["map"] = map_view(res_.maps->at(g.map_id), g.human_role);
  } else if (s.stage == Stage::questionnaire) {
    json items = json::array();
    for (const char* item : kQuestionnaireItems) items.push_back(item);
    j["questionnaire"] = {
        {"game_index", s.questionnaire_mode == QuestionnaireMode::per_game ? s.current_index() : -1},
        {"items", std::move(items)},
        {"min", 0},
        {"max", 100}};
  }
  return j;
}

json SessionService::state_payload(const Live& live) const {
  const GameRecord& g = live.session->current_game();
  Millis elapsed = g.active() ? std::min(rel_now(live) - g.started_at, kGameTimeLimit) : g.ended_at - g.started_at;
  json j = {{"game_index", live.session->current_index()},
            {"status", std::string(to_string(g.status))},
            {"avatar", cell_json(g.avatar_trace.back().cell)},
            {"trace_length", g.avatar_trace.size()},
            {"elapsed_ms", elapsed.count()},
            {"remaining_ms", (kGameTimeLimit - elapsed).count()}};
  return j;
}

json SessionService::chat_payload(const Utterance& u, int game_index) const {
  json j = {{"speaker", std::string(to_string(u.speaker))},
            {"text", u.text},
            {"label", std::string(to_string(u.label))},
            {"timestamp_ms", u.timestamp.count()},
            {"game_index", game_index}};
  if (u.speaker == Speaker::bot) {
    j["raw_sha256"] = sha256_hex(u.backend_text);
    j["degraded"] = u.degraded;
  }
  return j;
}

}  // namespace mapcs

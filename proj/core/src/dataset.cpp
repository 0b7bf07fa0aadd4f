#include "mapcs/dataset.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "mapcs/noun_phrase.hpp"

namespace mapcs {

using nlohmann::json;

namespace {

template <typename T>
bool contains(const std::vector<T>& v, const T& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

json questionnaire_json(const QuestionnaireResponse& r) {
  return {{"game_index", r.game_index},       {"task_enjoy", r.task_enjoy},
          {"task_success", r.task_success},   {"difficult_comm", r.difficult_comm},
          {"difficult_ins", r.difficult_ins}, {"background", r.background}};
}

void write(std::ostream& out, const json& j, ExportSummary& summary) {
  out << j.dump() << '\n';
  ++summary.records;
}

void write_session(std::ostream& out, const Session& s, ExportSummary& summary) {
  std::string cond = s.condition.name();
  std::size_t completed = 0;
  for (std::size_t gi = 0; gi < s.games.size(); ++gi) {
    const GameRecord& g = s.games[gi];
    Role human = g.human_role;
    for (std::size_t ui = 0; ui < g.transcript.size(); ++ui) {
      const Utterance& u = g.transcript[ui];
      json body = utterance_to_json(u);
      json rec = {{"record", "utterance"},
                  {"session_id", s.session_id},
                  {"condition", cond},
                  {"game_index", gi},
                  {"map_id", g.map_id},
                  {"human_role", std::string(to_string(human))},
                  {"speaker_role",
                   std::string(to_string(u.speaker == Speaker::human ? human : other_role(human)))},
                  {"utterance_index", ui}};
      rec.update(body);
      write(out, rec, summary);
    }
    if (g.completed()) ++completed;
    json trace = json::array();
    for (const auto& p : g.avatar_trace) trace.push_back({p.cell.x, p.cell.y, p.t.count()});
    json route = g.route ? json{{"raw_dtw_cost", g.route->raw_dtw_cost}, {"normalized", g.route->normalized}} : json();
    write(out,
          {{"record", "game"},
           {"session_id", s.session_id},
           {"condition", cond},
           {"game_index", gi},
           {"map_id", g.map_id},
           {"human_role", std::string(to_string(human))},
           {"status", std::string(to_string(g.status))},
           {"completed", g.completed()},
           {"started_at_ms", g.started_at.count()},
           {"ended_at_ms", g.ended_at.count()},
           {"duration_s", g.duration_s()},
           {"n_utterances", g.transcript.size()},
           {"route", route},
           {"trace", std::move(trace)}},
          summary);
  }
  json qs = json::array();
  for (const auto& q : s.questionnaires) qs.push_back(questionnaire_json(q));
  write(out,
        {{"record", "session"},
         {"session_id", s.session_id},
         {"condition", cond},
         {"rng_seed", s.rng_seed},
         {"questionnaire_mode", std::string(to_string(s.questionnaire_mode))},
         {"map_ids", s.map_ids},
         {"n_games", s.games.size()},
         {"games_completed", completed},
         {"questionnaires", std::move(qs)}},
        summary);
}

}  // namespace

bool ExportFilter::keeps(const Session& s) const {
  if (!conditions.empty() && !contains(conditions, s.condition.name())) return false;
  if (!session_ids.empty() && !contains(session_ids, s.session_id)) return false;
  return true;
}

json dataset_header(std::size_t n_sessions) {
  return {{"record", "header"},
          {"schema", std::string(kDatasetSchema)},
          {"version", kDatasetVersion},
          {"sessions", n_sessions}};
}

ExportSummary export_sessions(std::vector<Session> sessions, std::ostream& out, const ExportFilter& filter) {
  ExportSummary summary;
  std::vector<Session> kept;
  for (auto& s : sessions) {
    if (!filter.keeps(s)) continue;
    if (s.stage != Stage::finished) {
      spdlog::warn("skipping unfinished session {} ({})", s.session_id, to_string(s.stage));
      ++summary.skipped_unfinished;
      continue;
    }
    kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(), [](const Session& a, const Session& b) { return a.session_id < b.session_id; });
  write(out, dataset_header(kept.size()), summary);
  for (const auto& s : kept) write_session(out, s, summary);
  summary.sessions = kept.size();
  return summary;
}

ExportSummary export_dataset(const SessionStore& store, const ReplayContext& ctx, std::ostream& out,
                             const ExportFilter& filter) {
  std::vector<Session> sessions;
  for (const auto& id : store.list()) {
    if (!filter.session_ids.empty() && !contains(filter.session_ids, id)) continue;
    auto log = store.load(id);
    sessions.push_back(replay(log, ctx));
  }
  return export_sessions(std::move(sessions), out, filter);
}

// ---------------------------------------------------------------- reading

namespace {

struct LineError {
  std::size_t line;
  std::string message;
};

template <typename T, typename F>
T enum_field(const json& j, const char* key, F parse) {
  auto s = j.at(key).get<std::string>();
  auto v = parse(s);
  if (!v) throw DatasetError(std::string("field '") + key + "' has unknown value '" + s + "'");
  return *v;
}

void require(const json& j, const char* key, json::value_t type) {
  auto it = j.find(key);
  if (it == j.end()) throw DatasetError(std::string("missing field '") + key + "'");
  bool ok = it->type() == type ||
            (type == json::value_t::number_integer && it->type() == json::value_t::number_unsigned) ||
            (type == json::value_t::number_float && it->is_number());
  if (!ok) throw DatasetError(std::string("field '") + key + "' has the wrong type");
}

void require_nonneg(const json& j, const char* key) {
  require(j, key, json::value_t::number_integer);
  if (j.at(key).get<std::int64_t>() < 0) throw DatasetError(std::string("field '") + key + "' is negative");
}

Utterance utterance_from(const json& j) {
  Utterance u;
  u.speaker = enum_field<Speaker>(j, "speaker", parse_speaker);
  u.text = j.at("text").get<std::string>();
  u.label = enum_field<Label>(j, "label", parse_label);
  u.timestamp = Millis{j.at("timestamp_ms").get<std::int64_t>()};
  for (const auto& t : j.at("tokens")) {
    Token tok;
    tok.surface = t.at("s").get<std::string>();
    tok.lower = tok.surface;
    std::transform(tok.lower.begin(), tok.lower.end(), tok.lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto kind = t.at("k").get<std::string>();
    if (kind == "word") tok.kind = TokenKind::word;
    else if (kind == "number") tok.kind = TokenKind::number;
    else if (kind == "punctuation") tok.kind = TokenKind::punctuation;
    else if (kind == "other") tok.kind = TokenKind::other;
    else throw DatasetError("unknown token kind '" + kind + "'");
    tok.lang = enum_field<Language>(t, "l", parse_language);
    u.tokens.push_back(std::move(tok));
  }
  for (const auto& n : j.at("noun_phrases")) {
    NounPhraseSpan np;
    np.det_index = n.at("det_index").get<std::size_t>();
    np.noun_index = n.at("noun_index").get<std::size_t>();
    if (np.noun_index >= u.tokens.size()) throw DatasetError("noun phrase index out of range");
    np.det_gender = enum_field<Gender>(n, "det_gender", parse_gender);
    np.noun_gender = enum_field<NounGender>(n, "noun_gender", parse_noun_gender);
    np.noun_lang = enum_field<Language>(n, "noun_lang", parse_language);
    np.noun_spanish_lemma = n.at("noun_spanish_lemma").get<std::string>();
    u.noun_phrases.push_back(std::move(np));
  }
  if (u.speaker == Speaker::bot) {
    u.backend_text = j.at("backend_text").get<std::string>();
    u.degraded = j.at("degraded").get<bool>();
  }
  return u;
}

void check_utterance(const json& j) {
  for (const char* k : {"session_id", "condition", "map_id", "text", "label", "speaker", "human_role", "speaker_role"}) {
    require(j, k, json::value_t::string);
  }
  require_nonneg(j, "game_index");
  require_nonneg(j, "utterance_index");
  require_nonneg(j, "timestamp_ms");
  require(j, "tokens", json::value_t::array);
  require(j, "noun_phrases", json::value_t::array);
  enum_field<Role>(j, "human_role", parse_role);
  enum_field<Role>(j, "speaker_role", parse_role);
  for (const auto& t : j.at("tokens")) {
    if (!t.is_object()) throw DatasetError("token must be an object");
    require(t, "s", json::value_t::string);
    require(t, "k", json::value_t::string);
    require(t, "l", json::value_t::string);
  }
  for (const auto& n : j.at("noun_phrases")) {
    if (!n.is_object()) throw DatasetError("noun phrase must be an object");
    require(n, "det", json::value_t::string);
    require(n, "noun", json::value_t::string);
    auto cls = n.find("mixed_class");
    if (cls == n.end()) throw DatasetError("missing field 'mixed_class'");
    if (!cls->is_null() && !(cls->is_string() && parse_mixed_np_class(cls->get<std::string>()))) {
      throw DatasetError("bad 'mixed_class'");
    }
  }
  if (enum_field<Speaker>(j, "speaker", parse_speaker) == Speaker::bot) {
    require(j, "backend_text", json::value_t::string);
    require(j, "degraded", json::value_t::boolean);
  }
  utterance_from(j);
}

void check_game(const json& j) {
  for (const char* k : {"session_id", "condition", "map_id", "human_role", "status"}) require(j, k, json::value_t::string);
  for (const char* k : {"game_index", "started_at_ms", "ended_at_ms", "n_utterances"}) require_nonneg(j, k);
  require(j, "completed", json::value_t::boolean);
  require(j, "duration_s", json::value_t::number_float);
  require(j, "trace", json::value_t::array);
  enum_field<Role>(j, "human_role", parse_role);
  auto status = j.at("status").get<std::string>();
  if (status != "completed" && status != "timed_out") throw DatasetError("game status must be completed or timed_out");
  if (j.at("completed").get<bool>() != (status == "completed")) throw DatasetError("'completed' disagrees with 'status'");
  double d = j.at("duration_s").get<double>();
  if (d < 0 || d > kGameTimeLimit.count() / 1000.0) throw DatasetError("'duration_s' outside [0, 420]");
  auto route = j.find("route");
  if (route == j.end() || !route->is_object()) throw DatasetError("missing 'route' object");
  require_nonneg(*route, "raw_dtw_cost");
  require(*route, "normalized", json::value_t::number_float);
  if (j.at("trace").empty()) throw DatasetError("empty trace");
  for (const auto& p : j.at("trace")) {
    if (!p.is_array() || p.size() != 3) throw DatasetError("trace points must be [x, y, t_ms]");
    for (const auto& v : p) {
      if (!v.is_number_integer()) throw DatasetError("trace values must be integers");
    }
  }
}

void check_session(const json& j) {
  for (const char* k : {"session_id", "condition", "questionnaire_mode"}) require(j, k, json::value_t::string);
  require(j, "rng_seed", json::value_t::number_unsigned);
  require_nonneg(j, "n_games");
  require_nonneg(j, "games_completed");
  require(j, "map_ids", json::value_t::array);
  require(j, "questionnaires", json::value_t::array);
  enum_field<QuestionnaireMode>(j, "questionnaire_mode", parse_questionnaire_mode);
  if (j.at("n_games").get<int>() != kGamesPerSession) throw DatasetError("a session has four games");
  auto ids = j.at("map_ids").get<std::vector<std::string>>();
  if (ids.size() != kGamesPerSession || std::set<std::string>(ids.begin(), ids.end()).size() != ids.size()) {
    throw DatasetError("'map_ids' must list four distinct maps");
  }
  if (j.at("questionnaires").empty()) throw DatasetError("finished session without a questionnaire");
  for (const auto& q : j.at("questionnaires")) {
    if (!q.is_object()) throw DatasetError("questionnaire must be an object");
    require(q, "game_index", json::value_t::number_integer);
    for (const char* k : {"task_enjoy", "task_success", "difficult_comm", "difficult_ins"}) {
      require(q, k, json::value_t::number_integer);
      int v = q.at(k).get<int>();
      if (v < 0 || v > 100) throw DatasetError(std::string("questionnaire item '") + k + "' outside [0, 100]");
    }
    require(q, "background", json::value_t::object);
    for (const auto& [key, value] : q.at("background").items()) {
      if (!value.is_string()) throw DatasetError("background value '" + key + "' must be a string");
    }
  }
}

void check_header(const json& j) {
  if (!j.is_object() || j.value("record", "") != "header") throw DatasetError("first record must be the header");
  auto schema = j.value("schema", "");
  int version = j.contains("version") && j.at("version").is_number_integer() ? j.at("version").get<int>() : -1;
  if (schema != kDatasetSchema) throw SchemaError(version, "unsupported dataset schema '" + schema + "'");
  if (version != kDatasetVersion) {
    throw SchemaError(version, "unsupported dataset version " + std::to_string(version) + " (this build reads version " +
                                   std::to_string(kDatasetVersion) + ")");
  }
  require_nonneg(j, "sessions");
}

/// Streams records through `on_record`, checking each one and the grouping
/// (utterances and games belong to the session that closes them).
template <typename F>
void walk(std::istream& in, F&& on_record, std::vector<LineError>* errors) {
  std::string line;
  std::size_t n = 0;
  bool header = false;
  std::size_t sessions_declared = 0;
  std::size_t sessions_seen = 0;
  std::string open_session;
  int expected_game = 0;
  std::size_t expected_utt = 0;
  auto fail = [&](const std::string& m) {
    if (!errors) throw DatasetError("line " + std::to_string(n) + ": " + m);
    errors->push_back({n, m});
  };
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) {
      fail("empty line");
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(std::string("invalid JSON: ") + e.what());
      continue;
    }
    try {
      if (!header) {
        check_header(j);
        header = true;
        sessions_declared = j.at("sessions").get<std::size_t>();
        continue;
      }
      if (!j.is_object() || !j.contains("record") || !j.at("record").is_string()) throw DatasetError("missing 'record'");
      auto kind = j.at("record").get<std::string>();
      if (kind != "utterance" && kind != "game" && kind != "session") {
        throw DatasetError("unknown record kind '" + kind + "'");
      }
      // Grouping first, so one bad field does not cascade into ordering errors.
      require(j, "session_id", json::value_t::string);
      auto sid = j.at("session_id").get<std::string>();
      if (open_session.empty()) {
        open_session = sid;
        expected_game = 0;
        expected_utt = 0;
      } else if (sid != open_session) {
        throw DatasetError("record for " + sid + " inside session " + open_session);
      }
      if (kind == "utterance") {
        require_nonneg(j, "game_index");
        require_nonneg(j, "utterance_index");
        bool in_order = j.at("game_index").get<int>() == expected_game &&
                        j.at("utterance_index").get<std::size_t>() == expected_utt;
        ++expected_utt;
        if (!in_order) throw DatasetError("utterance out of order");
        check_utterance(j);
      } else if (kind == "game") {
        require_nonneg(j, "game_index");
        require_nonneg(j, "n_utterances");
        bool in_order = j.at("game_index").get<int>() == expected_game;
        bool count_ok = j.at("n_utterances").get<std::size_t>() == expected_utt;
        ++expected_game;
        expected_utt = 0;
        if (!in_order) throw DatasetError("game out of order");
        if (!count_ok) throw DatasetError("'n_utterances' mismatch");
        check_game(j);
      } else {
        bool complete = expected_game == kGamesPerSession && expected_utt == 0;
        open_session.clear();
        ++sessions_seen;
        if (!complete) throw DatasetError("session closed early");
        check_session(j);
      }
      on_record(kind, j);
    } catch (const SchemaError&) {
      throw;
    } catch (const DatasetError& e) {
      fail(e.what());
    } catch (const json::exception& e) {
      fail(e.what());
    }
  }
  if (!header) {
    if (!errors) throw DatasetError("dataset has no header");
    errors->push_back({0, "dataset has no header"});
    return;
  }
  if (!open_session.empty()) fail("session " + open_session + " has no session record");
  if (sessions_seen != sessions_declared) {
    fail("header declares " + std::to_string(sessions_declared) + " sessions, found " + std::to_string(sessions_seen));
  }
}

}  // namespace

Dataset read_dataset(std::istream& in) {
  Dataset ds;
  Session current;
  walk(
      in,
      [&](const std::string& kind, const json& j) {
        if (kind == "utterance") {
          auto gi = j.at("game_index").get<std::size_t>();
          if (current.games.size() <= gi) current.games.resize(gi + 1);
          current.games[gi].transcript.push_back(utterance_from(j));
        } else if (kind == "game") {
          auto gi = j.at("game_index").get<std::size_t>();
          if (current.games.size() <= gi) current.games.resize(gi + 1);
          GameRecord& g = current.games[gi];
          g.map_id = j.at("map_id").get<std::string>();
          g.human_role = enum_field<Role>(j, "human_role", parse_role);
          g.status = j.at("completed").get<bool>() ? GameStatus::completed : GameStatus::timed_out;
          g.started_at = Millis{j.at("started_at_ms").get<std::int64_t>()};
          g.ended_at = Millis{j.at("ended_at_ms").get<std::int64_t>()};
          const auto& r = j.at("route");
          g.route = RouteScore{r.at("raw_dtw_cost").get<std::int64_t>(), r.at("normalized").get<double>()};
          for (const auto& p : j.at("trace")) {
            g.avatar_trace.push_back({Cell{p[0].get<int>(), p[1].get<int>()}, Millis{p[2].get<std::int64_t>()}});
          }
        } else {
          current.session_id = j.at("session_id").get<std::string>();
          try {
            current.condition = StrategyConfig::parse(j.at("condition").get<std::string>());
          } catch (const ConfigError& e) {
            throw DatasetError(e.what());
          }
          current.rng_seed = j.at("rng_seed").get<std::uint64_t>();
          current.condition.rng_seed = current.rng_seed;
          current.questionnaire_mode = enum_field<QuestionnaireMode>(j, "questionnaire_mode", parse_questionnaire_mode);
          current.map_ids = j.at("map_ids").get<std::vector<std::string>>();
          current.stage = Stage::finished;
          for (const auto& q : j.at("questionnaires")) {
            QuestionnaireResponse r;
            r.game_index = q.at("game_index").get<int>();
            r.task_enjoy = q.at("task_enjoy").get<int>();
            r.task_success = q.at("task_success").get<int>();
            r.difficult_comm = q.at("difficult_comm").get<int>();
            r.difficult_ins = q.at("difficult_ins").get<int>();
            r.background = q.at("background").get<std::map<std::string, std::string>>();
            current.questionnaires.push_back(std::move(r));
          }
          ds.sessions.push_back(std::move(current));
          current = Session{};
        }
      },
      nullptr);
  return ds;
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_dataset(in);
}

std::vector<std::string> validate_dataset(std::istream& in) {
  std::vector<LineError> errors;
  try {
    walk(in, [](const std::string&, const json&) {}, &errors);
  } catch (const SchemaError& e) {
    return {std::string("line 1: ") + e.what()};
  }
  std::vector<std::string> out;
  for (const auto& e : errors) out.push_back("line " + std::to_string(e.line) + ": " + e.message);
  return out;
}

}  // namespace mapcs

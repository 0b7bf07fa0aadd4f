#include "mapcs/game.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "mapcs/util/io.hpp"

namespace mapcs {

using nlohmann::json;

std::string_view to_string(Role r) { return r == Role::instructor ? "instructor" : "navigator"; }

std::optional<Role> parse_role(std::string_view s) {
  if (s == "instructor") return Role::instructor;
  if (s == "navigator") return Role::navigator;
  return std::nullopt;
}

std::string_view to_string(GameStatus s) {
  switch (s) {
    case GameStatus::active: return "active";
    case GameStatus::completed: return "completed";
    case GameStatus::timed_out: return "timed_out";
  }
  return "active";
}

std::string_view to_string(MoveResult r) {
  switch (r) {
    case MoveResult::moved: return "moved";
    case MoveResult::out_of_bounds: return "out_of_bounds";
    case MoveResult::reached_goal: return "reached_goal";
  }
  return "moved";
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::playing: return "playing";
    case Stage::questionnaire: return "questionnaire";
    case Stage::finished: return "finished";
  }
  return "playing";
}

std::string_view to_string(QuestionnaireMode m) { return m == QuestionnaireMode::once ? "once" : "per_game"; }

std::optional<QuestionnaireMode> parse_questionnaire_mode(std::string_view s) {
  if (s == "once") return QuestionnaireMode::once;
  if (s == "per_game") return QuestionnaireMode::per_game;
  return std::nullopt;
}

namespace {

std::string cell_str(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

Cell cell_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw MapError("cell must be [x, y], got " + j.dump());
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

json cell_json(Cell c) { return json::array({c.x, c.y}); }

}  // namespace

const Landmark* GameMap::landmark_at(Cell c) const {
  for (const auto& l : landmarks) {
    if (l.cell == c) return &l;
  }
  return nullptr;
}

void GameMap::validate(const Lexicon* lex) const {
  auto fail = [this](const std::string& why) { throw MapError("map '" + map_id + "': " + why); };
  if (map_id.empty()) throw MapError("map without an id");
  if (width <= 0 || height <= 0) fail("grid must have positive size");
  if (target_path.empty()) fail("empty target path");
  if (target_path.front() != start) fail("target path does not begin at the start cell");
  if (target_path.back() != end) fail("target path does not finish at the end cell");
  if (start.y != 0) fail("start cell must lie on the top row");
  for (std::size_t i = 0; i < target_path.size(); ++i) {
    if (!contains(target_path[i])) fail("path cell " + cell_str(target_path[i]) + " is off the grid");
    if (i > 0 && !adjacent(target_path[i - 1], target_path[i])) {
      fail("path jumps from " + cell_str(target_path[i - 1]) + " to " + cell_str(target_path[i]));
    }
  }
  std::set<Cell> seen;
  for (const auto& l : landmarks) {
    if (!contains(l.cell)) fail("landmark '" + l.spanish_name + "' is off the grid");
    if (!seen.insert(l.cell).second) fail("two landmarks share cell " + cell_str(l.cell));
    if (lex) {
      const auto* e = lex->lookup_es(l.spanish_name);
      if (!e) fail("landmark '" + l.spanish_name + "' is not in the noun dictionary");
      if (e->spanish_gender != l.gender) fail("landmark '" + l.spanish_name + "' has the wrong gender");
      if (e->english_lemma != l.english_name) {
        fail("landmark '" + l.spanish_name + "' translates to '" + e->english_lemma + "', not '" + l.english_name + "'");
      }
    }
  }
}

GameMap GameMap::from_json(const json& j) {
  try {
    GameMap m;
    m.map_id = j.at("map_id").get<std::string>();
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.start = cell_from(j.at("start"));
    m.end = cell_from(j.at("end"));
    for (const auto& c : j.at("target_path")) m.target_path.push_back(cell_from(c));
    for (const auto& l : j.at("landmarks")) {
      auto g = parse_gender(l.at("gender").get<std::string>());
      if (!g) throw MapError("unknown landmark gender " + l.at("gender").dump());
      m.landmarks.push_back(
          {l.at("english").get<std::string>(), l.at("spanish").get<std::string>(), *g, cell_from(l.at("cell"))});
    }
    return m;
  } catch (const json::exception& e) {
    throw MapError(std::string("malformed map: ") + e.what());
  }
}

GameMap GameMap::load(const std::filesystem::path& path, const Lexicon* lex) {
  json j;
  try {
    j = json::parse(util::read_file(path));
  } catch (const json::parse_error& e) {
    throw MapError(path.string() + ": " + e.what());
  }
  auto m = from_json(j);
  m.validate(lex);
  return m;
}

json GameMap::to_json() const {
  json lm = json::array();
  for (const auto& l : landmarks) {
    lm.push_back({{"english", l.english_name},
                  {"spanish", l.spanish_name},
                  {"gender", std::string(to_string(l.gender))},
                  {"cell", cell_json(l.cell)}});
  }
  json path = json::array();
  for (auto c : target_path) path.push_back(cell_json(c));
  return {{"map_id", map_id}, {"width", width},          {"height", height},   {"start", cell_json(start)},
          {"end", cell_json(end)}, {"target_path", path}, {"landmarks", lm}};
}

MapCatalog::MapCatalog(std::vector<GameMap> maps) {
  for (auto& m : maps) {
    std::string id = m.map_id;
    if (!by_id_.emplace(id, std::move(m)).second) throw MapError("duplicate map id '" + id + "'");
  }
}

MapCatalog MapCatalog::load_dir(const std::filesystem::path& dir, const Lexicon* lex) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<GameMap> maps;
  for (const auto& f : files) maps.push_back(GameMap::load(f, lex));
  return MapCatalog(std::move(maps));
}

const GameMap& MapCatalog::at(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw MapError("unknown map '" + std::string(id) + "'");
  return it->second;
}

std::vector<std::string> MapCatalog::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, m] : by_id_) out.push_back(id);
  return out;
}

double GameRecord::duration_s() const {
  return static_cast<double>((ended_at - started_at).count()) / 1000.0;
}

std::vector<Cell> GameRecord::trace_cells() const {
  std::vector<Cell> out;
  out.reserve(avatar_trace.size());
  for (const auto& p : avatar_trace) out.push_back(p.cell);
  return out;
}

namespace {

void close_game(GameRecord& g, const GameMap& map, GameStatus status, Millis at) {
  g.status = status;
  g.ended_at = at;
  auto cells = g.trace_cells();
  g.route = dtw_route_distance(cells, map.target_path);
}

}  // namespace

GameRecord start_game(const GameMap& map, Role human_role, Millis now) {
  GameRecord g;
  g.map_id = map.map_id;
  g.human_role = human_role;
  g.started_at = now;
  g.avatar_trace.push_back({map.start, now});
  return g;
}

MoveResult move_avatar(GameRecord& game, const GameMap& map, Step step, Millis now) {
  if (!game.active()) throw GameStateError("move after the game closed");
  if (now - game.started_at >= kGameTimeLimit) throw GameStateError("move after the time limit");
  Cell next = neighbor(game.avatar_trace.back().cell, step);
  if (!map.contains(next)) return MoveResult::out_of_bounds;
  game.avatar_trace.push_back({next, now});
  if (next == map.end) {
    close_game(game, map, GameStatus::completed, now);
    return MoveResult::reached_goal;
  }
  return MoveResult::moved;
}

bool check_timeout(GameRecord& game, const GameMap& map, Millis now) {
  if (!game.active() || now - game.started_at < kGameTimeLimit) return false;
  close_game(game, map, GameStatus::timed_out, game.started_at + kGameTimeLimit);
  return true;
}

void QuestionnaireResponse::validate() const {
  for (int v : {task_enjoy, task_success, difficult_comm, difficult_ins}) {
    if (v < 0 || v > 100) throw GameStateError("questionnaire values must lie in [0, 100]");
  }
}

GameRecord& Session::current_game() {
  if (games.empty()) throw GameStateError("session has no game");
  return games.back();
}

const GameRecord& Session::current_game() const {
  if (games.empty()) throw GameStateError("session has no game");
  return games.back();
}

Session start_session(std::string session_id, StrategyConfig condition, std::uint64_t rng_seed,
                      std::vector<std::string> map_ids, QuestionnaireMode mode, const MapCatalog& maps, Millis now) {
  if (map_ids.size() != kGamesPerSession) throw GameStateError("a session needs exactly four maps");
  std::set<std::string> distinct(map_ids.begin(), map_ids.end());
  if (distinct.size() != map_ids.size()) throw GameStateError("session maps must be distinct");
  for (const auto& id : map_ids) {
    if (!maps.contains(id)) throw GameStateError("unknown map '" + id + "'");
  }
  condition.validate();
  Session s;
  s.session_id = std::move(session_id);
  s.condition = condition;
  s.rng_seed = rng_seed;
  s.questionnaire_mode = mode;
  s.map_ids = std::move(map_ids);
  s.games.push_back(start_game(maps.at(s.map_ids[0]), kRoleSequence[0], now));
  return s;
}

void advance_session(Session& s, const MapCatalog& maps, Millis now) {
  if (s.stage != Stage::playing) throw GameStateError("session is not in play");
  if (s.current_game().active()) throw GameStateError("current game is still running");
  bool last = s.games.size() == kGamesPerSession;
  if (last || s.questionnaire_mode == QuestionnaireMode::per_game) {
    s.stage = Stage::questionnaire;
    return;
  }
  std::size_t i = s.games.size();
  s.games.push_back(start_game(maps.at(s.map_ids[i]), kRoleSequence[i], now));
}

void submit_questionnaire(Session& s, QuestionnaireResponse response, const MapCatalog& maps, Millis now) {
  if (s.stage != Stage::questionnaire) throw GameStateError("no questionnaire is open");
  response.validate();
  response.game_index = s.questionnaire_mode == QuestionnaireMode::per_game ? s.current_index() : -1;
  s.questionnaires.push_back(std::move(response));
  if (s.games.size() == kGamesPerSession) {
    s.stage = Stage::finished;
    return;
  }
  std::size_t i = s.games.size();
  s.games.push_back(start_game(maps.at(s.map_ids[i]), kRoleSequence[i], now));
  s.stage = Stage::playing;
}

}  // namespace mapcs

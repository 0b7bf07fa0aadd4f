#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mapcs/dtw.hpp"
#include "mapcs/grid.hpp"
#include "mapcs/lexicon.hpp"
#include "mapcs/strategy.hpp"
#include "mapcs/text.hpp"

namespace mapcs {

/// The human participant's role in one game; the bot takes the other one.
enum class Role { instructor, navigator };

std::string_view to_string(Role r);
std::optional<Role> parse_role(std::string_view s);
inline Role other_role(Role r) { return r == Role::instructor ? Role::navigator : Role::instructor; }

class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Landmark {
  std::string english_name;
  std::string spanish_name;
  Gender gender = Gender::masculine;
  Cell cell;
};

struct GameMap {
  std::string map_id;
  int width = 20;
  int height = 20;
  std::vector<Landmark> landmarks;
  Cell start;
  Cell end;
  std::vector<Cell> target_path;

  bool contains(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  const Landmark* landmark_at(Cell c) const;

  /// Throws MapError on a broken path, out-of-grid cells, a start off the
  /// top row, or (when a lexicon is given) landmark names the lexicon does
  /// not know with that gender and translation.
  void validate(const Lexicon* lex = nullptr) const;

  static GameMap from_json(const nlohmann::json& j);
  static GameMap load(const std::filesystem::path& path, const Lexicon* lex = nullptr);
  nlohmann::json to_json() const;
};

/// All bundled maps, keyed by id.
class MapCatalog {
 public:
  MapCatalog() = default;
  explicit MapCatalog(std::vector<GameMap> maps);
  /// Every *.json file in a directory, validated against the lexicon.
  static MapCatalog load_dir(const std::filesystem::path& dir, const Lexicon* lex = nullptr);

  const GameMap& at(std::string_view id) const;
  bool contains(std::string_view id) const { return by_id_.count(std::string(id)) > 0; }
  std::vector<std::string> ids() const;
  std::size_t size() const { return by_id_.size(); }

 private:
  std::map<std::string, GameMap, std::less<>> by_id_;
};

inline constexpr Millis kGameTimeLimit{420'000};
inline constexpr int kGamesPerSession = 4;
inline constexpr std::array<Role, kGamesPerSession> kRoleSequence = {Role::instructor, Role::navigator,
                                                                      Role::instructor, Role::navigator};

/// Raised for operations the current game or session stage does not allow.
class GameStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class GameStatus { active, completed, timed_out };
std::string_view to_string(GameStatus s);

struct TracePoint {
  Cell cell;
  Millis t{0};
  bool operator==(const TracePoint&) const = default;
};

struct GameRecord {
  std::string map_id;
  Role human_role = Role::instructor;
  std::vector<Utterance> transcript;
  std::vector<TracePoint> avatar_trace;  // the navigator's path, starting at the map's start
  Millis started_at{0};
  Millis ended_at{0};
  GameStatus status = GameStatus::active;
  std::optional<RouteScore> route;  // set when the game closes

  bool active() const { return status == GameStatus::active; }
  bool completed() const { return status == GameStatus::completed; }
  double duration_s() const;
  std::vector<Cell> trace_cells() const;
};

GameRecord start_game(const GameMap& map, Role human_role, Millis now);

enum class MoveResult { moved, out_of_bounds, reached_goal };
std::string_view to_string(MoveResult r);

/// Advances the navigator's avatar one cell. Out-of-grid steps leave the
/// trace untouched. Reaching the end cell closes the game as completed.
/// Throws GameStateError if the game is closed or its time is up.
MoveResult move_avatar(GameRecord& game, const GameMap& map, Step step, Millis now);

/// Closes the game as timed out once the limit has elapsed. Returns whether
/// this call closed it.
bool check_timeout(GameRecord& game, const GameMap& map, Millis now);

enum class Stage { playing, questionnaire, finished };
std::string_view to_string(Stage s);

enum class QuestionnaireMode { once, per_game };
std::string_view to_string(QuestionnaireMode m);
std::optional<QuestionnaireMode> parse_questionnaire_mode(std::string_view s);

struct QuestionnaireResponse {
  int game_index = -1;  // -1 for the end-of-session questionnaire
  int task_enjoy = 0;
  int task_success = 0;
  int difficult_comm = 0;
  int difficult_ins = 0;
  std::map<std::string, std::string> background;  // free-form language history

  /// Throws GameStateError unless every item is an integer in [0, 100].
  void validate() const;
  bool operator==(const QuestionnaireResponse&) const = default;
};

struct Session {
  std::string session_id;
  StrategyConfig condition;
  std::uint64_t rng_seed = 0;
  QuestionnaireMode questionnaire_mode = QuestionnaireMode::once;
  std::vector<std::string> map_ids;  // one per game, pairwise distinct
  std::vector<GameRecord> games;     // games started so far
  Stage stage = Stage::playing;
  std::vector<QuestionnaireResponse> questionnaires;

  GameRecord& current_game();
  const GameRecord& current_game() const;
  int current_index() const { return static_cast<int>(games.size()) - 1; }
};

/// A session with its first game started. Throws GameStateError unless
/// exactly four distinct known maps are given.
Session start_session(std::string session_id, StrategyConfig condition, std::uint64_t rng_seed,
                      std::vector<std::string> map_ids, QuestionnaireMode mode, const MapCatalog& maps, Millis now);

/// Moves past the closed current game: to the next game, or to the
/// questionnaire after the last game (after every game in per-game mode).
void advance_session(Session& s, const MapCatalog& maps, Millis now);

/// Records a questionnaire and continues: per-game mode resumes play until
/// the fourth game's questionnaire; both modes then finish the session.
void submit_questionnaire(Session& s, QuestionnaireResponse response, const MapCatalog& maps, Millis now);

}  // namespace mapcs

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mapcs/analyzer.hpp"
#include "mapcs/game.hpp"
#include "mapcs/random.hpp"
#include "mapcs/strategy.hpp"
#include "mapcs/translator.hpp"

namespace mapcs {

enum class LanguageDirective { none, spanish_only };
std::string_view to_string(LanguageDirective d);

/// Insertional conditions ask the backend for Spanish only.
LanguageDirective directive_for(StrategyKind kind);

/// What the bot may know about the map. The target path is present only when
/// the bot is the instructor.
struct MapKnowledge {
  std::string map_id;
  int width = 0;
  int height = 0;
  Cell start;
  std::vector<Landmark> landmarks;
  std::vector<Cell> target_path;

  static MapKnowledge for_role(const GameMap& map, Role bot_role);
};

struct PromptContext {
  Role bot_role = Role::instructor;
  LanguageDirective directive = LanguageDirective::none;
  MapKnowledge map;
  std::span<const Utterance> history;  // the current game so far
  std::string latest_human;            // empty on the bot's opening turn
  bool opening = false;                // first bot turn of the game
  std::optional<Cell> avatar;          // the navigator's avatar, as shown on the shared board
};

class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stage one of a bot turn: produce a raw reply, which may embed move
/// directives. Implementations must tolerate concurrent calls.
class AgentBackend {
 public:
  virtual ~AgentBackend() = default;
  virtual std::string generate(const PromptContext& ctx) = 0;
};

struct ParsedReply {
  std::string text;  // directives removed, whitespace tidied
  std::vector<Step> steps;
};

/// Extracts directives of the exact form «MOVE:up|down|left|right».
/// Malformed directives stay in the text.
ParsedReply parse_move_commands(std::string_view raw);
std::string move_directive(Step s);

struct Direction {
  Step step;
  int count = 1;
  bool operator==(const Direction&) const = default;
};

/// Reads movement instructions of the form "<direction> <count>" or
/// "<count> ... <direction>" (up to four words apart) in English or Spanish (baja dos, go down three
/// steps, tres a la derecha). A direction without a count moves one cell.
std::vector<Direction> parse_directions(std::string_view text);

/// Numeric value of a count word or digit string (1..99).
std::optional<int> parse_count_word(std::string_view lower);

/// Role-specific prompt files with {{landmarks}}, {{target_path}},
/// {{history}} and {{language_directive}} placeholders.
class PromptTemplates {
 public:
  PromptTemplates(std::string instructor, std::string navigator);
  /// Throws std::runtime_error if the navigator template mentions the target
  /// path or the instructor template omits it.
  static PromptTemplates load(const std::filesystem::path& dir);

  std::string render(const PromptContext& ctx) const;
  const std::string& raw(Role bot_role) const { return bot_role == Role::instructor ? instructor_ : navigator_; }

 private:
  std::string instructor_;
  std::string navigator_;
};

std::string render_history(std::span<const Utterance> history);

class WelcomeMessages {
 public:
  explicit WelcomeMessages(std::vector<std::string> pool);
  static WelcomeMessages load(const std::filesystem::path& path);

  const std::string& pick(SeededRandom& rng) const { return pool_[rng.index(pool_.size())]; }
  const std::vector<std::string>& pool() const { return pool_; }

 private:
  std::vector<std::string> pool_;
};

/// Used when the backend fails twice in a row.
inline constexpr std::string_view kFallbackLine = "Perdón, I lost my train of thought. ¿Puedes repetir?";

/// The scripted instructor's next line from the avatar's cell: the next
/// straight run of the target path with the landmark it ends on, a
/// correction back to the route, or the goal notice. `count_delta` skews the
/// stated count (never below one).
std::string route_instruction(const MapKnowledge& map, Cell avatar, bool spanish, bool opening, int count_delta = 0);

/// Deterministic rule-based backend. As instructor it walks the target path
/// one straight run per turn, naming the landmark where the run ends; as
/// navigator it follows parsed directions with move directives.
class ScriptedBot final : public AgentBackend {
 public:
  explicit ScriptedBot(std::uint64_t seed = 0) : seed_(seed) {}
  std::string generate(const PromptContext& ctx) override;

 private:
  std::uint64_t seed_;
};

struct BotTurn {
  std::string raw_text;    // backend output before any processing
  std::string final_text;  // after directive stripping and the strategy
  std::vector<Step> moves;
  bool degraded = false;
  bool translated = false;
};

/// Stage one (backend, one retry, then the fallback line) followed by stage
/// two (strategy). Moves are returned only when the bot is the navigator.
BotTurn bot_turn(AgentBackend& backend, const PromptContext& ctx, const StrategyConfig& cfg, const DialogState& state,
                 const TextAnalyzer& analyzer, const Translator& tr, SeededRandom& rng);

}  // namespace mapcs

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mapcs/service.hpp"

namespace mapcs {

struct HumanProfile {
  double miscount_probability = 0.05;  // instructor states a run one cell off
  double detour_probability = 0.1;     // navigator takes one stray step before following
  double entrain_probability = 0.5;    // copy the bot's last unilingual language
  double switch_probability = 0.2;     // otherwise flip own language
  double insertion_probability = 0.1;  // English landmark noun inside a Spanish instruction
  int stall_game = -1;                 // game index in which the human goes silent
};

/// Rule-based stand-in for a participant. It sees only what a client sees:
/// the server frames. `next` returns the next client frame (without seq),
/// or nothing when it is waiting on the server or the clock.
class ScriptedHuman {
 public:
  struct Action {
    WireMessage message;
    Millis think_time{0};
  };

  ScriptedHuman(HumanProfile profile, std::uint64_t seed);

  void observe(const WireMessage& m);
  std::optional<Action> next();
  bool finished() const { return stage_ == "finished"; }

 private:
  bool speak_spanish();
  Action say(std::string text, Millis think);

  HumanProfile profile_;
  SeededRandom rng_;
  std::string stage_ = "playing";
  int game_index_ = 0;
  Role role_ = Role::instructor;
  MapKnowledge map_;
  Cell avatar_;
  bool spanish_ = false;
  std::optional<Label> last_bot_label_;
  std::string last_bot_text_;
  bool bot_spoke_ = false;       // a bot line arrived since the human last spoke
  bool moved_since_chat_ = false;
  std::vector<Step> pending_;
  int turns_in_game_ = 0;
};

/// Plays one created session to the end through the service, advancing the
/// manual clock by the human's think time (and to the deadline while the
/// human stalls). Returns the number of client frames sent.
std::size_t run_scripted_session(SessionService& service, ManualClock& clock, const CreatedSession& created,
                                 const HumanProfile& profile, std::uint64_t seed);

/// Bundled analyzer, phrase-table translator, maps and welcome lines from a
/// resource directory, with the scripted backend.
ServiceResources load_scripted_resources(const std::filesystem::path& resource_dir, std::uint64_t bot_seed = 0);

struct SimulationOptions {
  std::vector<StrategyConfig> conditions;
  int n_sessions = 10;  // per condition
  std::uint64_t seed = 0;
  QuestionnaireMode questionnaire_mode = QuestionnaireMode::once;
  HumanProfile human;
};

/// Runs n_sessions scripted sessions per condition in-process against a
/// service backed by `store`. Returns the session ids in creation order.
std::vector<std::string> simulate(const ServiceResources& resources, const SimulationOptions& opts,
                                  SessionStore& store);

}  // namespace mapcs

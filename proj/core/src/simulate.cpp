#include "mapcs/simulate.hpp"

#include <spdlog/spdlog.h>

namespace mapcs {

using nlohmann::json;

namespace {

constexpr int kTurnGuard = 200;

Cell cell_from(const json& a) { return {a.at(0).get<int>(), a.at(1).get<int>()}; }

MapKnowledge knowledge_from(const json& view) {
  MapKnowledge k;
  k.map_id = view.at("map_id").get<std::string>();
  k.width = view.at("width").get<int>();
  k.height = view.at("height").get<int>();
  k.start = cell_from(view.at("start"));
  for (const auto& l : view.at("landmarks")) {
    Landmark lm;
    lm.english_name = l.at("english").get<std::string>();
    lm.spanish_name = l.at("spanish").get<std::string>();
    lm.gender = *parse_gender(l.at("gender").get<std::string>());
    lm.cell = cell_from(l.at("cell"));
    k.landmarks.push_back(std::move(lm));
  }
  if (auto p = view.find("target_path"); p != view.end()) {
    for (const auto& c : *p) k.target_path.push_back(cell_from(c));
  }
  return k;
}

Step sideways(Step s, bool flip) {
  bool vertical = s == Step::up || s == Step::down;
  if (vertical) return flip ? Step::left : Step::right;
  return flip ? Step::up : Step::down;
}

}  // namespace

ScriptedHuman::ScriptedHuman(HumanProfile profile, std::uint64_t seed)
    : profile_(profile), rng_(seed) {
  spanish_ = rng_.bernoulli(0.5);
}

void ScriptedHuman::observe(const WireMessage& m) {
  const json& p = m.payload;
  switch (m.type) {
    case MessageType::session_config: {
      auto stage = p.at("stage").get<std::string>();
      int gi = p.at("game_index").get<int>();
      if (stage == "playing" && (stage_ != "playing" || gi != game_index_ || map_.map_id.empty())) {
        role_ = *parse_role(p.at("human_role").get<std::string>());
        map_ = knowledge_from(p.at("map"));
        avatar_ = map_.start;
        pending_.clear();
        moved_since_chat_ = false;
        bot_spoke_ = false;
        turns_in_game_ = 0;
      }
      stage_ = stage;
      game_index_ = gi;
      break;
    }
    case MessageType::chat_recv:
      if (p.at("speaker") == "bot" && p.at("game_index").get<int>() == game_index_) {
        last_bot_text_ = p.at("text").get<std::string>();
        last_bot_label_ = parse_label(p.at("label").get<std::string>());
        bot_spoke_ = true;
        if (role_ == Role::navigator) {
          pending_.clear();
          auto dirs = parse_directions(last_bot_text_);
          if (!dirs.empty() && rng_.bernoulli(profile_.detour_probability)) {
            pending_.push_back(sideways(dirs.front().step, rng_.bernoulli(0.5)));
          }
          for (const auto& d : dirs) {
            for (int i = 0; i < d.count; ++i) pending_.push_back(d.step);
          }
        }
      }
      break;
    case MessageType::game_state:
      if (p.at("game_index").get<int>() == game_index_) avatar_ = cell_from(p.at("avatar"));
      break;
    default:
      break;
  }
}

bool ScriptedHuman::speak_spanish() {
  if (last_bot_label_ && is_unilingual(*last_bot_label_) && rng_.bernoulli(profile_.entrain_probability)) {
    spanish_ = *last_bot_label_ == Label::spanish;
  } else if (rng_.bernoulli(profile_.switch_probability)) {
    spanish_ = !spanish_;
  }
  return spanish_;
}

ScriptedHuman::Action ScriptedHuman::say(std::string text, Millis think) {
  Action a;
  a.message.type = MessageType::chat_send;
  a.message.payload = {{"text", std::move(text)}};
  a.think_time = think;
  bot_spoke_ = false;
  moved_since_chat_ = false;
  ++turns_in_game_;
  return a;
}

std::optional<ScriptedHuman::Action> ScriptedHuman::next() {
  if (stage_ == "finished") return std::nullopt;
  if (stage_ == "questionnaire") {
    Action a;
    a.message.type = MessageType::questionnaire_submit;
    a.message.payload = {{"task_enjoy", static_cast<int>(rng_.index(101))},
                         {"task_success", static_cast<int>(rng_.index(101))},
                         {"difficult_comm", static_cast<int>(rng_.index(101))},
                         {"difficult_ins", static_cast<int>(rng_.index(101))},
                         {"background", {{"first_language", spanish_ ? "spanish" : "english"},
                                         {"code_switches", "sometimes"}}}};
    a.think_time = Millis{30'000};
    stage_ = "submitted";
    return a;
  }
  if (stage_ != "playing") return std::nullopt;
  if (game_index_ == profile_.stall_game || turns_in_game_ >= kTurnGuard) return std::nullopt;

  if (role_ == Role::instructor) {
    // Speak at the start of the game and after each bot reply.
    if (turns_in_game_ > 0 && !bot_spoke_) return std::nullopt;
    int delta = rng_.bernoulli(profile_.miscount_probability) ? (rng_.bernoulli(0.5) ? 1 : -1) : 0;
    bool es = speak_spanish();
    std::string line = route_instruction(map_, avatar_, es, false, delta);
    if (es && rng_.bernoulli(profile_.insertion_probability)) {
      for (const auto& l : map_.landmarks) {
        auto pos = line.find(" " + l.spanish_name + ".");
        if (pos != std::string::npos) {
          line.replace(pos + 1, l.spanish_name.size(), l.english_name);
          break;
        }
      }
    }
    return say(std::move(line), Millis{8'000});
  }

  if (!pending_.empty()) {
    Action a;
    a.message.type = MessageType::move;
    a.message.payload = {{"step", std::string(to_string(pending_.front()))}};
    a.think_time = Millis{400};
    pending_.erase(pending_.begin());
    moved_since_chat_ = true;
    return a;
  }
  if (!bot_spoke_ && !moved_since_chat_) return std::nullopt;
  bool es = speak_spanish();
  if (parse_directions(last_bot_text_).empty() && !moved_since_chat_) {
    return say(es ? "No entiendo, ¿hacia dónde voy?" : "I do not understand, where do I go?", Millis{5'000});
  }
  return say(es ? "Ya estoy, ¿ahora hacia dónde?" : "I am there, what now?", Millis{4'000});
}

std::size_t run_scripted_session(SessionService& service, ManualClock& clock, const CreatedSession& created,
                                 const HumanProfile& profile, std::uint64_t seed) {
  ScriptedHuman human(profile, seed);
  std::uint64_t seq = 0;
  std::size_t sent = 0;
  auto send = [&](WireMessage m) {
    m.session_id = created.session_id;
    m.seq = ++seq;
    ++sent;
    for (const auto& r : service.handle(m)) human.observe(r);
  };
  WireMessage join;
  join.type = MessageType::join;
  join.payload = {{"token", created.token}};
  send(join);

  while (!human.finished()) {
    auto action = human.next();
    if (!action) {
      // Waiting with nothing to say: let the game clock run out.
      Session s = service.snapshot(created.session_id);
      if (s.stage != Stage::playing) break;
      clock.set(std::max(clock.now(), Millis{0}) + kGameTimeLimit);
      for (const auto& r : service.tick(created.session_id)) human.observe(r);
      continue;
    }
    clock.advance(action->think_time);
    auto late = service.tick(created.session_id);
    for (const auto& r : late) human.observe(r);
    if (!late.empty()) continue;  // the game ended while the human was typing
    send(std::move(action->message));
  }
  return sent;
}

ServiceResources load_scripted_resources(const std::filesystem::path& resource_dir, std::uint64_t bot_seed) {
  ServiceResources r;
  auto analyzer = std::make_shared<TextAnalyzer>(TextAnalyzer::load(resource_dir));
  r.analyzer = analyzer;
  r.translator = std::make_shared<PhraseTableTranslator>(
      PhraseTableTranslator::load(resource_dir / "translator" / "phrases.tsv", analyzer->shared_lexicon()));
  r.backend = std::make_shared<ScriptedBot>(bot_seed);
  r.maps = std::make_shared<MapCatalog>(MapCatalog::load_dir(resource_dir / "maps", &analyzer->lexicon()));
  r.welcome = std::make_shared<WelcomeMessages>(WelcomeMessages::load(resource_dir / "agent" / "welcome.txt"));
  return r;
}

std::vector<std::string> simulate(const ServiceResources& resources, const SimulationOptions& opts,
                                  SessionStore& store) {
  ManualClock clock;
  ServiceConfig cfg;
  cfg.conditions = opts.conditions;
  cfg.seed = opts.seed;
  cfg.questionnaire_mode = opts.questionnaire_mode;
  cfg.token_secret = "simulation";
  SessionService service(resources, cfg, store, clock);
  std::vector<std::string> ids;
  for (const auto& cond : opts.conditions) {
    for (int i = 0; i < opts.n_sessions; ++i) {
      auto created = service.create_session(cond.name());
      run_scripted_session(service, clock, created, opts.human, derive_seed(opts.seed, created.session_id + "/human"));
      ids.push_back(created.session_id);
      spdlog::debug("simulated {} ({})", created.session_id, cond.name());
    }
  }
  return ids;
}

}  // namespace mapcs

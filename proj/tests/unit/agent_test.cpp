#include <gtest/gtest.h>

#include "mapcs/agent.hpp"
#include "support.hpp"

using namespace mapcs;

namespace {

const TextAnalyzer& A() { return fixtures::analyzer(); }
const Translator& T() { return fixtures::phrase_translator(); }

const MapCatalog& maps() {
  static const MapCatalog c = MapCatalog::load_dir(fixtures::data_dir() / "maps", &A().lexicon());
  return c;
}

PromptContext context(Role bot_role, const std::vector<Utterance>& history, LanguageDirective d = LanguageDirective::none) {
  PromptContext ctx;
  ctx.bot_role = bot_role;
  ctx.directive = d;
  ctx.map = MapKnowledge::for_role(maps().at("farm"), bot_role);
  ctx.history = history;
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (it->speaker == Speaker::human) {
      ctx.latest_human = it->text;
      break;
    }
  }
  return ctx;
}

class FlakyBackend final : public AgentBackend {
 public:
  explicit FlakyBackend(int failures, std::string reply = "Gira a la derecha en el tenedor")
      : failures_(failures), reply_(std::move(reply)) {}
  std::string generate(const PromptContext&) override {
    ++calls;
    if (failures_-- > 0) throw BackendError("timeout");
    return reply_;
  }
  int calls = 0;

 private:
  int failures_;
  std::string reply_;
};

}  // namespace

TEST(MoveDirectives, Grammar) {
  auto a = parse_move_commands("Ok voy. «MOVE:down»«MOVE:down»");
  EXPECT_EQ(a.text, "Ok voy.");
  EXPECT_EQ(a.steps, (std::vector<Step>{Step::down, Step::down}));
  auto b = parse_move_commands("Sigo recto");
  EXPECT_EQ(b.text, "Sigo recto");
  EXPECT_TRUE(b.steps.empty());
  auto c = parse_move_commands("«MOVE:diagonal»");
  EXPECT_EQ(c.text, "«MOVE:diagonal»");
  EXPECT_TRUE(c.steps.empty());
  auto d = parse_move_commands("«MOVE:left» voy «MOVE:up» y «MOVE:UP»");
  EXPECT_EQ(d.text, "voy y «MOVE:UP»");
  EXPECT_EQ(d.steps, (std::vector<Step>{Step::left, Step::up}));
  EXPECT_EQ(parse_move_commands(move_directive(Step::right)).steps, (std::vector<Step>{Step::right}));
}

TEST(Directions, Grammar) {
  using D = std::vector<Direction>;
  EXPECT_EQ(parse_directions("baja dos"), (D{{Step::down, 2}}));
  EXPECT_EQ(parse_directions("Go down three steps to the fork."), (D{{Step::down, 3}}));
  EXPECT_EQ(parse_directions("Baja dos pasos y tres a la derecha"), (D{{Step::down, 2}, {Step::right, 3}}));
  EXPECT_EQ(parse_directions("three steps down, two steps right"), (D{{Step::down, 3}, {Step::right, 2}}));
  EXPECT_EQ(parse_directions("Ve 4 pasos a la izquierda hasta la cuchara."), (D{{Step::left, 4}}));
  EXPECT_EQ(parse_directions("sube hacia arriba un paso"), (D{{Step::up, 1}}));
  EXPECT_EQ(parse_directions("left"), (D{{Step::left, 1}}));
  EXPECT_TRUE(parse_directions("¿dónde estás?").empty());
  EXPECT_TRUE(parse_directions("este tenedor").empty());
  EXPECT_EQ(parse_directions("pasa una roca y gira a la derecha"), (D{{Step::right, 1}}));
}

TEST(ScriptedBot, InstructorFollowsTheRoute) {
  ScriptedBot bot(1);
  std::vector<Utterance> none;
  auto ctx = context(Role::instructor, none, LanguageDirective::spanish_only);
  ctx.opening = true;
  ctx.avatar = maps().at("farm").start;
  EXPECT_EQ(bot.generate(ctx), "Vamos a empezar. Baja cinco pasos hasta el tenedor.");
  ctx.opening = false;
  ctx.avatar = Cell{3, 5};
  EXPECT_EQ(bot.generate(ctx), "Ve seis pasos a la derecha hasta la cuchara.");
  ctx.avatar = Cell{9, 8};
  EXPECT_EQ(bot.generate(ctx), "Baja tres pasos hasta el faro.");
  ctx.avatar = Cell{7, 11};
  EXPECT_EQ(bot.generate(ctx), "Ve tres pasos a la izquierda hasta las flores.");
  ctx.avatar = Cell{0, 0};
  EXPECT_EQ(bot.generate(ctx), "Espera. Ve tres pasos a la derecha.");
  ctx.directive = LanguageDirective::none;
  ctx.avatar = Cell{3, 5};
  EXPECT_EQ(bot.generate(ctx), "Go six steps right to the spoon.");
}

TEST(ScriptedBot, InstructorMirrorsHumanLanguage) {
  ScriptedBot bot;
  std::vector<Utterance> h = {A().analyze(Speaker::human, "vale, ¿y ahora?", Millis{0})};
  auto ctx = context(Role::instructor, h);
  ctx.avatar = Cell{3, 5};
  EXPECT_EQ(bot.generate(ctx), "Ve seis pasos a la derecha hasta la cuchara.");
  h.push_back(A().analyze(Speaker::human, "ok", Millis{0}));
  ctx.history = h;
  EXPECT_EQ(bot.generate(ctx), "Ve seis pasos a la derecha hasta la cuchara.");
  h.push_back(A().analyze(Speaker::human, "what now?", Millis{0}));
  ctx.history = h;
  EXPECT_EQ(bot.generate(ctx), "Go six steps right to the spoon.");
}

TEST(ScriptedBot, NavigatorMovesAndClarifies) {
  ScriptedBot bot(0);
  std::vector<Utterance> h = {A().analyze(Speaker::human, "baja dos", Millis{0})};
  auto raw = bot.generate(context(Role::navigator, h));
  auto parsed = parse_move_commands(raw);
  EXPECT_EQ(parsed.steps, (std::vector<Step>{Step::down, Step::down}));
  EXPECT_EQ(A().label(parsed.text), Label::spanish) << parsed.text;

  h = {A().analyze(Speaker::human, "hmm where is the treasure", Millis{0})};
  raw = bot.generate(context(Role::navigator, h));
  EXPECT_EQ(raw, "I do not understand, where do I go?");
  EXPECT_TRUE(parse_move_commands(raw).steps.empty());
}

TEST(ScriptedBot, DeterministicAndTranslatable) {
  for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
    ScriptedBot a(seed), b(seed);
    std::vector<Utterance> h = {A().analyze(Speaker::human, "Go down two steps and one step left", Millis{0})};
    auto ctx = context(Role::navigator, h);
    auto out = a.generate(ctx);
    EXPECT_EQ(out, b.generate(ctx));
    auto text = parse_move_commands(out).text;
    EXPECT_EQ(A().label(text), Label::english) << text;
    auto es = T().translate(text, Language::spanish);
    EXPECT_EQ(A().label(es), Label::spanish) << es;
    EXPECT_EQ(T().translate(es, Language::english), text);
  }
}

TEST(Prompts, NavigatorNeverSeesTheRoute) {
  auto tpl = PromptTemplates::load(fixtures::data_dir() / "prompts");
  std::vector<Utterance> h = {A().analyze(Speaker::human, "baja dos", Millis{0})};
  const auto& map = maps().at("farm");
  std::string route;
  for (auto c : map.target_path) route += (route.empty() ? "" : " ") + ("(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")");

  auto nav = context(Role::navigator, h);
  EXPECT_TRUE(nav.map.target_path.empty());
  std::string nav_prompt = tpl.render(nav);
  EXPECT_EQ(nav_prompt.find(route), std::string::npos);
  EXPECT_EQ(nav_prompt.find("{{"), std::string::npos);
  EXPECT_NE(nav_prompt.find("Participant: baja dos"), std::string::npos);
  EXPECT_NE(nav_prompt.find("tenedor"), std::string::npos);

  auto ins = context(Role::instructor, h, LanguageDirective::spanish_only);
  std::string ins_prompt = tpl.render(ins);
  EXPECT_NE(ins_prompt.find(route), std::string::npos);
  EXPECT_NE(ins_prompt.find("exclusively in Spanish"), std::string::npos);
  EXPECT_EQ(ins_prompt.rfind("#", 0), std::string::npos);

  EXPECT_THROW(PromptTemplates("no route here", "nav"), std::runtime_error);
  EXPECT_THROW(PromptTemplates("{{target_path}}", "{{target_path}}"), std::runtime_error);
}

TEST(Prompts, DirectiveFollowsCondition) {
  EXPECT_EQ(directive_for(StrategyKind::ins_baseline), LanguageDirective::spanish_only);
  EXPECT_EQ(directive_for(StrategyKind::ins_masc_incongruent), LanguageDirective::spanish_only);
  EXPECT_EQ(directive_for(StrategyKind::alt_random), LanguageDirective::none);
}

TEST(Welcome, PoolIsBilingualAndSeeded) {
  auto w = WelcomeMessages::load(fixtures::data_dir() / "agent/welcome.txt");
  ASSERT_FALSE(w.pool().empty());
  for (const auto& line : w.pool()) EXPECT_EQ(A().label(line), Label::mixed) << line;
  auto r1 = SeededRandom::for_session("S000001", 5), r2 = SeededRandom::for_session("S000001", 5);
  EXPECT_EQ(w.pick(r1), w.pick(r2));
  EXPECT_THROW(WelcomeMessages({}), std::runtime_error);
}

TEST(BotTurn, StrategyAppliedToBackendReply) {
  FlakyBackend backend(0);
  std::vector<Utterance> none;
  SeededRandom rng(1);
  auto turn = bot_turn(backend, context(Role::instructor, none), StrategyConfig::parse("ins_masc_incongruent"),
                       DialogState(none), A(), T(), rng);
  EXPECT_EQ(turn.final_text, "Gira a la derecha en la fork");
  EXPECT_EQ(turn.raw_text, "Gira a la derecha en el tenedor");
  FlakyBackend same(0, "Turn left");
  turn = bot_turn(same, context(Role::instructor, none), {}, DialogState(none), A(), T(), rng);
  EXPECT_EQ(turn.final_text, "Turn left");
  EXPECT_FALSE(turn.degraded);
}

TEST(BotTurn, RetryThenFallback) {
  std::vector<Utterance> none;
  SeededRandom rng(1);
  FlakyBackend once(1, "Turn left");
  auto t1 = bot_turn(once, context(Role::instructor, none), {}, DialogState(none), A(), T(), rng);
  EXPECT_EQ(once.calls, 2);
  EXPECT_EQ(t1.final_text, "Turn left");
  EXPECT_FALSE(t1.degraded);

  FlakyBackend twice(2);
  auto t2 = bot_turn(twice, context(Role::instructor, none), {}, DialogState(none), A(), T(), rng);
  EXPECT_EQ(twice.calls, 2);
  EXPECT_EQ(t2.final_text, kFallbackLine);
  EXPECT_TRUE(t2.degraded);
  EXPECT_EQ(A().label(t2.final_text), Label::mixed);
}

TEST(BotTurn, MovesOnlyForNavigator) {
  std::vector<Utterance> none;
  SeededRandom rng(1);
  FlakyBackend backend(0, "Voy. «MOVE:down»");
  auto nav = bot_turn(backend, context(Role::navigator, none), {}, DialogState(none), A(), T(), rng);
  EXPECT_EQ(nav.final_text, "Voy.");
  EXPECT_EQ(nav.moves, (std::vector<Step>{Step::down}));
  auto ins = bot_turn(backend, context(Role::instructor, none), {}, DialogState(none), A(), T(), rng);
  EXPECT_TRUE(ins.moves.empty());
}

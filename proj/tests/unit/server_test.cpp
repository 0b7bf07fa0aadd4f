#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mapcs/dataset.hpp"
#include "mapcs/metrics.hpp"
#include "mapcs/service.hpp"
#include "mapcs/simulate.hpp"
#include "support.hpp"

namespace mapcs {
namespace {

using nlohmann::json;
namespace fx = fixtures;

WireMessage client(MessageType t, const std::string& sid, std::uint64_t seq, json payload = json::object()) {
  WireMessage m;
  m.type = t;
  m.session_id = sid;
  m.seq = seq;
  m.payload = std::move(payload);
  return m;
}

std::vector<WireMessage> of_type(const std::vector<WireMessage>& ms, MessageType t) {
  std::vector<WireMessage> out;
  for (const auto& m : ms) {
    if (m.type == t) out.push_back(m);
  }
  return out;
}

struct Harness {
  MemorySessionStore store;
  ManualClock clock{Millis{1'000'000}};
  SessionService service;
  std::uint64_t seq = 0;

  explicit Harness(std::vector<StrategyConfig> conds = {StrategyConfig{}},
                   QuestionnaireMode mode = QuestionnaireMode::once)
      : service(fx::resources(), make_config(std::move(conds), mode), store, clock) {}

  static ServiceConfig make_config(std::vector<StrategyConfig> conds, QuestionnaireMode mode) {
    ServiceConfig c;
    c.conditions = std::move(conds);
    c.seed = 7;
    c.questionnaire_mode = mode;
    c.token_secret = "test";
    return c;
  }

  std::vector<WireMessage> send(const std::string& sid, MessageType t, json payload = json::object()) {
    return service.handle(client(t, sid, ++seq, std::move(payload)));
  }
  std::vector<WireMessage> join(const CreatedSession& c) { return send(c.session_id, MessageType::join, {{"token", c.token}}); }
  std::vector<WireMessage> chat(const std::string& sid, const std::string& text) {
    return send(sid, MessageType::chat_send, {{"text", text}});
  }
};

// ------------------------------------------------------------------ wire

TEST(Wire, RoundTripsTheEnvelope) {
  WireMessage m = client(MessageType::chat_send, "S000001", 3, {{"text", "hola"}});
  auto back = WireMessage::parse(m.dump());
  EXPECT_EQ(back.type, MessageType::chat_send);
  EXPECT_EQ(back.session_id, "S000001");
  EXPECT_EQ(back.seq, 3u);
  EXPECT_EQ(back.payload.at("text"), "hola");
  for (auto t : {MessageType::join, MessageType::session_config, MessageType::chat_send, MessageType::chat_recv,
                 MessageType::move, MessageType::game_state, MessageType::game_over,
                 MessageType::questionnaire_submit, MessageType::error}) {
    EXPECT_EQ(parse_message_type(to_string(t)), t);
  }
}

TEST(Wire, RejectsMalformedFrames) {
  for (const char* bad : {"not json", "[]", R"({"seq":1})", R"({"type":"dance"})", R"({"type":"join","seq":-1})",
                          R"({"type":"join","payload":[]})", R"({"type":"join","session_id":5})"}) {
    try {
      WireMessage::parse(bad);
      ADD_FAILURE() << bad;
    } catch (const ProtocolError& e) {
      EXPECT_EQ(e.code(), "bad_message");
    }
  }
}

TEST(Wire, Sha256MatchesKnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

// --------------------------------------------------------------- creation

TEST(CreateSession, ExplicitConditionRoutesEveryBotTurnThroughIt) {
  Harness h;
  auto c = h.service.create_session("ins_fem_incongruent");
  EXPECT_EQ(c.condition.kind, StrategyKind::ins_fem_incongruent);
  auto s = h.service.snapshot(c.session_id);
  EXPECT_EQ(s.condition.kind, StrategyKind::ins_fem_incongruent);
  ASSERT_EQ(s.map_ids.size(), 4u);
  EXPECT_EQ(std::set<std::string>(s.map_ids.begin(), s.map_ids.end()).size(), 4u);
  EXPECT_EQ(s.games.size(), 1u);
  EXPECT_EQ(s.games[0].human_role, Role::instructor);
  // The welcome line is queued as the first bot turn.
  ASSERT_EQ(s.games[0].transcript.size(), 1u);
  EXPECT_EQ(s.games[0].transcript[0].speaker, Speaker::bot);
}

TEST(CreateSession, AutoAssignsRoundRobin) {
  Harness h({StrategyConfig::parse("alt_random"), StrategyConfig::parse("alt_adversarial")});
  auto a = h.service.create_session("auto");
  auto b = h.service.create_session("auto");
  auto c = h.service.create_session("auto");
  EXPECT_NE(a.condition.kind, b.condition.kind);
  EXPECT_EQ(a.condition.kind, c.condition.kind);
  EXPECT_NE(a.session_id, b.session_id);
  EXPECT_EQ(a.session_id, "S000001");
}

TEST(CreateSession, ShortContextWindowOverride) {
  Harness h;
  auto c = h.service.create_session("alt_k5");
  EXPECT_EQ(c.condition.kind, StrategyKind::alt_short_context);
  EXPECT_EQ(h.service.snapshot(c.session_id).condition.k, 5);
}

TEST(CreateSession, UnknownConditionIsARequestError) {
  Harness h;
  EXPECT_THROW(h.service.create_session("alt_telepathy"), RequestError);
  Harness empty(std::vector<StrategyConfig>{});
  EXPECT_THROW(empty.service.create_session("auto"), RequestError);
}

TEST(CreateSession, JoinDeliversTheQueuedOpening) {
  Harness h;
  auto c = h.service.create_session("alt_baseline");
  auto out = h.join(c);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].type, MessageType::session_config);
  EXPECT_EQ(out[1].type, MessageType::chat_recv);
  EXPECT_EQ(out[2].type, MessageType::game_state);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i].seq, i + 1);
  EXPECT_EQ(out[0].payload.at("human_role"), "instructor");
  EXPECT_TRUE(out[0].payload.at("map").contains("target_path"));
  EXPECT_EQ(out[1].payload.at("speaker"), "bot");
}

TEST(CreateSession, JoinNeedsTheToken) {
  Harness h;
  auto c = h.service.create_session("alt_baseline");
  auto out = h.send(c.session_id, MessageType::join, {{"token", "nope"}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].payload.at("code"), "bad_token");
}

TEST(CreateSession, JoinResumesAfterLastSeenSeq) {
  Harness h;
  auto c = h.service.create_session("alt_baseline");
  h.join(c);
  auto out = h.send(c.session_id, MessageType::join, {{"token", c.token}, {"last_seen_seq", 2}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].seq, 3u);
  EXPECT_EQ(out[0].type, MessageType::game_state);
}

// ------------------------------------------------------------------- chat

TEST(HandleChat, AdversarialRepliesInTheOtherLanguage) {
  Harness h;
  auto c = h.service.create_session("alt_adversarial");
  h.join(c);
  auto out = h.chat(c.session_id, "hello");
  auto chats = of_type(out, MessageType::chat_recv);
  ASSERT_EQ(chats.size(), 2u);
  EXPECT_EQ(chats[0].payload.at("speaker"), "human");
  EXPECT_EQ(chats[0].payload.at("label"), "english");
  EXPECT_EQ(chats[1].payload.at("speaker"), "bot");
  EXPECT_EQ(chats[1].payload.at("label"), "spanish");
}

TEST(HandleChat, BotFrameCarriesRawHashAndFinalText) {
  Harness h;
  auto c = h.service.create_session("alt_adversarial");
  h.join(c);
  auto out = h.chat(c.session_id, "Go down four steps.");
  auto bot = of_type(out, MessageType::chat_recv).back();
  auto s = h.service.snapshot(c.session_id);
  const auto& u = s.games[0].transcript.back();
  EXPECT_EQ(bot.payload.at("text"), u.text);
  EXPECT_EQ(bot.payload.at("raw_sha256"), sha256_hex(u.backend_text));
  EXPECT_NE(u.backend_text, u.text);  // translated, and the MOVE directives are stripped
  EXPECT_NE(u.backend_text.find("«MOVE:down»"), std::string::npos);
}

TEST(HandleChat, BotMovesFollowTheirChatFrame) {
  Harness h;
  auto c = h.service.create_session("alt_baseline");
  h.join(c);
  auto out = h.chat(c.session_id, "Go down three steps.");
  ASSERT_GE(out.size(), 3u);
  EXPECT_EQ(out[0].type, MessageType::chat_recv);
  EXPECT_EQ(out[1].type, MessageType::chat_recv);
  EXPECT_EQ(out[2].type, MessageType::game_state);
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_GT(out[i].seq, out[i - 1].seq);
  auto s = h.service.snapshot(c.session_id);
  const auto& map = fx::resources().maps->at(s.games[0].map_id);
  EXPECT_EQ(s.games[0].avatar_trace.back().cell, (Cell{map.start.x, map.start.y + 3}));
  EXPECT_EQ(out[2].payload.at("avatar"), json::array({map.start.x, map.start.y + 3}));
}

TEST(HandleChat, EmptyTextIsRejected) {
  Harness h;
  auto c = h.service.create_session("alt_baseline");
  h.join(c);
  auto out = h.chat(c.session_id, "   ");
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].payload.at("code"), "empty_text");
  EXPECT_EQ(h.service.snapshot(c.session_id).games[0].transcript.size(), 1u);
}

TEST(HandleChat, StaleSeqIsRejected) {
  Harness h;
  auto c = h.service.create_session("alt_baseline");
  h.join(c);
  auto out = h.service.handle(client(MessageType::chat_send, c.session_id, 1, {{"text", "hola"}}));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].payload.at("code"), "stale_seq");
}

TEST(HandleChat, UnknownSession) {
  Harness h;
  auto out = h.chat("S999999", "hola");
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].payload.at("code"), "unknown_session");
}

TEST(HandleChat, NavigatorOnlyMovesForHumanNavigators) {
  Harness h;
  auto c = h.service.create_session("alt_baseline");
  h.join(c);
  auto out = h.send(c.session_id, MessageType::move, {{"step", "down"}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].payload.at("code"), "not_navigator");
}

// Plays the human instructor's game by repeating the scripted line until the
// bot reaches the goal.
void finish_instructor_game(Harness& h, const std::string& sid) {
  for (int i = 0; i < 40; ++i) {
    auto s = h.service.snapshot(sid);
    if (s.stage != Stage::playing || s.current_game().human_role != Role::instructor) return;
    auto know = MapKnowledge::for_role(fx::resources().maps->at(s.current_game().map_id), Role::instructor);
    h.clock.advance(Millis{5000});
    h.chat(sid, route_instruction(know, s.current_game().avatar_trace.back().cell, false, false));
  }
  FAIL() << "game did not finish";
}

TEST(Timeouts, GameClosesAtTheLimitAndTheNextOneOpens) {
  Harness h;
  auto c = h.service.create_session("alt_baseline");
  h.join(c);
  finish_instructor_game(h, c.session_id);
  auto s = h.service.snapshot(c.session_id);
  ASSERT_EQ(s.games.size(), 2u);
  EXPECT_TRUE(s.games[0].completed());
  // Game two: the bot instructs, the human stays idle.
  EXPECT_EQ(s.games[1].transcript.size(), 1u);
  h.clock.advance(kGameTimeLimit - Millis{1});
  EXPECT_TRUE(h.service.tick(c.session_id).empty());
  h.clock.advance(Millis{1});
  auto out = h.service.tick(c.session_id);
  auto over = of_type(out, MessageType::game_over);
  ASSERT_EQ(over.size(), 1u);
  EXPECT_EQ(over[0].payload.at("status"), "timed_out");
  EXPECT_DOUBLE_EQ(over[0].payload.at("duration_s").get<double>(), 420.0);
  s = h.service.snapshot(c.session_id);
  EXPECT_EQ(s.games[1].status, GameStatus::timed_out);
  EXPECT_EQ(s.games.size(), 3u);
}

TEST(Timeouts, LateMessagesCloseTheGameFirst) {
  Harness h;
  auto c = h.service.create_session("alt_baseline");
  h.join(c);
  h.clock.advance(Millis{500'000});
  auto out = h.chat(c.session_id, "Go down three steps.");
  ASSERT_FALSE(out.empty());
  EXPECT_EQ(out[0].type, MessageType::game_over);
  auto s = h.service.snapshot(c.session_id);
  EXPECT_EQ(s.games[0].status, GameStatus::timed_out);
  EXPECT_EQ(s.games[0].duration_s(), 420.0);
  // The message lands in game two instead.
  EXPECT_EQ(s.current_index(), 1);
  EXPECT_EQ(s.games[0].transcript.size(), 1u);
}

TEST(Questionnaire, ChatDuringQuestionnaireIsAnError) {
  Harness h({StrategyConfig{}}, QuestionnaireMode::per_game);
  auto c = h.service.create_session("alt_baseline");
  h.join(c);
  finish_instructor_game(h, c.session_id);
  EXPECT_EQ(h.service.snapshot(c.session_id).stage, Stage::questionnaire);
  auto out = h.chat(c.session_id, "hola");
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].type, MessageType::error);
  EXPECT_EQ(out[0].payload.at("code"), "not_playing");

  out = h.send(c.session_id, MessageType::questionnaire_submit,
               {{"task_enjoy", 101}, {"task_success", 5}, {"difficult_comm", 5}, {"difficult_ins", 5}});
  EXPECT_EQ(out.at(0).payload.at("code"), "bad_questionnaire");

  json answers = {{"task_enjoy", 80},
                  {"task_success", 70},
                  {"difficult_comm", 10},
                  {"difficult_ins", 0},
                  {"background", {{"native", "es"}}}};
  out = h.send(c.session_id, MessageType::questionnaire_submit, answers);
  ASSERT_FALSE(out.empty());
  EXPECT_EQ(out[0].type, MessageType::session_config);
  EXPECT_EQ(out[0].payload.at("human_role"), "navigator");
  EXPECT_FALSE(out[0].payload.at("map").contains("target_path"));
  EXPECT_FALSE(out[0].payload.at("map").contains("end"));
  auto s = h.service.snapshot(c.session_id);
  ASSERT_EQ(s.questionnaires.size(), 1u);
  EXPECT_EQ(s.questionnaires[0].game_index, 0);
  EXPECT_EQ(s.questionnaires[0].task_enjoy, 80);
  EXPECT_EQ(s.questionnaires[0].background.at("native"), "es");
}

// --------------------------------------------------------- event sourcing

TEST(EventLog, EventsRoundTripThroughJson) {
  Harness h;
  auto c = h.service.create_session("alt_random:p=0.25");
  h.join(c);
  h.chat(c.session_id, "Baja tres pasos.");
  for (const auto& e : h.store.load(c.session_id)) {
    auto back = Event::from_json(json::parse(e.to_json().dump()));
    EXPECT_EQ(back.to_json().dump(), e.to_json().dump());
  }
}

TEST(EventLog, ReplayReproducesTheLiveRecordByteForByte) {
  HumanProfile profile;
  profile.stall_game = 2;
  for (const char* cond : {"alt_random", "alt_short_context", "ins_masc_incongruent"}) {
    Harness h({StrategyConfig::parse(cond)});
    auto c = h.service.create_session(cond);
    run_scripted_session(h.service, h.clock, c, profile, 11);
    auto live = session_to_json(h.service.snapshot(c.session_id)).dump();
    auto log = h.store.load(c.session_id);
    ReplayContext ctx{*fx::resources().analyzer, *fx::resources().maps};
    EXPECT_EQ(session_to_json(replay(log, ctx)).dump(), live) << cond;
    EXPECT_TRUE(audit_strategy(log, ctx, *fx::resources().translator, fx::resources().welcome->pool()).empty())
        << cond;
  }
}

TEST(EventLog, AuditFlagsATamperedBotLine) {
  Harness h;
  auto c = h.service.create_session("alt_adversarial");
  h.join(c);
  h.chat(c.session_id, "Go down three steps.");
  auto log = h.store.load(c.session_id);
  log.back().text = "Something else.";
  ReplayContext ctx{*fx::resources().analyzer, *fx::resources().maps};
  auto mismatches = audit_strategy(log, ctx, *fx::resources().translator, fx::resources().welcome->pool());
  ASSERT_EQ(mismatches.size(), 1u);
  EXPECT_EQ(mismatches[0].event_index, log.size() - 1);
}

TEST(EventLog, FileStoreSurvivesARestart) {
  auto dir = std::filesystem::temp_directory_path() / ("mapcs_store_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  ManualClock clock{Millis{5'000}};
  std::string sid;
  std::string token;
  std::string before;
  {
    FileSessionStore store(dir);
    SessionService service(fx::resources(), Harness::make_config({StrategyConfig{}}, QuestionnaireMode::once), store,
                           clock);
    auto c = service.create_session("alt_random");
    sid = c.session_id;
    token = c.token;
    service.handle(client(MessageType::join, sid, 1, {{"token", token}}));
    service.handle(client(MessageType::chat_send, sid, 2, {{"text", "Go down two steps."}}));
    before = session_to_json(service.snapshot(sid)).dump();
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "sessions" / (sid + ".jsonl")));
  EXPECT_TRUE(std::filesystem::exists(dir / "index.jsonl"));
  FileSessionStore store(dir);
  SessionService service(fx::resources(), Harness::make_config({StrategyConfig{}}, QuestionnaireMode::once), store,
                         clock);
  EXPECT_EQ(session_to_json(service.snapshot(sid)).dump(), before);
  auto out = service.handle(client(MessageType::join, sid, 3, {{"token", token}, {"last_seen_seq", 99}}));
  ASSERT_FALSE(out.empty());
  EXPECT_EQ(out[0].type, MessageType::session_config);
  out = service.handle(client(MessageType::chat_send, sid, 4, {{"text", "Go down two steps."}}));
  EXPECT_EQ(of_type(out, MessageType::chat_recv).size(), 2u);
  // The RNG stream picked up where it left off, so the log still audits clean.
  ReplayContext ctx{*fx::resources().analyzer, *fx::resources().maps};
  EXPECT_TRUE(audit_strategy(store.load(sid), ctx, *fx::resources().translator, fx::resources().welcome->pool()).empty());
  auto next = service.create_session("alt_baseline");
  EXPECT_NE(next.session_id, sid);
  std::filesystem::remove_all(dir);
}

// ----------------------------------------------------------------- export

std::string export_string(const SessionStore& store, const ExportFilter& f = {}) {
  std::ostringstream out;
  ReplayContext ctx{*fx::resources().analyzer, *fx::resources().maps};
  export_dataset(store, ctx, out, f);
  return out.str();
}

TEST(Export, EmptyStoreIsHeaderOnly) {
  MemorySessionStore store;
  auto text = export_string(store);
  EXPECT_EQ(text, R"({"record":"header","schema":"mapcs.dataset","sessions":0,"version":1})"
                  "\n");
  std::istringstream in(text);
  EXPECT_TRUE(validate_dataset(in).empty());
}

TEST(Export, UnfinishedSessionsAreSkipped) {
  Harness h;
  auto c = h.service.create_session("alt_baseline");
  ReplayContext ctx{*fx::resources().analyzer, *fx::resources().maps};
  std::ostringstream out;
  auto summary = export_dataset(h.store, ctx, out);
  EXPECT_EQ(summary.sessions, 0u);
  EXPECT_EQ(summary.skipped_unfinished, 1u);
}

std::string golden_session_export() {
  SimulationOptions opts;
  opts.conditions = {StrategyConfig::parse("ins_congruent")};
  opts.n_sessions = 1;
  opts.seed = 2024;
  opts.human.stall_game = 3;
  opts.human.insertion_probability = 0.5;
  MemorySessionStore store;
  simulate(fx::resources(), opts, store);
  return export_string(store);
}

TEST(Export, MatchesTheGoldenFile) {
  auto text = golden_session_export();
  auto path = fx::fixture_dir() / "golden" / "export_session.jsonl";
  if (std::getenv("MAPCS_UPDATE_GOLDEN")) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
  }
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in) << path;
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(text, golden.str());
}

TEST(Export, IsByteStableAndValid) {
  auto a = golden_session_export();
  auto b = golden_session_export();
  EXPECT_EQ(a, b);
  std::istringstream in(a);
  auto problems = validate_dataset(in);
  EXPECT_TRUE(problems.empty()) << problems.front();
}

TEST(Export, ReadsBackIntoTheSameMetrics) {
  SimulationOptions opts;
  opts.conditions = {StrategyConfig::parse("alt_random")};
  opts.n_sessions = 2;
  MemorySessionStore store;
  simulate(fx::resources(), opts, store);
  std::istringstream in(export_string(store));
  auto ds = read_dataset(in);
  ASSERT_EQ(ds.sessions.size(), 2u);
  ReplayContext ctx{*fx::resources().analyzer, *fx::resources().maps};
  for (std::size_t i = 0; i < 2; ++i) {
    auto live = replay(store.load(store.list()[i]), ctx);
    auto a = session_report(live);
    auto b = session_report(ds.sessions[i]);
    EXPECT_EQ(a.dialog.n_utterances, b.dialog.n_utterances);
    EXPECT_EQ(a.dialog.n_tokens, b.dialog.n_tokens);
    EXPECT_EQ(a.dialog.label_counts, b.dialog.label_counts);
    EXPECT_EQ(a.dialog.intersentential, b.dialog.intersentential);
    EXPECT_EQ(a.dialog.entrainment, b.dialog.entrainment);
    EXPECT_EQ(a.dialog.np_counts, b.dialog.np_counts);
    EXPECT_EQ(a.mean_route_distance(), b.mean_route_distance());
    EXPECT_EQ(a.mean_duration_s(), b.mean_duration_s());
  }
}

TEST(Export, FilterByCondition) {
  SimulationOptions opts;
  opts.conditions = {StrategyConfig::parse("alt_random"), StrategyConfig::parse("alt_baseline")};
  opts.n_sessions = 1;
  MemorySessionStore store;
  simulate(fx::resources(), opts, store);
  ExportFilter f;
  f.conditions = {"alt_baseline"};
  std::istringstream in(export_string(store, f));
  auto ds = read_dataset(in);
  ASSERT_EQ(ds.sessions.size(), 1u);
  EXPECT_EQ(ds.sessions[0].condition.kind, StrategyKind::alt_baseline);
}

TEST(Dataset, VersionMismatchIsASchemaError) {
  std::istringstream in(R"({"record":"header","schema":"mapcs.dataset","sessions":0,"version":9})"
                        "\n");
  try {
    read_dataset(in);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.found_version(), 9);
  }
  std::istringstream other(R"({"record":"header","schema":"other","sessions":0,"version":1})"
                           "\n");
  EXPECT_THROW(read_dataset(other), SchemaError);
}

TEST(Dataset, ValidatorFindsBrokenRecords) {
  auto text = golden_session_export();
  // Drop a questionnaire item and corrupt one utterance label.
  auto tampered = text;
  auto pos = tampered.find("\"label\":\"");
  tampered.replace(pos, 9, "\"label\":\"x");
  pos = tampered.find("\"task_enjoy\":");
  tampered.replace(pos, 13, "\"task_joy\":");
  std::istringstream in(tampered);
  auto problems = validate_dataset(in);
  EXPECT_EQ(problems.size(), 2u);
  std::istringstream bad("{\"record\":\"header\"}\n");
  EXPECT_FALSE(validate_dataset(bad).empty());
}

}  // namespace
}  // namespace mapcs

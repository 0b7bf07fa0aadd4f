#include "mapcs/agent.hpp"

#include <algorithm>
#include <map>

#include <spdlog/spdlog.h>

#include "mapcs/util/io.hpp"
#include "mapcs/util/utf8.hpp"

namespace mapcs {

std::string_view to_string(LanguageDirective d) { return d == LanguageDirective::none ? "none" : "spanish_only"; }

LanguageDirective directive_for(StrategyKind kind) {
  return is_insertional(kind) ? LanguageDirective::spanish_only : LanguageDirective::none;
}

MapKnowledge MapKnowledge::for_role(const GameMap& map, Role bot_role) {
  MapKnowledge k;
  k.map_id = map.map_id;
  k.width = map.width;
  k.height = map.height;
  k.start = map.start;
  k.landmarks = map.landmarks;
  if (bot_role == Role::instructor) k.target_path = map.target_path;
  return k;
}

// ---------------------------------------------------------------------------
// Move directives

namespace {

constexpr std::string_view kOpen = "«MOVE:";
constexpr std::string_view kClose = "»";

std::string tidy_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace

std::string move_directive(Step s) { return std::string(kOpen) + std::string(to_string(s)) + std::string(kClose); }

ParsedReply parse_move_commands(std::string_view raw) {
  ParsedReply out;
  std::string kept;
  bool stripped = false;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    std::size_t open = raw.find(kOpen, pos);
    if (open == std::string_view::npos) break;
    std::size_t close = raw.find(kClose, open + kOpen.size());
    if (close == std::string_view::npos) break;
    std::string_view inner = raw.substr(open + kOpen.size(), close - open - kOpen.size());
    std::size_t after = close + kClose.size();
    if (auto step = parse_step(inner)) {
      kept.append(raw.substr(pos, open - pos));
      kept += ' ';
      out.steps.push_back(*step);
      stripped = true;
    } else {
      kept.append(raw.substr(pos, after - pos));
    }
    pos = after;
  }
  kept.append(raw.substr(pos));
  out.text = stripped ? tidy_spaces(kept) : kept;
  return out;
}

// ---------------------------------------------------------------------------
// Direction grammar

namespace {

const std::map<std::string, int, std::less<>>& count_words() {
  static const std::map<std::string, int, std::less<>> words = {
      {"un", 1},        {"uno", 1},        {"una", 1},        {"dos", 2},          {"tres", 3},
      {"cuatro", 4},    {"cinco", 5},      {"seis", 6},       {"siete", 7},        {"ocho", 8},
      {"nueve", 9},     {"diez", 10},      {"once", 11},      {"doce", 12},        {"trece", 13},
      {"catorce", 14},  {"quince", 15},    {"dieciséis", 16}, {"diecisiete", 17},  {"dieciocho", 18},
      {"diecinueve", 19}, {"veinte", 20},  {"one", 1},        {"two", 2},          {"three", 3},
      {"four", 4},      {"five", 5},       {"six", 6},        {"seven", 7},        {"eight", 8},
      {"nine", 9},      {"ten", 10},       {"eleven", 11},    {"twelve", 12},      {"thirteen", 13},
      {"fourteen", 14}, {"fifteen", 15},   {"sixteen", 16},   {"seventeen", 17},   {"eighteen", 18},
      {"nineteen", 19}, {"twenty", 20},
  };
  return words;
}

std::optional<Step> direction_word(std::string_view w) {
  static const std::map<std::string, Step, std::less<>> words = {
      {"down", Step::down},   {"south", Step::down},   {"baja", Step::down},  {"bajar", Step::down},
      {"bajas", Step::down},  {"baje", Step::down},    {"abajo", Step::down}, {"sur", Step::down},
      {"up", Step::up},       {"north", Step::up},     {"sube", Step::up},    {"subir", Step::up},
      {"subes", Step::up},    {"suba", Step::up},      {"arriba", Step::up},  {"norte", Step::up},
      {"left", Step::left},   {"west", Step::left},    {"izquierda", Step::left}, {"oeste", Step::left},
      {"right", Step::right}, {"east", Step::right},   {"derecha", Step::right},
  };
  auto it = words.find(w);
  if (it == words.end()) return std::nullopt;
  return it->second;
}

bool is_step_unit(std::string_view w) {
  return w == "paso" || w == "pasos" || w == "casilla" || w == "casillas" || w == "cuadro" || w == "cuadros" ||
         w == "step" || w == "steps" || w == "square" || w == "squares";
}

}  // namespace

std::optional<int> parse_count_word(std::string_view lower) {
  if (!lower.empty() && lower.size() <= 2 && std::all_of(lower.begin(), lower.end(), [](char c) {
        return c >= '0' && c <= '9';
      })) {
    int v = std::stoi(std::string(lower));
    if (v >= 1) return v;
    return std::nullopt;
  }
  auto it = count_words().find(lower);
  if (it == count_words().end()) return std::nullopt;
  return it->second;
}

std::vector<Direction> parse_directions(std::string_view text) {
  auto toks = tokenize(text);
  std::vector<std::optional<Step>> dir(toks.size());
  std::vector<std::optional<int>> num(toks.size());
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].kind == TokenKind::punctuation) continue;
    dir[i] = direction_word(toks[i].lower);
    if (!dir[i]) num[i] = parse_count_word(toks[i].lower);
  }
  // "un"/"una" are usually articles; they count only before a unit word.
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].lower != "un" && toks[i].lower != "una") continue;
    bool unit = i + 1 < toks.size() && is_step_unit(toks[i + 1].lower);
    if (!unit) num[i].reset();
  }
  std::vector<bool> used(toks.size(), false);
  std::vector<Direction> out;
  std::optional<std::size_t> prev_dir;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (!dir[i]) continue;
    // "sube hacia arriba": a repeated direction with no count in between.
    if (prev_dir && dir[*prev_dir] == dir[i] && i - *prev_dir <= 2) {
      bool gap_has_count = false;
      for (std::size_t k = *prev_dir + 1; k < i; ++k) gap_has_count = gap_has_count || num[k].has_value();
      if (!gap_has_count) {
        prev_dir = i;
        continue;
      }
    }
    std::optional<std::size_t> pick;
    std::size_t floor = prev_dir ? *prev_dir + 1 : 0;
    for (std::size_t back = 1; back <= 4 && i >= floor + back; ++back) {
      std::size_t k = i - back;
      if (num[k] && !used[k]) {
        pick = k;
        break;
      }
    }
    if (!pick) {
      for (std::size_t k = i + 1; k < toks.size() && !dir[k]; ++k) {
        if (num[k] && !used[k]) {
          pick = k;
          break;
        }
      }
    }
    int count = 1;
    if (pick) {
      used[*pick] = true;
      count = *num[*pick];
    }
    out.push_back({*dir[i], count});
    prev_dir = i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prompts and welcome lines

namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string cell_text(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

}  // namespace

std::string render_history(std::span<const Utterance> history) {
  std::string out;
  for (const auto& u : history) {
    out += u.speaker == Speaker::human ? "Participant: " : "You: ";
    out += u.text;
    out += '\n';
  }
  return out;
}

PromptTemplates::PromptTemplates(std::string instructor, std::string navigator)
    : instructor_(std::move(instructor)), navigator_(std::move(navigator)) {
  if (navigator_.find("{{target_path}}") != std::string::npos) {
    throw std::runtime_error("the navigator prompt must not reveal the target path");
  }
  if (instructor_.find("{{target_path}}") == std::string::npos) {
    throw std::runtime_error("the instructor prompt needs a {{target_path}} placeholder");
  }
}

namespace {

// Leading "#" lines carry the template version and are not sent.
std::string strip_header(std::string text) {
  while (!text.empty() && text.front() == '#') {
    auto nl = text.find('\n');
    text.erase(0, nl == std::string::npos ? text.size() : nl + 1);
  }
  return text;
}

}  // namespace

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  return PromptTemplates(strip_header(util::read_file(dir / "instructor.txt")),
                         strip_header(util::read_file(dir / "navigator.txt")));
}

std::string PromptTemplates::render(const PromptContext& ctx) const {
  std::string out = raw(ctx.bot_role);
  std::string landmarks;
  for (const auto& l : ctx.map.landmarks) {
    landmarks += "- " + l.english_name + " / " + l.spanish_name + " at " + cell_text(l.cell) + "\n";
  }
  std::string path;
  for (auto c : ctx.map.target_path) path += (path.empty() ? "" : " ") + cell_text(c);
  replace_all(out, "{{landmarks}}", landmarks);
  replace_all(out, "{{target_path}}", path);
  replace_all(out, "{{history}}", render_history(ctx.history));
  replace_all(out, "{{language_directive}}",
              ctx.directive == LanguageDirective::spanish_only ? "Communicate exclusively in Spanish." : "");
  return out;
}

WelcomeMessages::WelcomeMessages(std::vector<std::string> pool) : pool_(std::move(pool)) {
  if (pool_.empty()) throw std::runtime_error("welcome message pool is empty");
}

WelcomeMessages WelcomeMessages::load(const std::filesystem::path& path) {
  return WelcomeMessages(util::read_lines(path));
}

// ---------------------------------------------------------------------------
// Scripted backend

namespace {

struct Phrasing {
  bool spanish;

  std::string number(int n) const {
    static const char* es[] = {"", "un", "dos", "tres", "cuatro", "cinco", "seis", "siete", "ocho", "nueve", "diez",
                               "once", "doce", "trece", "catorce", "quince", "dieciséis", "diecisiete",
                               "dieciocho", "diecinueve", "veinte"};
    static const char* en[] = {"", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
                               "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen",
                               "eighteen", "nineteen", "twenty"};
    if (n >= 1 && n <= 20) return spanish ? es[n] : en[n];
    return std::to_string(n);
  }

  std::string steps(int n) const {
    if (spanish) return number(n) + (n == 1 ? " paso" : " pasos");
    return number(n) + (n == 1 ? " step" : " steps");
  }

  std::string instruction(Step s, int n) const {
    if (spanish) {
      switch (s) {
        case Step::down: return "Baja " + steps(n);
        case Step::up: return "Sube " + steps(n);
        case Step::left: return "Ve " + steps(n) + " a la izquierda";
        case Step::right: return "Ve " + steps(n) + " a la derecha";
      }
    }
    switch (s) {
      case Step::down: return "Go down " + steps(n);
      case Step::up: return "Go up " + steps(n);
      case Step::left: return "Go " + steps(n) + " left";
      case Step::right: return "Go " + steps(n) + " right";
    }
    return {};
  }

  std::string landmark(const Landmark& l) const {
    if (!spanish) return " to the " + l.english_name;
    bool plural = l.spanish_name.back() == 's' && l.english_name.back() == 's';
    std::string det = plural ? "los" : "el";
    return " hasta " + map_determiner_gender(det, l.gender) + " " + l.spanish_name;
  }

  std::string heading(Step s) const {
    if (spanish) {
      switch (s) {
        case Step::down: return "hacia abajo";
        case Step::up: return "hacia arriba";
        case Step::left: return "a la izquierda";
        case Step::right: return "a la derecha";
      }
    }
    return std::string(to_string(s));
  }

  std::string opening() const { return spanish ? "Vamos a empezar. " : "Let us begin. "; }
  std::string wait() const { return spanish ? "Espera. " : "Wait. "; }
  std::string goal() const { return spanish ? "Llegamos a la meta." : "We reached the goal."; }
  std::string clarify() const {
    return spanish ? "No entiendo, ¿hacia dónde voy?" : "I do not understand, where do I go?";
  }
  std::string ack(bool alt) const {
    if (spanish) return alt ? "Muy bien, voy " : "Vale, voy ";
    return alt ? "Very good, I am going " : "Okay, I am going ";
  }
  std::string conj() const { return spanish ? " y " : " and "; }
};

bool wants_spanish(const PromptContext& ctx) {
  if (ctx.directive == LanguageDirective::spanish_only) return true;
  for (auto it = ctx.history.rbegin(); it != ctx.history.rend(); ++it) {
    if (it->speaker == Speaker::human && is_unilingual(it->label)) return it->label == Label::spanish;
  }
  return false;
}

std::string instruct(const MapKnowledge& map, Cell at, bool opening, const Phrasing& say, int count_delta) {
  const auto& path = map.target_path;
  if (path.empty()) return say.clarify();
  if (at == path.back()) return say.goal();

  std::string prefix = opening ? say.opening() : "";
  auto on_path = std::find(path.begin(), path.end(), at);
  auto landmark_at = [&](Cell c) -> const Landmark* {
    for (const auto& l : map.landmarks) {
      if (l.cell == c) return &l;
    }
    return nullptr;
  };
  auto count = [&](int n) { return n + count_delta >= 1 ? n + count_delta : n + 1; };

  if (on_path != path.end()) {
    std::size_t p = static_cast<std::size_t>(on_path - path.begin());
    Step dir = *step_between(path[p], path[p + 1]);
    std::size_t q = p + 1;
    while (q + 1 < path.size() && step_between(path[q], path[q + 1]) == dir) ++q;
    std::string line = prefix + say.instruction(dir, count(static_cast<int>(q - p)));
    if (const auto* l = landmark_at(path[q])) line += say.landmark(*l);
    return line + ".";
  }

  // Off the route: lead back to the closest route cell, preferring later ones.
  std::size_t best = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (manhattan(path[i], at) <= manhattan(path[best], at)) best = i;
  }
  int dx = path[best].x - at.x;
  int dy = path[best].y - at.y;
  std::string line = prefix + say.wait();
  if (dy != 0) {
    line += say.instruction(dy > 0 ? Step::down : Step::up, count(std::abs(dy)));
  } else {
    line += say.instruction(dx > 0 ? Step::right : Step::left, count(std::abs(dx)));
  }
  return line + ".";
}

std::string navigate(const PromptContext& ctx, const Phrasing& say, bool alt_ack) {
  auto dirs = parse_directions(ctx.latest_human);
  if (dirs.empty()) return say.clarify();
  std::string line = say.ack(alt_ack);
  std::string moves;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (i > 0) line += say.conj();
    line += say.steps(dirs[i].count) + " " + say.heading(dirs[i].step);
    for (int k = 0; k < dirs[i].count; ++k) moves += move_directive(dirs[i].step);
  }
  return line + ". " + moves;
}

}  // namespace

std::string route_instruction(const MapKnowledge& map, Cell avatar, bool spanish, bool opening, int count_delta) {
  return instruct(map, avatar, opening, Phrasing{spanish}, count_delta);
}

std::string ScriptedBot::generate(const PromptContext& ctx) {
  Phrasing say{wants_spanish(ctx)};
  if (ctx.bot_role == Role::instructor) return instruct(ctx.map, ctx.avatar.value_or(ctx.map.start), ctx.opening, say, 0);
  bool alt_ack = (splitmix64(seed_ ^ ctx.history.size()) & 1) != 0;
  return navigate(ctx, say, alt_ack);
}

BotTurn bot_turn(AgentBackend& backend, const PromptContext& ctx, const StrategyConfig& cfg, const DialogState& state,
                 const TextAnalyzer& analyzer, const Translator& tr, SeededRandom& rng) {
  BotTurn out;
  bool ok = false;
  for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
    try {
      out.raw_text = backend.generate(ctx);
      ok = !tidy_spaces(out.raw_text).empty();
      if (!ok) spdlog::warn("backend returned an empty reply (attempt {})", attempt + 1);
    } catch (const std::exception& e) {
      spdlog::warn("backend failure (attempt {}): {}", attempt + 1, e.what());
    }
  }
  if (!ok) {
    out.raw_text = std::string(kFallbackLine);
    out.degraded = true;
  }
  ParsedReply parsed = parse_move_commands(out.raw_text);
  if (tidy_spaces(parsed.text).empty()) parsed.text = "Ok.";
  auto applied = apply_strategy(cfg, state, parsed.text, analyzer, tr, rng);
  out.final_text = std::move(applied.text);
  out.degraded = out.degraded || applied.degraded;
  out.translated = applied.translated;
  if (ctx.bot_role == Role::navigator) out.moves = std::move(parsed.steps);
  return out;
}

}  // namespace mapcs

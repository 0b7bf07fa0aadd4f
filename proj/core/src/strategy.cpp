#include "mapcs/strategy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <spdlog/spdlog.h>

#include "mapcs/util/utf8.hpp"

namespace mapcs {

std::string_view to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::alt_baseline: return "alt_baseline";
    case StrategyKind::alt_alignment: return "alt_alignment";
    case StrategyKind::alt_adversarial: return "alt_adversarial";
    case StrategyKind::alt_random: return "alt_random";
    case StrategyKind::alt_short_context: return "alt_short_context";
    case StrategyKind::ins_baseline: return "ins_baseline";
    case StrategyKind::ins_congruent: return "ins_congruent";
    case StrategyKind::ins_fem_incongruent: return "ins_fem_incongruent";
    case StrategyKind::ins_masc_incongruent: return "ins_masc_incongruent";
  }
  return "alt_baseline";
}

std::optional<StrategyKind> parse_strategy_kind(std::string_view s) {
  for (auto k : kAllStrategies) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

bool is_insertional(StrategyKind k) {
  return k == StrategyKind::ins_baseline || k == StrategyKind::ins_congruent ||
         k == StrategyKind::ins_fem_incongruent || k == StrategyKind::ins_masc_incongruent;
}

void StrategyConfig::validate() const {
  if (k < 1) throw ConfigError("short-context window k must be at least 1, got " + std::to_string(k));
  if (!(switch_probability >= 0.0 && switch_probability <= 1.0)) {
    throw ConfigError("switch probability must lie in [0, 1]");
  }
}

std::string StrategyConfig::name() const {
  std::string out(to_string(kind));
  std::vector<std::string> params;
  if (k != 3) params.push_back("k=" + std::to_string(k));
  if (switch_probability != 0.5) {
    std::ostringstream p;
    p << "p=" << switch_probability;
    params.push_back(p.str());
  }
  for (std::size_t i = 0; i < params.size(); ++i) out += (i == 0 ? ":" : ",") + params[i];
  return out;
}

namespace {

int parse_int(std::string_view s, std::string_view spec) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("bad integer '" + std::string(s) + "' in condition '" + std::string(spec) + "'");
  }
  return v;
}

double parse_double(std::string_view s, std::string_view spec) {
  std::string str(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != str.size()) {
    throw ConfigError("bad number '" + str + "' in condition '" + std::string(spec) + "'");
  }
  return v;
}

}  // namespace

StrategyConfig StrategyConfig::parse(std::string_view spec) {
  StrategyConfig cfg;
  std::string_view head = spec.substr(0, spec.find(':'));
  if (head.size() > 5 && head.substr(0, 5) == "alt_k") {
    cfg.kind = StrategyKind::alt_short_context;
    cfg.k = parse_int(head.substr(5), spec);
  } else if (auto kind = parse_strategy_kind(head)) {
    cfg.kind = *kind;
  } else {
    throw ConfigError("unknown condition '" + std::string(spec) + "'");
  }
  if (head.size() < spec.size()) {
    std::string_view rest = spec.substr(head.size() + 1);
    while (!rest.empty()) {
      std::string_view item = rest.substr(0, rest.find(','));
      rest = item.size() < rest.size() ? rest.substr(item.size() + 1) : std::string_view{};
      auto eq = item.find('=');
      if (eq == std::string_view::npos) throw ConfigError("expected key=value in '" + std::string(spec) + "'");
      auto key = item.substr(0, eq);
      auto value = item.substr(eq + 1);
      if (key == "k") {
        cfg.k = parse_int(value, spec);
      } else if (key == "p") {
        cfg.switch_probability = parse_double(value, spec);
      } else {
        throw ConfigError("unknown parameter '" + std::string(key) + "' in '" + std::string(spec) + "'");
      }
    }
  }
  cfg.validate();
  return cfg;
}

std::vector<StrategyConfig> parse_condition_list(std::string_view list) {
  std::vector<std::string> specs;
  while (!list.empty()) {
    std::string_view item = list.substr(0, list.find(','));
    list = item.size() < list.size() ? list.substr(item.size() + 1) : std::string_view{};
    if (item.empty()) continue;
    bool continues = item.find('=') != std::string_view::npos && item.find(':') == std::string_view::npos;
    if (continues && !specs.empty()) {
      specs.back() += ",";
      specs.back() += item;
    } else {
      specs.emplace_back(item);
    }
  }
  std::vector<StrategyConfig> out;
  for (const auto& spec : specs) {
    if (spec == "all") {
      for (auto kind : kAllStrategies) out.push_back(StrategyConfig{.kind = kind});
    } else {
      out.push_back(StrategyConfig::parse(spec));
    }
  }
  if (out.empty()) throw ConfigError("no conditions given");
  return out;
}

DialogState::DialogState(std::span<const Utterance> history) : history_(history) {
  bool run_open = true;
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (it->speaker == Speaker::human) {
      if (!last_human_) last_human_ = it->label;
      continue;
    }
    ++bot_count_;
    if (!run_open || !is_unilingual(it->label)) continue;
    Language lang = language_of(it->label);
    if (run_ == 0) {
      run_language_ = lang;
      run_ = 1;
    } else if (lang == run_language_) {
      ++run_;
    } else {
      run_open = false;
    }
  }
}

std::string alt_alignment(const DialogState& state, std::string_view candidate, const TextAnalyzer& analyzer,
                          const Translator& tr) {
  auto human = state.last_human_label();
  if (!human || !is_unilingual(*human)) return std::string(candidate);
  if (analyzer.label(candidate) == *human) return std::string(candidate);
  return tr.translate(candidate, language_of(*human));
}

std::string alt_adversarial(const DialogState& state, std::string_view candidate, const TextAnalyzer& analyzer,
                            const Translator& tr) {
  auto human = state.last_human_label();
  if (!human || !is_unilingual(*human)) return std::string(candidate);
  Language target = other_language(language_of(*human));
  if (analyzer.label(candidate) == label_of(target)) return std::string(candidate);
  return tr.translate(candidate, target);
}

std::string alt_random(const StrategyConfig& cfg, std::string_view candidate, const TextAnalyzer& analyzer,
                       const Translator& tr, SeededRandom& rng) {
  bool flip = rng.bernoulli(cfg.switch_probability);
  Label label = analyzer.label(candidate);
  if (!flip || !is_unilingual(label)) return std::string(candidate);
  return tr.translate(candidate, other_language(language_of(label)));
}

std::string alt_short_context(const StrategyConfig& cfg, const DialogState& state, std::string_view candidate,
                              const TextAnalyzer& analyzer, const Translator& tr) {
  if (state.bot_unilingual_run() < cfg.k) return std::string(candidate);
  if (analyzer.label(candidate) != label_of(state.run_language())) return std::string(candidate);
  return tr.translate(candidate, other_language(state.run_language()));
}

namespace {

std::string match_initial_case(const std::string& replacement, std::string_view original) {
  return util::is_upper_initial(original) ? util::capitalize_first(replacement) : replacement;
}

}  // namespace

std::string ins_transform(StrategyKind kind, std::string_view candidate, const TextAnalyzer& analyzer) {
  if (kind != StrategyKind::ins_congruent && kind != StrategyKind::ins_fem_incongruent &&
      kind != StrategyKind::ins_masc_incongruent) {
    return std::string(candidate);
  }
  auto toks = analyzer.tokens(candidate);
  auto spans = analyzer.noun_phrases(toks);
  const auto& lex = analyzer.lexicon();

  struct Edit {
    std::size_t offset;
    std::size_t length;
    std::string text;
  };
  std::vector<Edit> edits;
  for (const auto& span : spans) {
    if (span.noun_lang != Language::spanish) continue;
    const Token& det = toks[span.det_index];
    const Token& noun = toks[span.noun_index];
    const NounEntry* entry = lex.lookup_es(noun.lower);
    if (!entry) continue;
    bool switch_det = false;
    if (kind == StrategyKind::ins_fem_incongruent) {
      if (entry->spanish_gender != Gender::feminine) continue;
      switch_det = true;
    } else if (kind == StrategyKind::ins_masc_incongruent) {
      if (entry->spanish_gender != Gender::masculine) continue;
      switch_det = true;
    }
    if (switch_det) {
      Gender flipped = span.det_gender == Gender::masculine ? Gender::feminine : Gender::masculine;
      edits.push_back({det.offset, det.surface.size(),
                       match_initial_case(lex.determiners().to_gender(det.lower, flipped), det.surface)});
    }
    edits.push_back({noun.offset, noun.surface.size(), match_initial_case(entry->english_lemma, noun.surface)});
  }

  std::string out(candidate);
  for (auto it = edits.rbegin(); it != edits.rend(); ++it) out.replace(it->offset, it->length, it->text);
  return out;
}

StrategyOutcome apply_strategy(const StrategyConfig& cfg, const DialogState& state, std::string_view candidate,
                               const TextAnalyzer& analyzer, const Translator& tr, SeededRandom& rng) {
  StrategyOutcome result;
  result.candidate_label = analyzer.label(candidate);
  try {
    switch (cfg.kind) {
      case StrategyKind::alt_baseline:
      case StrategyKind::ins_baseline:
        result.text = std::string(candidate);
        break;
      case StrategyKind::alt_alignment:
        result.text = alt_alignment(state, candidate, analyzer, tr);
        break;
      case StrategyKind::alt_adversarial:
        result.text = alt_adversarial(state, candidate, analyzer, tr);
        break;
      case StrategyKind::alt_random:
        result.text = alt_random(cfg, candidate, analyzer, tr, rng);
        break;
      case StrategyKind::alt_short_context:
        result.text = alt_short_context(cfg, state, candidate, analyzer, tr);
        break;
      case StrategyKind::ins_congruent:
      case StrategyKind::ins_fem_incongruent:
      case StrategyKind::ins_masc_incongruent:
        result.text = ins_transform(cfg.kind, candidate, analyzer);
        break;
    }
  } catch (const TranslationError& e) {
    spdlog::warn("degraded turn under {}: {}", cfg.name(), e.what());
    result.text = std::string(candidate);
    result.degraded = true;
    return result;
  }
  result.translated = !is_insertional(cfg.kind) && result.text != candidate;
  return result;
}

}  // namespace mapcs

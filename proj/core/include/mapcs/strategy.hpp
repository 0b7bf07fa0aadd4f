#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mapcs/analyzer.hpp"
#include "mapcs/random.hpp"
#include "mapcs/text.hpp"
#include "mapcs/translator.hpp"

namespace mapcs {

enum class StrategyKind {
  alt_baseline,
  alt_alignment,
  alt_adversarial,
  alt_random,
  alt_short_context,
  ins_baseline,
  ins_congruent,
  ins_fem_incongruent,
  ins_masc_incongruent,
};

inline constexpr StrategyKind kAllStrategies[] = {
    StrategyKind::alt_baseline,        StrategyKind::alt_alignment,   StrategyKind::alt_adversarial,
    StrategyKind::alt_random,          StrategyKind::alt_short_context, StrategyKind::ins_baseline,
    StrategyKind::ins_congruent,       StrategyKind::ins_fem_incongruent, StrategyKind::ins_masc_incongruent,
};

std::string_view to_string(StrategyKind k);
std::optional<StrategyKind> parse_strategy_kind(std::string_view s);
bool is_insertional(StrategyKind k);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct StrategyConfig {
  StrategyKind kind = StrategyKind::alt_baseline;
  int k = 3;
  double switch_probability = 0.5;
  std::uint64_t rng_seed = 0;

  /// Throws ConfigError unless k >= 1 and switch_probability is in [0, 1].
  void validate() const;

  /// Kind name, with ":k=N" / ":p=X" suffixes for non-default parameters.
  std::string name() const;

  /// Accepts "<kind>", "<kind>:k=5", "<kind>:p=0.3", "<kind>:k=5,p=0.3" and
  /// the shorthand "alt_k<N>" for a short-context window of N.
  static StrategyConfig parse(std::string_view spec);

  bool operator==(const StrategyConfig&) const = default;
};

/// Comma-separated condition specs; "all" expands to every strategy with
/// default parameters. A "key=value" item continues the previous spec, so
/// "alt_random:p=0.3,ins_congruent" and "alt_short_context:k=5,p=0.3" both parse.
std::vector<StrategyConfig> parse_condition_list(std::string_view list);

/// Strategy-relevant view of a dialog: the utterances so far in the current
/// game, in order.
class DialogState {
 public:
  explicit DialogState(std::span<const Utterance> history);

  std::span<const Utterance> history() const { return history_; }

  /// Consecutive trailing bot utterances sharing one language. Mixed and
  /// none-labeled bot utterances are skipped without breaking the run.
  int bot_unilingual_run() const { return run_; }
  Language run_language() const { return run_language_; }
  int bot_utterance_count() const { return bot_count_; }

  /// Label of the most recent human utterance, if any.
  std::optional<Label> last_human_label() const { return last_human_; }

 private:
  std::span<const Utterance> history_;
  int run_ = 0;
  Language run_language_ = Language::undecided;
  int bot_count_ = 0;
  std::optional<Label> last_human_;
};

struct StrategyOutcome {
  std::string text;
  Label candidate_label = Label::none;
  bool translated = false;
  bool degraded = false;  // translator failed; candidate passed through
};

/// Applies the configured strategy to a backend candidate. A translator
/// failure returns the candidate unchanged with `degraded` set.
StrategyOutcome apply_strategy(const StrategyConfig& cfg, const DialogState& state, std::string_view candidate,
                               const TextAnalyzer& analyzer, const Translator& tr, SeededRandom& rng);

// The individual rules. They throw TranslationError when the translator does.

std::string alt_alignment(const DialogState& state, std::string_view candidate, const TextAnalyzer& analyzer,
                          const Translator& tr);
std::string alt_adversarial(const DialogState& state, std::string_view candidate, const TextAnalyzer& analyzer,
                            const Translator& tr);
/// Draws one coin per call, whether or not the candidate is eligible.
std::string alt_random(const StrategyConfig& cfg, std::string_view candidate, const TextAnalyzer& analyzer,
                       const Translator& tr, SeededRandom& rng);
std::string alt_short_context(const StrategyConfig& cfg, const DialogState& state, std::string_view candidate,
                              const TextAnalyzer& analyzer, const Translator& tr);

/// Noun insertion for the insertional kinds; identity for every other kind.
std::string ins_transform(StrategyKind kind, std::string_view candidate, const TextAnalyzer& analyzer);

}  // namespace mapcs

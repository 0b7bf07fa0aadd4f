#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mapcs/dtw.hpp"
#include "mapcs/game.hpp"
#include "mapcs/noun_phrase.hpp"
#include "mapcs/text.hpp"

namespace mapcs {

/// A tally with its eligible denominator; the rate is 0 when nothing is
/// eligible.
struct RateCount {
  std::size_t hits = 0;
  std::size_t eligible = 0;
  double rate() const { return eligible ? static_cast<double>(hits) / static_cast<double>(eligible) : 0.0; }
  RateCount& operator+=(const RateCount& o) {
    hits += o.hits;
    eligible += o.eligible;
    return *this;
  }
  bool operator==(const RateCount&) const = default;
};

struct MetricOptions {
  Speaker speaker = Speaker::human;
  // Inter-sentential CS: when true, mixed/none utterances are dropped from
  // the speaker's sequence before pairing instead of breaking adjacency.
  bool skip_mixed_none = false;
};

/// Adjacent pairs of the speaker's utterances where both are unilingual;
/// hits are the pairs whose languages differ.
RateCount intersentential_switches(std::span<const Utterance> transcript, const MetricOptions& opts = {});
double intersentential_cs_rate(std::span<const Utterance> transcript, const MetricOptions& opts = {});

/// Human utterances that follow at least one bot utterance, where neither the
/// human utterance nor the most recent bot utterance is labeled none. A hit
/// is a label match, with mixed on either side matching anything.
RateCount entrainment(std::span<const Utterance> transcript);
double entrainment_rate(std::span<const Utterance> transcript);

struct NpCounts {
  std::array<std::size_t, 5> by_class{};  // indexed by MixedNpClass

  std::size_t& operator[](MixedNpClass c) { return by_class[static_cast<std::size_t>(c)]; }
  std::size_t operator[](MixedNpClass c) const { return by_class[static_cast<std::size_t>(c)]; }
  /// Mixed NPs outside the ambiguous bucket.
  std::size_t total() const;
  NpCounts& operator+=(const NpCounts& o);
  bool operator==(const NpCounts&) const = default;
};

inline constexpr MixedNpClass kAllNpClasses[] = {MixedNpClass::congruent_masc, MixedNpClass::congruent_fem,
                                                 MixedNpClass::incongruent_masc, MixedNpClass::incongruent_fem,
                                                 MixedNpClass::ambiguous};

/// Mixed NPs (Spanish determiner + English noun) in the speaker's utterances
/// whose matrix language is Spanish, read from each utterance's annotated
/// noun phrases.
NpCounts tabulate_np_switches(std::span<const Utterance> transcript, Speaker speaker = Speaker::human);

struct DialogStats {
  std::size_t n_dialogs = 0;
  std::size_t n_utterances = 0;
  std::size_t n_tokens = 0;  // word and number tokens
  std::array<std::size_t, 4> label_counts{};  // indexed by Label
  RateCount intersentential;
  RateCount entrainment;
  NpCounts np_counts;

  double mean_utterances_per_dialog() const;
  double mean_tokens_per_utterance() const;
  double fraction(Label l) const;

  /// Folds in one dialog's transcript, counting only opts.speaker turns
  /// (entrainment always scores human turns).
  void add_dialog(std::span<const Utterance> transcript, const MetricOptions& opts = {});
};

struct GameSummary {
  std::string map_id;
  Role human_role = Role::instructor;
  double duration_s = 0.0;
  bool completed = false;
  RouteScore route;
};

struct SessionReport {
  DialogStats dialog;
  std::vector<GameSummary> games;

  double fraction_complete() const;
  double mean_duration_s() const;
  double mean_route_distance() const;
};

SessionReport session_report(const Session& s, const MetricOptions& opts = {});

}  // namespace mapcs

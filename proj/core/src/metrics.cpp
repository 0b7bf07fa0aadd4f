#include "mapcs/metrics.hpp"

#include <numeric>

namespace mapcs {

RateCount intersentential_switches(std::span<const Utterance> transcript, const MetricOptions& opts) {
  RateCount out;
  const Utterance* prev = nullptr;
  for (const auto& u : transcript) {
    if (u.speaker != opts.speaker) continue;
    if (opts.skip_mixed_none && !is_unilingual(u.label)) continue;
    if (prev && is_unilingual(prev->label) && is_unilingual(u.label)) {
      ++out.eligible;
      if (prev->label != u.label) ++out.hits;
    }
    prev = &u;
  }
  return out;
}

double intersentential_cs_rate(std::span<const Utterance> transcript, const MetricOptions& opts) {
  return intersentential_switches(transcript, opts).rate();
}

RateCount entrainment(std::span<const Utterance> transcript) {
  RateCount out;
  const Utterance* last_bot = nullptr;
  for (const auto& u : transcript) {
    if (u.speaker == Speaker::bot) {
      last_bot = &u;
      continue;
    }
    if (!last_bot || u.label == Label::none || last_bot->label == Label::none) continue;
    ++out.eligible;
    if (u.label == Label::mixed || last_bot->label == Label::mixed || u.label == last_bot->label) ++out.hits;
  }
  return out;
}

double entrainment_rate(std::span<const Utterance> transcript) { return entrainment(transcript).rate(); }

std::size_t NpCounts::total() const {
  return std::accumulate(by_class.begin(), by_class.end(), std::size_t{0}) - (*this)[MixedNpClass::ambiguous];
}

NpCounts& NpCounts::operator+=(const NpCounts& o) {
  for (std::size_t i = 0; i < by_class.size(); ++i) by_class[i] += o.by_class[i];
  return *this;
}

NpCounts tabulate_np_switches(std::span<const Utterance> transcript, Speaker speaker) {
  NpCounts out;
  for (const auto& u : transcript) {
    if (u.speaker != speaker || !has_spanish_matrix(u.tokens)) continue;
    for (const auto& span : u.noun_phrases) {
      if (span.noun_lang == Language::english) ++out[classify_mixed_np(span)];
    }
  }
  return out;
}

double DialogStats::mean_utterances_per_dialog() const {
  return n_dialogs ? static_cast<double>(n_utterances) / static_cast<double>(n_dialogs) : 0.0;
}

double DialogStats::mean_tokens_per_utterance() const {
  return n_utterances ? static_cast<double>(n_tokens) / static_cast<double>(n_utterances) : 0.0;
}

double DialogStats::fraction(Label l) const {
  return n_utterances ? static_cast<double>(label_counts[static_cast<std::size_t>(l)]) /
                            static_cast<double>(n_utterances)
                      : 0.0;
}

void DialogStats::add_dialog(std::span<const Utterance> transcript, const MetricOptions& opts) {
  ++n_dialogs;
  for (const auto& u : transcript) {
    if (u.speaker != opts.speaker) continue;
    ++n_utterances;
    ++label_counts[static_cast<std::size_t>(u.label)];
    for (const auto& t : u.tokens) {
      if (t.kind == TokenKind::word || t.kind == TokenKind::number) ++n_tokens;
    }
  }
  intersentential += intersentential_switches(transcript, opts);
  entrainment += mapcs::entrainment(transcript);
  np_counts += tabulate_np_switches(transcript, opts.speaker);
}

double SessionReport::fraction_complete() const {
  if (games.empty()) return 0.0;
  std::size_t done = 0;
  for (const auto& g : games) done += g.completed ? 1 : 0;
  return static_cast<double>(done) / static_cast<double>(games.size());
}

double SessionReport::mean_duration_s() const {
  if (games.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& g : games) sum += g.duration_s;
  return sum / static_cast<double>(games.size());
}

double SessionReport::mean_route_distance() const {
  if (games.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& g : games) sum += g.route.normalized;
  return sum / static_cast<double>(games.size());
}

SessionReport session_report(const Session& s, const MetricOptions& opts) {
  SessionReport r;
  for (const auto& g : s.games) {
    r.dialog.add_dialog(g.transcript, opts);
    if (g.active()) continue;
    r.games.push_back({g.map_id, g.human_role, g.duration_s(), g.completed(), g.route.value_or(RouteScore{})});
  }
  return r;
}

}  // namespace mapcs

#include "mapcs/noun_phrase.hpp"

#include <stdexcept>

namespace mapcs {

std::string_view to_string(MixedNpClass c) {
  switch (c) {
    case MixedNpClass::congruent_masc: return "congruent_masc";
    case MixedNpClass::congruent_fem: return "congruent_fem";
    case MixedNpClass::incongruent_masc: return "incongruent_masc";
    case MixedNpClass::incongruent_fem: return "incongruent_fem";
    case MixedNpClass::ambiguous: return "ambiguous";
  }
  return "ambiguous";
}

std::optional<MixedNpClass> parse_mixed_np_class(std::string_view s) {
  for (auto c : {MixedNpClass::congruent_masc, MixedNpClass::congruent_fem, MixedNpClass::incongruent_masc,
                 MixedNpClass::incongruent_fem, MixedNpClass::ambiguous}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::vector<NounPhraseSpan> extract_simple_nps(std::span<const Token> tokens, const Lexicon& lex,
                                               const AdjectiveList& adjectives) {
  std::vector<NounPhraseSpan> spans;
  const auto& dets = lex.determiners();
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const Token& det = tokens[i];
    const Token& noun = tokens[i + 1];
    if (det.kind != TokenKind::word || noun.kind != TokenKind::word) continue;
    auto det_gender = dets.gender_of(det.lower);
    if (!det_gender) continue;

    NounPhraseSpan span;
    span.det_index = i;
    span.noun_index = i + 1;
    span.det_gender = *det_gender;
    if (const auto* entry = lex.lookup_es(noun.lower)) {
      span.noun_lang = Language::spanish;
      span.noun_spanish_lemma = entry->spanish_lemma;
      span.noun_gender = to_noun_gender(entry->spanish_gender);
    } else if (auto g = lex.lookup_en_gender(noun.lower)) {
      span.noun_lang = Language::english;
      span.noun_gender = *g;
      auto sources = lex.spanish_for(noun.lower);
      if (!sources.empty()) span.noun_spanish_lemma = sources.front()->spanish_lemma;
    } else {
      continue;
    }

    if (i + 2 < tokens.size()) {
      const Token& next = tokens[i + 2];
      if (next.kind == TokenKind::word && adjectives.count(next.lower)) continue;
    }
    spans.push_back(std::move(span));
    ++i;  // the noun cannot open another span
  }
  return spans;
}

MixedNpClass classify_mixed_np(const NounPhraseSpan& span) {
  if (span.noun_lang != Language::english) {
    throw std::domain_error("not a mixed noun phrase: the noun is Spanish");
  }
  switch (span.noun_gender) {
    case NounGender::ambiguous:
      return MixedNpClass::ambiguous;
    case NounGender::masculine:
      return span.det_gender == Gender::masculine ? MixedNpClass::congruent_masc : MixedNpClass::incongruent_masc;
    case NounGender::feminine:
      return span.det_gender == Gender::feminine ? MixedNpClass::congruent_fem : MixedNpClass::incongruent_fem;
  }
  return MixedNpClass::ambiguous;
}

}  // namespace mapcs

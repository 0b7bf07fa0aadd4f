#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mapcs/lexicon.hpp"
#include "mapcs/text.hpp"

namespace mapcs {


enum class MixedNpClass { congruent_masc, congruent_fem, incongruent_masc, incongruent_fem, ambiguous };

std::string_view to_string(MixedNpClass c);
std::optional<MixedNpClass> parse_mixed_np_class(std::string_view s);

using AdjectiveList = std::unordered_set<std::string>;

/// Simple noun phrases: a Spanish determiner followed by a Spanish noun from
/// the noun dictionary or an English noun from the gender dictionary. Spans
/// whose noun is directly followed by a listed Spanish adjective are dropped.
/// Returned spans are disjoint and increasing.
std::vector<NounPhraseSpan> extract_simple_nps(std::span<const Token> tokens, const Lexicon& lex,
                                               const AdjectiveList& adjectives);

/// Gender agreement class of a Spanish-determiner + English-noun span. Throws
/// std::domain_error for spans with a Spanish noun.
MixedNpClass classify_mixed_np(const NounPhraseSpan& span);

}  // namespace mapcs

#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mapcs/lexicon.hpp"

namespace mapcs {

using Millis = std::chrono::milliseconds;

enum class Language { english, spanish, undecided };

/// Utterance-level language label.
enum class Label { english, spanish, mixed, none };

enum class TokenKind { word, punctuation, number, other };

enum class Speaker { human, bot };

std::string_view to_string(Language l);
std::string_view to_string(Label l);
std::string_view to_string(TokenKind k);
std::string_view to_string(Speaker s);
std::optional<Label> parse_label(std::string_view s);
std::optional<Language> parse_language(std::string_view s);
std::optional<Speaker> parse_speaker(std::string_view s);

/// The other of the two languages. Undecided maps to itself.
Language other_language(Language l);

/// English/Spanish label for a decided language; none for undecided.
Label label_of(Language l);

/// Language carried by a unilingual label, otherwise undecided.
Language language_of(Label l);

inline bool is_unilingual(Label l) { return l == Label::english || l == Label::spanish; }

struct Token {
  std::string surface;
  std::string lower;
  TokenKind kind = TokenKind::word;
  Language lang = Language::undecided;
  std::size_t offset = 0;  // byte offset of `surface` in the source text
};

/// Splits on whitespace and detaches leading/trailing punctuation (including
/// inverted ¿ ¡) into separate tokens. Word-internal apostrophes and hyphens
/// stay attached ("it's" is one token).
std::vector<Token> tokenize(std::string_view text);

/// english/spanish when only one decided language is present, mixed when both
/// are, none when no token carries a decided language.
Label label_utterance(std::span<const Token> tokens);

/// Determiner immediately followed by a dictionary noun.
struct NounPhraseSpan {
  std::size_t det_index = 0;
  std::size_t noun_index = 0;  // always det_index + 1
  Gender det_gender = Gender::masculine;
  std::string noun_spanish_lemma;  // first dictionary equivalent for English nouns
  NounGender noun_gender = NounGender::masculine;
  Language noun_lang = Language::spanish;
};

struct Utterance {
  Speaker speaker = Speaker::human;
  std::string text;
  std::vector<Token> tokens;
  Label label = Label::none;
  std::vector<NounPhraseSpan> noun_phrases;
  Millis timestamp{0};  // since session start
  // Bot turns only: the backend's reply before directive stripping and
  // strategy transformation, and whether the turn fell back to a canned line
  // or an untransformed candidate.
  std::string backend_text;
  bool degraded = false;
};

struct LanguageCounts {
  std::size_t english = 0;
  std::size_t spanish = 0;
};

LanguageCounts count_languages(std::span<const Token> tokens);

/// Matrix language is Spanish iff strictly more decided tokens are Spanish
/// than English.
bool has_spanish_matrix(std::span<const Token> tokens);

}  // namespace mapcs

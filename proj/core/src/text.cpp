#include "mapcs/text.hpp"

#include "mapcs/util/utf8.hpp"

namespace mapcs {

std::string_view to_string(Language l) {
  switch (l) {
    case Language::english: return "english";
    case Language::spanish: return "spanish";
    case Language::undecided: return "undecided";
  }
  return "undecided";
}

std::string_view to_string(Label l) {
  switch (l) {
    case Label::english: return "english";
    case Label::spanish: return "spanish";
    case Label::mixed: return "mixed";
    case Label::none: return "none";
  }
  return "none";
}

std::string_view to_string(TokenKind k) {
  switch (k) {
    case TokenKind::word: return "word";
    case TokenKind::punctuation: return "punctuation";
    case TokenKind::number: return "number";
    case TokenKind::other: return "other";
  }
  return "other";
}

std::string_view to_string(Speaker s) { return s == Speaker::human ? "human" : "bot"; }

std::optional<Label> parse_label(std::string_view s) {
  if (s == "english") return Label::english;
  if (s == "spanish") return Label::spanish;
  if (s == "mixed") return Label::mixed;
  if (s == "none") return Label::none;
  return std::nullopt;
}

std::optional<Language> parse_language(std::string_view s) {
  if (s == "english") return Language::english;
  if (s == "spanish") return Language::spanish;
  if (s == "undecided") return Language::undecided;
  return std::nullopt;
}

std::optional<Speaker> parse_speaker(std::string_view s) {
  if (s == "human") return Speaker::human;
  if (s == "bot") return Speaker::bot;
  return std::nullopt;
}

Language other_language(Language l) {
  switch (l) {
    case Language::english: return Language::spanish;
    case Language::spanish: return Language::english;
    case Language::undecided: return Language::undecided;
  }
  return Language::undecided;
}

Label label_of(Language l) {
  switch (l) {
    case Language::english: return Label::english;
    case Language::spanish: return Label::spanish;
    case Language::undecided: return Label::none;
  }
  return Label::none;
}

Language language_of(Label l) {
  if (l == Label::english) return Language::english;
  if (l == Label::spanish) return Language::spanish;
  return Language::undecided;
}

namespace {

bool is_punctuation(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) || (cp >= 0x5B && cp <= 0x60) ||
           (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0xA1:    // ¡
    case 0xBF:    // ¿
    case 0xAB:    // «
    case 0xBB:    // »
    case 0xB7:    // ·
    case 0x2013:  // –
    case 0x2014:  // —
    case 0x2018:
    case 0x2019:
    case 0x201C:
    case 0x201D:
    case 0x2026:  // …
      return true;
    default:
      return false;
  }
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

struct Piece {
  std::size_t begin;
  std::size_t end;
  char32_t cp;
};

TokenKind classify_core(std::string_view core) {
  bool any_letter = false;
  bool all_numeric = true;
  for (std::size_t pos = 0; pos < core.size();) {
    char32_t cp = util::next_code_point(core, pos);
    if (util::is_letter(cp)) any_letter = true;
    if (!((cp >= '0' && cp <= '9') || cp == '.' || cp == ',')) all_numeric = false;
  }
  if (any_letter) return TokenKind::word;
  if (all_numeric) return TokenKind::number;
  return TokenKind::other;
}

Token make_token(std::string_view text, std::size_t begin, std::size_t end, TokenKind kind) {
  Token t;
  t.surface = std::string(text.substr(begin, end - begin));
  t.lower = util::fold_case(t.surface);
  t.kind = kind;
  t.offset = begin;
  return t;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t chunk_end = i;
    while (chunk_end < text.size() && !is_space(text[chunk_end])) ++chunk_end;

    std::vector<Piece> pieces;
    for (std::size_t pos = i; pos < chunk_end;) {
      std::size_t start = pos;
      char32_t cp = util::next_code_point(text.substr(0, chunk_end), pos);
      pieces.push_back({start, pos, cp});
    }
    std::size_t lo = 0;
    std::size_t hi = pieces.size();
    while (lo < hi && is_punctuation(pieces[lo].cp)) ++lo;
    while (hi > lo && is_punctuation(pieces[hi - 1].cp)) --hi;

    for (std::size_t p = 0; p < lo; ++p) {
      tokens.push_back(make_token(text, pieces[p].begin, pieces[p].end, TokenKind::punctuation));
    }
    if (lo < hi) {
      std::size_t begin = pieces[lo].begin;
      std::size_t end = pieces[hi - 1].end;
      tokens.push_back(make_token(text, begin, end, classify_core(text.substr(begin, end - begin))));
    }
    for (std::size_t p = hi; p < pieces.size(); ++p) {
      tokens.push_back(make_token(text, pieces[p].begin, pieces[p].end, TokenKind::punctuation));
    }
    i = chunk_end;
  }
  return tokens;
}

LanguageCounts count_languages(std::span<const Token> tokens) {
  LanguageCounts c;
  for (const auto& t : tokens) {
    if (t.lang == Language::english) ++c.english;
    if (t.lang == Language::spanish) ++c.spanish;
  }
  return c;
}

Label label_utterance(std::span<const Token> tokens) {
  auto c = count_languages(tokens);
  if (c.english > 0 && c.spanish > 0) return Label::mixed;
  if (c.english > 0) return Label::english;
  if (c.spanish > 0) return Label::spanish;
  return Label::none;
}

bool has_spanish_matrix(std::span<const Token> tokens) {
  auto c = count_languages(tokens);
  return c.spanish > c.english;
}

}  // namespace mapcs

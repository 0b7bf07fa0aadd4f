#include "mapcs/translator.hpp"

#include <algorithm>

#include "mapcs/util/tsv.hpp"
#include "mapcs/util/utf8.hpp"

namespace mapcs {

namespace {

bool is_word_like(const Token& t) { return t.kind == TokenKind::word || t.kind == TokenKind::number; }

bool attaches_left(std::string_view p) {
  return p == "." || p == "," || p == "!" || p == "?" || p == ";" || p == ":" || p == ")" || p == "»" ||
         p == "…" || p == "”" || p == "’" || p == "%";
}

bool attaches_right(std::string_view p) {
  return p == "¿" || p == "¡" || p == "(" || p == "«" || p == "“" || p == "‘";
}

bool ends_sentence(std::string_view p) { return p == "." || p == "!" || p == "?" || p == "…"; }

bool looks_plural(const NounEntry& e) {
  return e.spanish_lemma.size() > 1 && e.english_lemma.size() > 1 && e.spanish_lemma.back() == 's' &&
         e.english_lemma.back() == 's';
}

bool starts_with_vowel_sound(std::string_view w) {
  return !w.empty() && std::string_view("aeiou").find(w.front()) != std::string_view::npos;
}

std::vector<std::string> phrase_key(std::string_view phrase) {
  std::vector<std::string> key;
  for (const auto& t : tokenize(phrase)) {
    if (is_word_like(t)) key.push_back(t.lower);
  }
  return key;
}

}  // namespace

std::string detokenize(const std::vector<std::string>& pieces) {
  std::string out;
  bool glue_next = true;
  bool sentence_start = true;
  for (const auto& p : pieces) {
    if (p.empty()) continue;
    bool left = attaches_left(p);
    if (!glue_next && !left) out += ' ';
    std::size_t pos = 0;
    char32_t first = util::next_code_point(p, pos);
    if (util::is_letter(first)) {
      out += sentence_start ? util::capitalize_first(p) : p;
      sentence_start = false;
    } else {
      out += p;
      if (ends_sentence(p)) sentence_start = true;
    }
    glue_next = attaches_right(p);
  }
  return out;
}

PhraseTableTranslator::PhraseTableTranslator(std::shared_ptr<const Lexicon> lexicon, std::vector<PhrasePair> phrases)
    : lexicon_(std::move(lexicon)) {
  for (const auto& p : phrases) {
    auto es = phrase_key(p.spanish);
    auto en = phrase_key(p.english);
    if (es.empty() || en.empty()) throw TranslationError("empty phrase pair '" + p.spanish + "'/'" + p.english + "'");
    es_to_en_.emplace(es, p.english);
    en_to_es_.emplace(en, p.spanish);
    max_phrase_ = std::max({max_phrase_, es.size(), en.size()});
  }
}

PhraseTableTranslator PhraseTableTranslator::load(const std::filesystem::path& phrase_tsv,
                                                  std::shared_ptr<const Lexicon> lexicon) {
  std::vector<PhrasePair> phrases;
  for (const auto& row : util::read_tsv(phrase_tsv)) {
    if (row.fields.size() != 2) {
      throw TranslationError(phrase_tsv.string() + ":" + std::to_string(row.line) +
                             ": expected spanish<TAB>english");
    }
    phrases.push_back({row.fields[0], row.fields[1]});
  }
  return PhraseTableTranslator(std::move(lexicon), std::move(phrases));
}

std::string PhraseTableTranslator::translate(std::string_view text, Language target) const {
  if (target == Language::undecided) throw TranslationError("translation target must be english or spanish");
  const bool to_english = target == Language::english;
  const auto& table = to_english ? es_to_en_ : en_to_es_;
  const auto& dets = lexicon_->determiners();
  auto toks = tokenize(text);

  std::vector<std::string> out;
  auto emit_phrase = [&out](std::string_view phrase) {
    for (const auto& t : tokenize(phrase)) out.push_back(t.lower == "i" ? "I" : t.lower);
  };

  // Spanish determiner (or contraction) + noun -> English.
  auto np_to_english = [&](const Token& det, const Token& noun) -> bool {
    const NounEntry* e = lexicon_->lookup_es(noun.lower);
    if (!e) return false;
    std::string_view d = det.lower;
    if (d == "el" || d == "la" || d == "los" || d == "las") {
      out.push_back("the");
    } else if (d == "al") {
      out.push_back("to");
      out.push_back("the");
    } else if (d == "del") {
      out.push_back("of");
      out.push_back("the");
    } else if (d == "un" || d == "una") {
      out.push_back(starts_with_vowel_sound(e->english_lemma) ? "an" : "a");
    } else if (d == "unos" || d == "unas") {
      out.push_back("some");
    } else {
      return false;
    }
    out.push_back(e->english_lemma);
    return true;
  };

  // English determiner + noun -> Spanish, merging "a el"/"de el" into al/del.
  auto np_to_spanish = [&](const Token& det, const Token& noun) -> bool {
    auto sources = lexicon_->spanish_for(noun.lower);
    if (sources.empty()) return false;
    const NounEntry& e = *sources.front();
    bool plural = looks_plural(e);
    std::string masc;
    std::string_view d = det.lower;
    if (d == "the") {
      masc = plural ? "los" : "el";
    } else if (d == "a" || d == "an") {
      masc = "un";
    } else if (d == "some") {
      masc = "unos";
    } else {
      return false;
    }
    std::string det_es = dets.to_gender(masc, e.spanish_gender);
    if (det_es == "el" && !out.empty() && (out.back() == "a" || out.back() == "de")) {
      out.back() = out.back() == "a" ? "al" : "del";
    } else {
      out.push_back(det_es);
    }
    out.push_back(e.spanish_lemma);
    return true;
  };

  for (std::size_t i = 0; i < toks.size();) {
    const Token& t = toks[i];
    if (t.kind == TokenKind::punctuation) {
      if (!(to_english && (t.surface == "¿" || t.surface == "¡"))) out.push_back(t.surface);
      ++i;
      continue;
    }
    if (!is_word_like(t)) {
      out.push_back(t.surface);
      ++i;
      continue;
    }

    std::size_t best = 0;
    const std::string* best_value = nullptr;
    std::vector<std::string> key;
    for (std::size_t j = i; j < toks.size() && key.size() < max_phrase_ && is_word_like(toks[j]); ++j) {
      key.push_back(toks[j].lower);
      if (auto it = table.find(key); it != table.end()) {
        best = key.size();
        best_value = &it->second;
      }
    }

    if (best < 2 && i + 1 < toks.size() && toks[i + 1].kind == TokenKind::word) {
      if (to_english ? np_to_english(t, toks[i + 1]) : np_to_spanish(t, toks[i + 1])) {
        i += 2;
        continue;
      }
    }
    if (best_value) {
      emit_phrase(*best_value);
      i += best;
      continue;
    }
    if (to_english) {
      if (const auto* e = lexicon_->lookup_es(t.lower)) {
        out.push_back(e->english_lemma);
        ++i;
        continue;
      }
    } else if (auto sources = lexicon_->spanish_for(t.lower); !sources.empty()) {
      out.push_back(sources.front()->spanish_lemma);
      ++i;
      continue;
    }
    out.push_back(t.surface);
    ++i;
  }
  return detokenize(out);
}

}  // namespace mapcs

#include "mapcs/lexicon.hpp"

#include <fstream>
#include <set>

#include "mapcs/util/tsv.hpp"

namespace mapcs {

std::string_view to_string(Gender g) {
  return g == Gender::masculine ? "masculine" : "feminine";
}

std::string_view to_string(NounGender g) {
  switch (g) {
    case NounGender::masculine: return "masculine";
    case NounGender::feminine: return "feminine";
    case NounGender::ambiguous: return "ambiguous";
  }
  return "ambiguous";
}

std::optional<Gender> parse_gender(std::string_view token) {
  if (token == "masculine") return Gender::masculine;
  if (token == "feminine") return Gender::feminine;
  return std::nullopt;
}

std::optional<NounGender> parse_noun_gender(std::string_view token) {
  if (token == "masculine") return NounGender::masculine;
  if (token == "feminine") return NounGender::feminine;
  if (token == "ambiguous") return NounGender::ambiguous;
  return std::nullopt;
}

NounGender to_noun_gender(Gender g) {
  return g == Gender::masculine ? NounGender::masculine : NounGender::feminine;
}

DeterminerTable::DeterminerTable()
    : to_feminine_{{"el", "la"}, {"un", "una"}, {"los", "las"}, {"unos", "unas"}} {
  for (const auto& [masc, fem] : to_feminine_) to_masculine_.emplace(fem, masc);
}

const DeterminerTable& DeterminerTable::standard() {
  static const DeterminerTable table;
  return table;
}

bool DeterminerTable::contains(std::string_view det) const { return gender_of(det).has_value(); }

std::optional<Gender> DeterminerTable::gender_of(std::string_view det) const {
  std::string key(det);
  if (to_feminine_.count(key)) return Gender::masculine;
  if (to_masculine_.count(key)) return Gender::feminine;
  return std::nullopt;
}

const std::string& DeterminerTable::to_gender(std::string_view det, Gender target) const {
  std::string key(det);
  if (auto it = to_feminine_.find(key); it != to_feminine_.end()) {
    return target == Gender::feminine ? it->second : it->first;
  }
  if (auto it = to_masculine_.find(key); it != to_masculine_.end()) {
    return target == Gender::masculine ? it->second : it->first;
  }
  throw std::domain_error("not a simple-NP determiner: '" + key + "'");
}

std::string map_determiner_gender(std::string_view det, Gender target) {
  return DeterminerTable::standard().to_gender(det, target);
}

Lexicon Lexicon::load(const std::filesystem::path& noun_dict_path,
                      const std::filesystem::path& gender_dict_path) {
  std::vector<NounEntry> nouns;
  for (const auto& row : util::read_tsv(noun_dict_path)) {
    if (row.fields.size() != 3) {
      throw LexiconError(noun_dict_path.string() + ":" + std::to_string(row.line) +
                         ": expected 3 tab-separated columns");
    }
    auto gender = parse_gender(row.fields[2]);
    if (!gender) {
      throw LexiconError(noun_dict_path.string() + ":" + std::to_string(row.line) +
                         ": unknown gender '" + row.fields[2] + "'");
    }
    nouns.push_back({row.fields[0], row.fields[1], *gender});
  }

  std::vector<EnglishGenderEntry> genders;
  for (const auto& row : util::read_tsv(gender_dict_path)) {
    if (row.fields.size() != 2) {
      throw LexiconError(gender_dict_path.string() + ":" + std::to_string(row.line) +
                         ": expected 2 tab-separated columns");
    }
    auto gender = parse_noun_gender(row.fields[1]);
    if (!gender) {
      throw LexiconError(gender_dict_path.string() + ":" + std::to_string(row.line) +
                         ": unknown gender '" + row.fields[1] + "'");
    }
    genders.push_back({row.fields[0], *gender});
  }
  return from_entries(std::move(nouns), std::move(genders));
}

Lexicon Lexicon::from_entries(std::vector<NounEntry> nouns, std::vector<EnglishGenderEntry> genders) {
  Lexicon lex;
  lex.nouns_ = std::move(nouns);
  lex.genders_ = std::move(genders);
  lex.build_indexes();

  // A gender entry must agree with the genders of its Spanish sources.
  for (const auto& entry : lex.genders_) {
    auto sources = lex.spanish_for(entry.english_lemma);
    if (sources.empty()) {
      throw LexiconError("gender entry '" + entry.english_lemma + "' has no Spanish source noun");
    }
    std::set<Gender> seen;
    for (const auto* src : sources) seen.insert(src->spanish_gender);
    NounGender expected =
        seen.size() > 1 ? NounGender::ambiguous : to_noun_gender(*seen.begin());
    if (expected != entry.gender) {
      throw LexiconError("gender entry '" + entry.english_lemma + "' is " +
                         std::string(to_string(entry.gender)) + " but its Spanish sources imply " +
                         std::string(to_string(expected)));
    }
  }
  return lex;
}

void Lexicon::build_indexes() {
  for (std::size_t i = 0; i < nouns_.size(); ++i) {
    const auto& n = nouns_[i];
    if (n.spanish_lemma.empty() || n.english_lemma.empty()) {
      throw LexiconError("empty lemma in noun dictionary row " + std::to_string(i + 1));
    }
    if (!by_spanish_.emplace(n.spanish_lemma, i).second) {
      throw LexiconError("duplicate Spanish lemma '" + n.spanish_lemma + "'");
    }
    by_english_[n.english_lemma].push_back(i);
  }
  for (std::size_t i = 0; i < genders_.size(); ++i) {
    if (!gender_by_english_.emplace(genders_[i].english_lemma, i).second) {
      throw LexiconError("duplicate English lemma '" + genders_[i].english_lemma + "'");
    }
  }
}

const NounEntry* Lexicon::lookup_es(std::string_view spanish_lemma) const {
  auto it = by_spanish_.find(std::string(spanish_lemma));
  return it == by_spanish_.end() ? nullptr : &nouns_[it->second];
}

std::optional<NounGender> Lexicon::lookup_en_gender(std::string_view english_lemma) const {
  auto it = gender_by_english_.find(std::string(english_lemma));
  if (it == gender_by_english_.end()) return std::nullopt;
  return genders_[it->second].gender;
}

std::vector<const NounEntry*> Lexicon::spanish_for(std::string_view english_lemma) const {
  std::vector<const NounEntry*> out;
  if (auto it = by_english_.find(std::string(english_lemma)); it != by_english_.end()) {
    for (auto idx : it->second) out.push_back(&nouns_[idx]);
  }
  return out;
}

std::vector<std::string> Lexicon::coverage_gaps() const {
  std::vector<std::string> gaps;
  std::set<std::string> seen;
  for (const auto& n : nouns_) {
    if (!gender_by_english_.count(n.english_lemma) && seen.insert(n.english_lemma).second) {
      gaps.push_back(n.english_lemma);
    }
  }
  return gaps;
}

}  // namespace mapcs

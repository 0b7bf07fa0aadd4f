#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mapcs {

enum class Gender { masculine, feminine };

/// Gender of an English noun's Spanish translation equivalent. Ambiguous when
/// two Spanish synonyms with different genders translate to the same noun.
enum class NounGender { masculine, feminine, ambiguous };

std::string_view to_string(Gender g);
std::string_view to_string(NounGender g);
std::optional<Gender> parse_gender(std::string_view token);
std::optional<NounGender> parse_noun_gender(std::string_view token);
NounGender to_noun_gender(Gender g);

/// Raised while loading or validating dictionaries. Carries the offending
/// lemma or line number in the message.
class LexiconError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NounEntry {
  std::string spanish_lemma;
  std::string english_lemma;
  Gender spanish_gender;
};

struct EnglishGenderEntry {
  std::string english_lemma;
  NounGender gender;
};

/// The four simple-NP determiner series (el/la, un/una, los/las, unos/unas).
class DeterminerTable {
 public:
  static const DeterminerTable& standard();

  bool contains(std::string_view det) const;
  std::optional<Gender> gender_of(std::string_view det) const;

  /// Same determiner series in the target gender. Throws std::domain_error for
  /// words outside the table.
  const std::string& to_gender(std::string_view det, Gender target) const;

  const std::map<std::string, std::string>& to_feminine() const { return to_feminine_; }
  const std::map<std::string, std::string>& to_masculine() const { return to_masculine_; }

 private:
  DeterminerTable();

  std::map<std::string, std::string> to_feminine_;
  std::map<std::string, std::string> to_masculine_;
};

std::string map_determiner_gender(std::string_view det, Gender target);

/// Immutable after construction; share freely across sessions.
class Lexicon {
 public:
  static Lexicon load(const std::filesystem::path& noun_dict_path,
                      const std::filesystem::path& gender_dict_path);
  static Lexicon from_entries(std::vector<NounEntry> nouns, std::vector<EnglishGenderEntry> genders);

  const NounEntry* lookup_es(std::string_view spanish_lemma) const;
  std::optional<NounGender> lookup_en_gender(std::string_view english_lemma) const;

  /// Spanish nouns translating to this English noun, in dictionary order.
  std::vector<const NounEntry*> spanish_for(std::string_view english_lemma) const;

  const DeterminerTable& determiners() const { return DeterminerTable::standard(); }

  std::span<const NounEntry> nouns() const { return nouns_; }
  std::span<const EnglishGenderEntry> english_genders() const { return genders_; }

  /// English lemmas of the noun dictionary that have no gender entry.
  std::vector<std::string> coverage_gaps() const;

 private:
  Lexicon() = default;
  void build_indexes();

  std::vector<NounEntry> nouns_;
  std::vector<EnglishGenderEntry> genders_;
  std::unordered_map<std::string, std::size_t> by_spanish_;
  std::unordered_map<std::string, std::size_t> gender_by_english_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_english_;
};

}  // namespace mapcs

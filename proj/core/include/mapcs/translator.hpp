#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mapcs/lexicon.hpp"
#include "mapcs/text.hpp"

namespace mapcs {

class TranslationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Whole-utterance translation backend. Implementations must be
/// deterministic for a fixed backend and input, and safe to call from
/// several sessions at once.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string translate(std::string_view text, Language target) const = 0;
};

struct PhrasePair {
  std::string spanish;
  std::string english;
};

/// Offline translator: longest-match phrase table, then determiner+noun and
/// bare nouns through the noun dictionary, then unchanged tokens.
class PhraseTableTranslator final : public Translator {
 public:
  PhraseTableTranslator(std::shared_ptr<const Lexicon> lexicon, std::vector<PhrasePair> phrases);
  static PhraseTableTranslator load(const std::filesystem::path& phrase_tsv, std::shared_ptr<const Lexicon> lexicon);

  std::string translate(std::string_view text, Language target) const override;

 private:
  using Key = std::vector<std::string>;
  std::shared_ptr<const Lexicon> lexicon_;
  std::map<Key, std::string> es_to_en_;
  std::map<Key, std::string> en_to_es_;
  std::size_t max_phrase_ = 1;
};

/// Joins word and punctuation pieces with conventional spacing and
/// capitalizes sentence-initial words.
std::string detokenize(const std::vector<std::string>& pieces);

}  // namespace mapcs

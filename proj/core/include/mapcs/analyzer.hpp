#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mapcs/lexicon.hpp"
#include "mapcs/lid.hpp"
#include "mapcs/noun_phrase.hpp"
#include "mapcs/text.hpp"

namespace mapcs {

/// Tokenization, language identification and noun-phrase extraction bound
/// to one lexicon. Immutable; safe for concurrent use.
class TextAnalyzer {
 public:
  TextAnalyzer(std::shared_ptr<const Lexicon> lexicon, LanguageIdentifier lid, AdjectiveList adjectives);

  /// Loads the bundled lexicon and LID data from a resource directory laid
  /// out as data/lexicon and data/lid.
  static TextAnalyzer load(const std::filesystem::path& resource_dir);

  std::vector<Token> tokens(std::string_view text) const;
  Label label(std::string_view text) const;
  Utterance analyze(Speaker speaker, std::string text, Millis timestamp) const;

  std::vector<NounPhraseSpan> noun_phrases(std::span<const Token> tokens) const;
  std::vector<NounPhraseSpan> noun_phrases(std::string_view text) const;

  const Lexicon& lexicon() const { return *lexicon_; }
  std::shared_ptr<const Lexicon> shared_lexicon() const { return lexicon_; }
  const LanguageIdentifier& lid() const { return lid_; }
  const AdjectiveList& adjectives() const { return adjectives_; }

 private:
  std::shared_ptr<const Lexicon> lexicon_;
  LanguageIdentifier lid_;
  AdjectiveList adjectives_;
};

}  // namespace mapcs

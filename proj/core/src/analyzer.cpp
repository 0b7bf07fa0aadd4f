#include "mapcs/analyzer.hpp"

#include "mapcs/util/io.hpp"
#include "mapcs/util/utf8.hpp"

namespace mapcs {

TextAnalyzer::TextAnalyzer(std::shared_ptr<const Lexicon> lexicon, LanguageIdentifier lid, AdjectiveList adjectives)
    : lexicon_(std::move(lexicon)), lid_(std::move(lid)), adjectives_(std::move(adjectives)) {}

TextAnalyzer TextAnalyzer::load(const std::filesystem::path& resource_dir) {
  auto lex = std::make_shared<const Lexicon>(
      Lexicon::load(resource_dir / "lexicon/nouns.tsv", resource_dir / "lexicon/english_gender.tsv"));
  const auto lid_dir = resource_dir / "lid";
  auto lists = WordLists::load(lid_dir / "english_words.txt", lid_dir / "spanish_words.txt",
                               lid_dir / "ambiguous_words.txt");
  lists.merge_lexicon(*lex);
  auto model = CharTrigramModel::load(lid_dir / "trigrams_en.txt", lid_dir / "trigrams_es.txt");
  double tau = read_threshold(lid_dir / "threshold.txt");
  AdjectiveList adjectives;
  for (auto& w : util::read_lines(lid_dir / "spanish_adjectives.txt")) adjectives.insert(util::fold_case(w));
  return TextAnalyzer(std::move(lex), LanguageIdentifier(std::move(lists), std::move(model), tau),
                      std::move(adjectives));
}

std::vector<Token> TextAnalyzer::tokens(std::string_view text) const {
  auto toks = tokenize(text);
  lid_.classify_all(toks);
  return toks;
}

Label TextAnalyzer::label(std::string_view text) const { return label_utterance(tokens(text)); }

Utterance TextAnalyzer::analyze(Speaker speaker, std::string text, Millis timestamp) const {
  Utterance u;
  u.speaker = speaker;
  u.tokens = tokens(text);
  u.label = label_utterance(u.tokens);
  u.noun_phrases = noun_phrases(u.tokens);
  u.text = std::move(text);
  u.timestamp = timestamp;
  return u;
}

std::vector<NounPhraseSpan> TextAnalyzer::noun_phrases(std::span<const Token> toks) const {
  return extract_simple_nps(toks, *lexicon_, adjectives_);
}

std::vector<NounPhraseSpan> TextAnalyzer::noun_phrases(std::string_view text) const {
  return noun_phrases(tokens(text));
}

}  // namespace mapcs

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mapcs/text.hpp"

namespace mapcs {

class Lexicon;

/// Character-trigram language model over two count tables. Words are padded
/// with '^' and '$' and iterated by code point.
class CharTrigramModel {
 public:
  static CharTrigramModel load(const std::filesystem::path& english_counts,
                               const std::filesystem::path& spanish_counts);
  static CharTrigramModel from_counts(std::unordered_map<std::u32string, double> english,
                                      std::unordered_map<std::u32string, double> spanish);

  /// Mean per-trigram log-likelihood ratio log P(en) - log P(es), add-one
  /// smoothed over the union vocabulary. Positive leans English.
  double score(std::string_view lower_word) const;

 private:
  struct Table {
    std::unordered_map<std::u32string, double> counts;
    double total = 0.0;
  };
  double log_prob(const Table& t, const std::u32string& trigram) const;

  Table english_;
  Table spanish_;
  double vocabulary_ = 1.0;
};

struct WordLists {
  std::unordered_set<std::string> english;
  std::unordered_set<std::string> spanish;
  std::unordered_set<std::string> ambiguous;

  static WordLists load(const std::filesystem::path& english_path, const std::filesystem::path& spanish_path,
                        const std::filesystem::path& ambiguous_path);

  /// Adds every dictionary lemma to its language list (Spanish nouns to
  /// spanish, English nouns to english) unless it sits on the ambiguity list.
  void merge_lexicon(const Lexicon& lex);
};

/// Three-tier token classifier: wordlists first, undecided for words in both
/// lists (or on the ambiguity list), trigram backoff for everything else.
class LanguageIdentifier {
 public:
  LanguageIdentifier(WordLists lists, CharTrigramModel model, double threshold);

  Language classify_word(std::string_view lower) const;

  /// Non-word tokens are always undecided.
  Language classify(const Token& tok) const;

  /// Sets `lang` on every token in place.
  void classify_all(std::span<Token> tokens) const;

  double threshold() const { return threshold_; }
  const WordLists& lists() const { return lists_; }
  const CharTrigramModel& model() const { return model_; }

  /// Trigram-only decision for words missing from the lists.
  Language classify_by_model(std::string_view lower) const;

 private:
  WordLists lists_;
  CharTrigramModel model_;
  double threshold_;
};

struct ThresholdCalibration {
  double threshold = 0.0;
  double accuracy = 0.0;  // correct / decided on the held-out words
  double coverage = 0.0;  // decided / total
  bool met_target = false;
};

/// Smallest threshold on a 0.01 grid in [0, max_threshold] whose accuracy over
/// decided held-out words reaches `target_accuracy`.
ThresholdCalibration calibrate_threshold(const CharTrigramModel& model, std::span<const std::string> english_words,
                                         std::span<const std::string> spanish_words, double target_accuracy,
                                         double max_threshold = 3.0);

double read_threshold(const std::filesystem::path& path);

}  // namespace mapcs

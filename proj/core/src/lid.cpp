#include "mapcs/lid.hpp"

#include <cmath>
#include <stdexcept>

#include "mapcs/lexicon.hpp"
#include "mapcs/util/io.hpp"
#include "mapcs/util/tsv.hpp"
#include "mapcs/util/utf8.hpp"

namespace mapcs {

namespace {

std::unordered_map<std::u32string, double> load_counts(const std::filesystem::path& path) {
  std::unordered_map<std::u32string, double> counts;
  for (const auto& row : util::read_tsv(path)) {
    if (row.fields.size() != 2) {
      throw std::runtime_error(path.string() + ":" + std::to_string(row.line) + ": expected trigram<TAB>count");
    }
    auto trigram = util::to_u32(row.fields[0]);
    if (trigram.size() != 3) {
      throw std::runtime_error(path.string() + ":" + std::to_string(row.line) + ": not a trigram");
    }
    counts[trigram] += std::stod(row.fields[1]);
  }
  return counts;
}

std::unordered_set<std::string> load_set(const std::filesystem::path& path) {
  std::unordered_set<std::string> out;
  for (auto& line : util::read_lines(path)) out.insert(util::fold_case(line));
  return out;
}

}  // namespace

CharTrigramModel CharTrigramModel::load(const std::filesystem::path& english_counts,
                                        const std::filesystem::path& spanish_counts) {
  return from_counts(load_counts(english_counts), load_counts(spanish_counts));
}

CharTrigramModel CharTrigramModel::from_counts(std::unordered_map<std::u32string, double> english,
                                               std::unordered_map<std::u32string, double> spanish) {
  CharTrigramModel m;
  m.english_.counts = std::move(english);
  m.spanish_.counts = std::move(spanish);
  std::unordered_set<std::u32string> vocab;
  for (const auto& [t, c] : m.english_.counts) {
    m.english_.total += c;
    vocab.insert(t);
  }
  for (const auto& [t, c] : m.spanish_.counts) {
    m.spanish_.total += c;
    vocab.insert(t);
  }
  m.vocabulary_ = static_cast<double>(vocab.size()) + 1.0;
  return m;
}

double CharTrigramModel::log_prob(const Table& t, const std::u32string& trigram) const {
  auto it = t.counts.find(trigram);
  double c = it == t.counts.end() ? 0.0 : it->second;
  return std::log((c + 1.0) / (t.total + vocabulary_));
}

double CharTrigramModel::score(std::string_view lower_word) const {
  std::u32string padded = U"^" + util::to_u32(lower_word) + U"$";
  if (padded.size() < 3) return 0.0;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    std::u32string tri = padded.substr(i, 3);
    sum += log_prob(english_, tri) - log_prob(spanish_, tri);
    ++n;
  }
  return sum / static_cast<double>(n);
}

WordLists WordLists::load(const std::filesystem::path& english_path, const std::filesystem::path& spanish_path,
                          const std::filesystem::path& ambiguous_path) {
  return WordLists{load_set(english_path), load_set(spanish_path), load_set(ambiguous_path)};
}

void WordLists::merge_lexicon(const Lexicon& lex) {
  for (const auto& n : lex.nouns()) {
    if (!ambiguous.count(n.spanish_lemma)) spanish.insert(n.spanish_lemma);
    if (!ambiguous.count(n.english_lemma)) english.insert(n.english_lemma);
  }
  for (const auto& [masc, fem] : lex.determiners().to_feminine()) {
    spanish.insert(masc);
    spanish.insert(fem);
  }
}

LanguageIdentifier::LanguageIdentifier(WordLists lists, CharTrigramModel model, double threshold)
    : lists_(std::move(lists)), model_(std::move(model)), threshold_(threshold) {}

Language LanguageIdentifier::classify_by_model(std::string_view lower) const {
  double s = model_.score(lower);
  if (std::abs(s) < threshold_) return Language::undecided;
  return s > 0 ? Language::english : Language::spanish;
}

Language LanguageIdentifier::classify_word(std::string_view lower) const {
  std::string key(lower);
  if (lists_.ambiguous.count(key)) return Language::undecided;
  bool es = lists_.spanish.count(key) > 0;
  bool en = lists_.english.count(key) > 0;
  if (es && en) return Language::undecided;
  if (es) return Language::spanish;
  if (en) return Language::english;
  return classify_by_model(lower);
}

Language LanguageIdentifier::classify(const Token& tok) const {
  if (tok.kind != TokenKind::word) return Language::undecided;
  return classify_word(tok.lower);
}

void LanguageIdentifier::classify_all(std::span<Token> tokens) const {
  for (auto& t : tokens) t.lang = classify(t);
}

ThresholdCalibration calibrate_threshold(const CharTrigramModel& model, std::span<const std::string> english_words,
                                         std::span<const std::string> spanish_words, double target_accuracy,
                                         double max_threshold) {
  std::vector<std::pair<double, Language>> scored;
  for (const auto& w : english_words) scored.emplace_back(model.score(w), Language::english);
  for (const auto& w : spanish_words) scored.emplace_back(model.score(w), Language::spanish);

  ThresholdCalibration best;
  int steps = static_cast<int>(std::round(max_threshold * 100.0));
  for (int i = 0; i <= steps; ++i) {
    double tau = i / 100.0;
    std::size_t decided = 0;
    std::size_t correct = 0;
    for (const auto& [s, truth] : scored) {
      if (std::abs(s) < tau) continue;
      ++decided;
      Language guess = s > 0 ? Language::english : Language::spanish;
      if (guess == truth) ++correct;
    }
    double acc = decided ? static_cast<double>(correct) / decided : 0.0;
    ThresholdCalibration c{tau, acc, static_cast<double>(decided) / scored.size(), acc >= target_accuracy};
    if (c.met_target) return c;
    if (i == 0 || acc > best.accuracy) best = c;
  }
  return best;
}

double read_threshold(const std::filesystem::path& path) {
  auto lines = util::read_lines(path);
  if (lines.empty()) throw std::runtime_error(path.string() + ": missing threshold value");
  return std::stod(lines.front());
}

}  // namespace mapcs

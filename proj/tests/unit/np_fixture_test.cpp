// Noun-phrase extraction and mixed-NP classes against hand-annotated spans.
#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace mapcs;

namespace {

struct Case {
  int line = 0;
  std::string utterance;
  std::vector<std::string> spans;  // det|noun|noun_lang|noun_gender|class
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(part);
  return out;
}

std::vector<Case> load_cases() {
  std::ifstream in(fixtures::fixture_dir() / "np" / "spans.tsv");
  std::vector<Case> cases;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    Case c{n, line.substr(0, tab), {}};
    if (tab != std::string::npos) c.spans = split(line.substr(tab + 1), ';');
    cases.push_back(std::move(c));
  }
  return cases;
}

std::string describe(const std::vector<Token>& tokens, const NounPhraseSpan& s) {
  std::string cls = s.noun_lang == Language::spanish ? "-" : std::string(to_string(classify_mixed_np(s)));
  return tokens[s.det_index].surface + "|" + tokens[s.noun_index].surface + "|" + std::string(to_string(s.noun_lang)) +
         "|" + std::string(to_string(s.noun_gender)) + "|" + cls;
}

}  // namespace

TEST(NounPhraseFixture, MatchesAnnotations) {
  auto cases = load_cases();
  ASSERT_EQ(cases.size(), 50u);
  const auto& a = fixtures::analyzer();
  for (const auto& c : cases) {
    auto tokens = a.tokens(c.utterance);
    std::vector<std::string> got;
    for (const auto& s : a.noun_phrases(tokens)) got.push_back(describe(tokens, s));
    EXPECT_EQ(got, c.spans) << "line " << c.line << ": " << c.utterance;
  }
}

TEST(NounPhraseFixture, EveryClassIsRepresented) {
  std::map<std::string, int> seen;
  for (const auto& c : load_cases())
    for (const auto& s : c.spans) ++seen[split(s, '|').at(4)];
  for (const char* cls : {"congruent_masc", "congruent_fem", "incongruent_masc", "incongruent_fem", "ambiguous", "-"})
    EXPECT_GE(seen[cls], 3) << cls;
}

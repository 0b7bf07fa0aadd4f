#pragma once

#include <filesystem>
#include <memory>

#include "mapcs/analyzer.hpp"
#include "mapcs/simulate.hpp"
#include "mapcs/translator.hpp"

namespace mapcs::fixtures {

inline std::filesystem::path data_dir() { return MAPCS_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return MAPCS_FIXTURE_DIR; }

/// Loaded once per test binary; the analyzer is immutable.
inline const TextAnalyzer& analyzer() {
  static const TextAnalyzer a = TextAnalyzer::load(data_dir());
  return a;
}

inline const PhraseTableTranslator& phrase_translator() {
  static const PhraseTableTranslator t =
      PhraseTableTranslator::load(data_dir() / "translator/phrases.tsv", analyzer().shared_lexicon());
  return t;
}

/// Scripted backend, phrase-table translator and bundled maps.
inline const ServiceResources& resources() {
  static const ServiceResources r = load_scripted_resources(data_dir());
  return r;
}

}  // namespace mapcs::fixtures

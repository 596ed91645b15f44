#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "clir/retrieval.hpp"
#include "clir/tm.hpp"

namespace clir_test {

clir::SentencePair pair_of(const std::string& source, const std::string& target);

/// Hand-built corpora of at most five pairs each.
std::vector<std::vector<clir::SentencePair>> em_fixtures();

/// drug -> {drogue: 0.55, médicament: 0.45}.
clir::TranslationModel drug_model();

clir::TranslationModel model_from(const std::vector<std::tuple<std::string, std::string, double>>& entries,
                                  const std::string& source_lang = "en", const std::string& target_lang = "fr");

/// Every listed term maps to itself with probability 1.
clir::TranslationModel identity_model(const std::vector<std::string>& terms, const std::string& lang);

clir::Index index_of(const std::vector<std::pair<std::string, std::string>>& docs, const std::string& lang = "fr");

clir::QueryModel query_of(const std::string& text, const std::string& lang);

}  // namespace clir_test

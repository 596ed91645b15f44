#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace clir {

/// Character n-gram model for one language with add-delta smoothing.
///
/// Text is lower-cased, every non-letter becomes a space and runs of spaces
/// collapse; a single space pads both ends. The event space for the next
/// character is the training alphabet plus one "unknown" symbol, so for a
/// seen context the probabilities of all events sum to one.
struct LanguageIdModel {
    std::string language;
    int order = 3;
    double delta = 0.5;
    std::size_t alphabet_size = 1;  // training characters + unknown

    /// Keyed by the UTF-8 n-gram (context followed by the predicted character).
    std::unordered_map<std::string, double> ngram_probability;
    /// Probability given to each unseen character after a seen context.
    std::unordered_map<std::string, double> unseen_probability;

    double log_probability(std::string_view context, std::string_view next) const;

    /// Sum of log P(c | previous order-1 chars) over the normalized text.
    double log_likelihood(std::string_view text) const;
};

LanguageIdModel train_language_model(std::string_view language, std::span<const std::string> samples, int order = 3,
                                     double delta = 0.5);

/// Normalization applied to training and test text.
std::string normalize_for_langid(std::string_view text);

/// Consecutive n-grams of the normalized, padded text, as (context, next).
std::vector<std::pair<std::string, std::string>> langid_ngrams(std::string_view normalized, int order);

struct LanguageGuess {
    std::string language;
    double confidence = 0.0;     // posterior of the winner under uniform priors
    bool low_confidence = false; // fewer than min_chars characters of input
    std::vector<std::pair<std::string, double>> log_likelihoods;
};

/// Picks the model with the highest likelihood. Throws ConfigError when
/// `models` is empty.
LanguageGuess detect_language(std::string_view text, std::span<const LanguageIdModel> models,
                              std::size_t min_chars = 50);

/// TSV `ngram<TAB>probability` with `#key=value` header lines. Unseen-event
/// probabilities are stored as the context followed by U+FFFD.
void write_language_model(std::ostream& out, const LanguageIdModel& model);
LanguageIdModel read_language_model(std::istream& in);

/// Trains one model per language from the sample text `<data_dir>/langid/<lang>.txt`.
/// Throws IoError when a sample is missing.
std::vector<LanguageIdModel> load_language_models(std::span<const std::string> languages,
                                                  const std::filesystem::path& data_dir);

}  // namespace clir

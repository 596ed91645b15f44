#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clir/textprep.hpp"

namespace clir {

/// Source token used for the empty word when training with a NULL token.
inline constexpr std::string_view kNullToken = "<NULL>";

struct TranslationEntry {
    std::string target;
    double probability = 0.0;
};

/// Per-source entry lists, sorted by target term.
using TranslationTable = std::map<std::string, std::vector<TranslationEntry>, std::less<>>;

/// Final-iteration expected counts c(s, t).
using ExpectedCounts = std::map<std::string, std::map<std::string, double, std::less<>>, std::less<>>;

struct TranslationModel {
    std::string source_language;
    std::string target_language;
    TranslationTable table;
    std::map<std::string, double, std::less<>> source_marginal;
    std::size_t source_vocab_size = 0;
    std::size_t target_vocab_size = 0;
    /// False for unit-weight (SYN) and transposed tables.
    bool normalized = true;

    /// Entries for `source`, or nullptr when it is out of vocabulary.
    const std::vector<TranslationEntry>* find(std::string_view source) const;
    double probability(std::string_view source, std::string_view target) const;
    std::size_t entry_count() const;
};

/// Largest |sum_t P(t|s) - 1| over all sources.
double max_normalization_error(const TranslationModel& model);

struct TrainConfig {
    int iterations = 5;
    bool use_null_token = false;
    std::size_t min_pair_tokens = 1;
    std::optional<double> convergence_delta;
    std::size_t max_pair_tokens = 60;
    unsigned threads = 1;
    double likelihood_floor = 1e-12;

    void validate() const;
};

struct SentencePair {
    std::vector<std::string> source;
    std::vector<std::string> target;
};

struct TrainResult {
    TranslationModel model;
    ExpectedCounts expected_counts;
    /// Training-set log-likelihood after 0, 1, ... completed iterations.
    std::vector<double> log_likelihood_trace;
    int iterations_run = 0;
    std::size_t pairs_used = 0;
};

/// IBM Model 1 EM. Both sides are truncated to `max_pair_tokens`; pairs with
/// fewer than `min_pair_tokens` on either side are skipped. Throws DataError
/// when no usable pair remains.
TrainResult train(std::span<const SentencePair> pairs, std::string_view source_language,
                  std::string_view target_language, const TrainConfig& config = {});

struct LogLikelihood {
    double value = 0.0;
    std::size_t floored_tokens = 0;  // target tokens with zero probability mass
};

/// Sum over target tokens of log((1/(len_s + null)) sum_s P(t|s)).
LogLikelihood log_likelihood(const TranslationModel& model, std::span<const SentencePair> pairs,
                             bool use_null_token = false, double floor = 1e-12);

/// Rescales each source's entries to sum to 1 and drops sources left empty.
TranslationModel renormalize(TranslationModel model);

/// Drops entries with P(t|s) < theta and renormalizes. theta must lie in [0, 1).
TranslationModel prune_threshold(const TranslationModel& model, double theta);

using ReliabilityScorer =
    std::function<double(std::string_view source, std::string_view target, double probability, double count)>;

/// Scores an entry by its expected count.
ReliabilityScorer expected_count_scorer();

/// Keeps the `n` highest-scoring entries over the whole table (ties by
/// source, then target term) and renormalizes.
TranslationModel prune_topn(const TranslationModel& model, std::size_t n, const ExpectedCounts& expected_counts,
                            const ReliabilityScorer& scorer = expected_count_scorer());

/// Drops entries whose source or target contains a decimal digit (when
/// `digit_rule`) and sources whose marginal is below `marginal_floor`, then
/// renormalizes. The marginal rule is skipped for models without marginals.
TranslationModel prune_noise(const TranslationModel& model, double marginal_floor = 1e-6, bool digit_rule = true);

bool contains_digit(std::string_view term);

struct QueryModel {
    std::string language;
    std::map<std::string, double, std::less<>> distribution;
    std::map<std::string, double, std::less<>> raw_counts;
};

/// Maximum-likelihood query model from a term sequence.
QueryModel make_query(const TermSequence& terms);
QueryModel make_query(std::span<const std::string> terms, std::string_view language);

enum class OovPolicy { pass_through, drop };

/// P(t|M_Q) = sum_s P(t|s) P(s|M_Q). Out-of-vocabulary source terms keep
/// their surface form and mass under pass_through. The result is rescaled to
/// sum to 1.
QueryModel project_query(const QueryModel& query, const TranslationModel& model,
                         OovPolicy oov_policy = OovPolicy::pass_through);

enum class Variant { best_match, equal, synonym };

std::string_view to_string(Variant v);

/// BM: best entry at 1 (ties: smallest target). EQ: 1/k each. SYN: all 1.
TranslationModel derive_variant(const TranslationModel& model, Variant variant);

/// Table indexed by target term: entry (t -> s) carries P(t|s). Marginals are dropped.
TranslationModel transpose(const TranslationModel& model);

/// Model TSV, sorted by source then descending probability. Header lines
/// `#source_lang=`, `#target_lang=`, `#entries=`, `#normalized=`, preceded by
/// the verbatim `header` text.
void write_model(std::ostream& out, const TranslationModel& model, std::string_view header = {});

/// Reads a model written by write_model. Normalized models are renormalized
/// after parsing to absorb print rounding.
TranslationModel read_model(std::istream& in);

void write_marginals(std::ostream& out, const TranslationModel& model, std::string_view header = {});
void read_marginals(std::istream& in, TranslationModel& model);

void write_expected_counts(std::ostream& out, const ExpectedCounts& counts, std::string_view header = {});
ExpectedCounts read_expected_counts(std::istream& in);

/// Writes `path` and `path.marginals`.
void save_model(const std::filesystem::path& path, const TranslationModel& model, std::string_view header = {});

/// Reads `path` and, when present, `path.marginals`.
TranslationModel load_model(const std::filesystem::path& path);

/// Raw sentence pairs, `source<TAB>target` per line.
std::vector<std::pair<std::string, std::string>> read_text_pairs(std::istream& in);

}  // namespace clir

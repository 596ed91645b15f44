#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clir/textprep.hpp"

namespace clir {

/// Translation patterns, in tie-break preference order.
enum class Pattern { one_one, one_zero, zero_one, two_one, one_two, two_two };

inline constexpr std::array<Pattern, 6> kAllPatterns{Pattern::one_one, Pattern::one_zero, Pattern::zero_one,
                                                     Pattern::two_one, Pattern::one_two,  Pattern::two_two};

/// Number of (source, target) sentences a pattern consumes.
constexpr std::pair<std::size_t, std::size_t> pattern_span(Pattern p) {
    switch (p) {
        case Pattern::one_one:
            return {1, 1};
        case Pattern::one_zero:
            return {1, 0};
        case Pattern::zero_one:
            return {0, 1};
        case Pattern::two_one:
            return {2, 1};
        case Pattern::one_two:
            return {1, 2};
        case Pattern::two_two:
            return {2, 2};
    }
    return {0, 0};
}

/// The pattern with source and target roles exchanged (2-1 <-> 1-2).
Pattern transpose(Pattern p);

std::string_view to_string(Pattern p);

struct AlignParams {
    std::array<double, 6> pattern_prior{0.89, 0.005, 0.005, 0.0445, 0.0445, 0.011};
    double length_variance = 6.8;
    double cognate_weight = 0.3;
    std::size_t cognate_prefix_len = 4;

    double prior(Pattern p) const { return pattern_prior[static_cast<std::size_t>(p)]; }

    /// Throws ConfigError unless priors are positive and sum to 1 (1e-9).
    void validate() const;
};

/// A side of a candidate couple: total character length and the tokens
/// used for cognate matching.
struct Segment {
    std::size_t char_length = 0;
    std::vector<std::string> tokens;
};

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
    std::size_t size() const { return end - begin; }
};

struct Couple {
    Pattern pattern = Pattern::one_one;
    Span source;
    Span target;
    double score = 0.0;  // log-probability
};

/// Size of a greedy one-to-one matching between tokens of at least
/// `prefix_len` characters that share their first `prefix_len` characters
/// (case-folded).
std::size_t cognates(std::span<const std::string> tokens_a, std::span<const std::string> tokens_b,
                     std::size_t prefix_len);

/// Standardized length difference between two segments for length ratio
/// `ratio` (target chars per source char). Zero when lenB = ratio * lenA.
double length_delta(double len_a, double len_b, double ratio, double variance);

/// log prior(pattern) + log phi(delta) + cognate_weight * cognates.
/// 1-0 and 0-1 couples score the prior alone.
double couple_score(const Segment& seg_a, const Segment& seg_b, Pattern pattern, const AlignParams& params,
                    double ratio);

/// Highest-scoring monotone segmentation of both sentence lists into the six
/// patterns. The length ratio is total target length / total source length.
std::vector<Couple> align(std::span<const Sentence> sents_a, std::span<const Sentence> sents_b,
                          const AlignParams& params = {});

/// Same, with an explicit length ratio.
std::vector<Couple> align(std::span<const Sentence> sents_a, std::span<const Sentence> sents_b,
                          const AlignParams& params, double ratio);

double corpus_length_ratio(std::span<const Sentence> sents_a, std::span<const Sentence> sents_b);

/// Source and target segment of a couple, concatenating its sentences.
std::pair<Segment, Segment> couple_segments(const Couple& c, std::span<const Sentence> sents_a,
                                            std::span<const Sentence> sents_b);

double total_score(std::span<const Couple> couples);

/// The 1-1 couples as sentence pairs, in document order.
std::vector<std::pair<Sentence, Sentence>> extract_training_pairs(std::span<const Couple> couples,
                                                                   std::span<const Sentence> sents_a,
                                                                   std::span<const Sentence> sents_b);

/// `source<TAB>target`, one 1-1 pair per line.
void write_training_pairs(std::ostream& out, std::span<const std::pair<Sentence, Sentence>> pairs);

/// Full alignment dump: pattern, spans, score and both texts.
void write_alignment(std::ostream& out, std::string_view document_id, std::span<const Couple> couples,
                     std::span<const Sentence> sents_a, std::span<const Sentence> sents_b);

}  // namespace clir

#include "clir/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "clir/error.hpp"
#include "clir/utf8.hpp"

namespace clir {

namespace {

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

std::string folded_prefix(std::string_view token, std::size_t prefix_len) {
    std::string out;
    std::size_t n = 0;
    for (std::size_t pos = 0; pos < token.size() && n < prefix_len; ++n)
        utf8::append(out, utf8::to_lower(utf8::next(token, pos)));
    return out;
}

Segment concat(std::span<const Sentence> sents, Span span) {
    Segment seg;
    for (std::size_t i = span.begin; i < span.end; ++i) {
        seg.char_length += sents[i].char_length;
        seg.tokens.insert(seg.tokens.end(), sents[i].tokens.begin(), sents[i].tokens.end());
    }
    return seg;
}

}  // namespace

Pattern transpose(Pattern p) {
    switch (p) {
        case Pattern::one_zero:
            return Pattern::zero_one;
        case Pattern::zero_one:
            return Pattern::one_zero;
        case Pattern::two_one:
            return Pattern::one_two;
        case Pattern::one_two:
            return Pattern::two_one;
        default:
            return p;
    }
}

std::string_view to_string(Pattern p) {
    switch (p) {
        case Pattern::one_one:
            return "1-1";
        case Pattern::one_zero:
            return "1-0";
        case Pattern::zero_one:
            return "0-1";
        case Pattern::two_one:
            return "2-1";
        case Pattern::one_two:
            return "1-2";
        case Pattern::two_two:
            return "2-2";
    }
    return "?";
}

void AlignParams::validate() const {
    double sum = 0.0;
    for (double p : pattern_prior) {
        if (!(p > 0.0)) throw ConfigError("alignment pattern priors must be positive");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("alignment pattern priors must sum to 1");
    if (!(length_variance > 0.0)) throw ConfigError("length variance must be positive");
    if (cognate_weight < 0.0) throw ConfigError("cognate weight must be nonnegative");
    if (cognate_prefix_len < 1) throw ConfigError("cognate prefix length must be at least 1");
}

std::size_t cognates(std::span<const std::string> tokens_a, std::span<const std::string> tokens_b,
                     std::size_t prefix_len) {
    if (prefix_len == 0) throw ConfigError("cognate prefix length must be at least 1");
    std::vector<std::string> b_prefix;
    std::vector<bool> used;
    for (const auto& t : tokens_b) {
        b_prefix.push_back(utf8::length(t) >= prefix_len ? folded_prefix(t, prefix_len) : std::string{});
        used.push_back(false);
    }
    std::size_t matches = 0;
    for (const auto& t : tokens_a) {
        if (utf8::length(t) < prefix_len) continue;
        const std::string p = folded_prefix(t, prefix_len);
        for (std::size_t j = 0; j < b_prefix.size(); ++j) {
            if (!used[j] && !b_prefix[j].empty() && b_prefix[j] == p) {
                used[j] = true;
                ++matches;
                break;
            }
        }
    }
    return matches;
}

double length_delta(double len_a, double len_b, double ratio, double variance) {
    // Symmetric in the two sides; zero at len_b = ratio * len_a.
    const double scale = variance * std::sqrt(ratio) * (ratio * len_a + len_b) / 2.0;
    if (scale <= 0.0) return 0.0;
    return (len_b - ratio * len_a) / std::sqrt(scale);
}

double couple_score(const Segment& seg_a, const Segment& seg_b, Pattern pattern, const AlignParams& params,
                    double ratio) {
    double score = std::log(params.prior(pattern));
    if (pattern == Pattern::one_zero || pattern == Pattern::zero_one) return score;
    const double delta = length_delta(static_cast<double>(seg_a.char_length), static_cast<double>(seg_b.char_length),
                                      ratio, params.length_variance);
    score += -kLogSqrt2Pi - 0.5 * delta * delta;
    score += params.cognate_weight *
             static_cast<double>(cognates(seg_a.tokens, seg_b.tokens, params.cognate_prefix_len));
    return score;
}

double corpus_length_ratio(std::span<const Sentence> sents_a, std::span<const Sentence> sents_b) {
    double a = 0.0;
    double b = 0.0;
    for (const auto& s : sents_a) a += static_cast<double>(s.char_length);
    for (const auto& s : sents_b) b += static_cast<double>(s.char_length);
    if (a <= 0.0 || b <= 0.0) return 1.0;
    return b / a;
}

std::vector<Couple> align(std::span<const Sentence> sents_a, std::span<const Sentence> sents_b,
                          const AlignParams& params) {
    return align(sents_a, sents_b, params, corpus_length_ratio(sents_a, sents_b));
}

std::vector<Couple> align(std::span<const Sentence> sents_a, std::span<const Sentence> sents_b,
                          const AlignParams& params, double ratio) {
    params.validate();
    const std::size_t n = sents_a.size();
    const std::size_t m = sents_b.size();
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    const std::size_t width = m + 1;
    std::vector<double> best((n + 1) * width, kNegInf);
    std::vector<int> back((n + 1) * width, -1);
    best[0] = 0.0;

    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= m; ++j) {
            if (i == 0 && j == 0) continue;
            double cell = kNegInf;
            int choice = -1;
            for (std::size_t k = 0; k < kAllPatterns.size(); ++k) {
                const Pattern p = kAllPatterns[k];
                const auto [da, db] = pattern_span(p);
                if (i < da || j < db) continue;
                const double prev = best[(i - da) * width + (j - db)];
                if (prev == kNegInf) continue;
                const Segment sa = concat(sents_a, {i - da, i});
                const Segment sb = concat(sents_b, {j - db, j});
                const double cand = prev + couple_score(sa, sb, p, params, ratio);
                if (cand > cell) {
                    cell = cand;
                    choice = static_cast<int>(k);
                }
            }
            best[i * width + j] = cell;
            back[i * width + j] = choice;
        }
    }

    std::vector<Couple> couples;
    std::size_t i = n;
    std::size_t j = m;
    while (i > 0 || j > 0) {
        const int k = back[i * width + j];
        const Pattern p = kAllPatterns[static_cast<std::size_t>(k)];
        const auto [da, db] = pattern_span(p);
        Couple c;
        c.pattern = p;
        c.source = {i - da, i};
        c.target = {j - db, j};
        c.score = best[i * width + j] - best[(i - da) * width + (j - db)];
        couples.push_back(c);
        i -= da;
        j -= db;
    }
    std::reverse(couples.begin(), couples.end());
    return couples;
}

std::pair<Segment, Segment> couple_segments(const Couple& c, std::span<const Sentence> sents_a,
                                            std::span<const Sentence> sents_b) {
    return {concat(sents_a, c.source), concat(sents_b, c.target)};
}

double total_score(std::span<const Couple> couples) {
    double s = 0.0;
    for (const auto& c : couples) s += c.score;
    return s;
}

std::vector<std::pair<Sentence, Sentence>> extract_training_pairs(std::span<const Couple> couples,
                                                                   std::span<const Sentence> sents_a,
                                                                   std::span<const Sentence> sents_b) {
    std::vector<std::pair<Sentence, Sentence>> pairs;
    for (const auto& c : couples) {
        if (c.pattern != Pattern::one_one) continue;
        pairs.emplace_back(sents_a[c.source.begin], sents_b[c.target.begin]);
    }
    return pairs;
}

void write_training_pairs(std::ostream& out, std::span<const std::pair<Sentence, Sentence>> pairs) {
    for (const auto& [a, b] : pairs) out << a.text << '\t' << b.text << '\n';
}

void write_alignment(std::ostream& out, std::string_view document_id, std::span<const Couple> couples,
                     std::span<const Sentence> sents_a, std::span<const Sentence> sents_b) {
    auto join = [](std::span<const Sentence> sents, Span span) {
        std::string text;
        for (std::size_t i = span.begin; i < span.end; ++i) {
            if (i > span.begin) text.push_back(' ');
            text += sents[i].text;
        }
        return text;
    };
    char score[32];
    for (const auto& c : couples) {
        std::snprintf(score, sizeof score, "%.6f", c.score);
        out << document_id << '\t' << to_string(c.pattern) << '\t' << c.source.begin << '-' << c.source.end << '\t'
            << c.target.begin << '-' << c.target.end << '\t' << score << '\t' << join(sents_a, c.source) << '\t'
            << join(sents_b, c.target) << '\n';
    }
}

}  // namespace clir

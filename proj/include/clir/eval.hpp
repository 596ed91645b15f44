#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clir/retrieval.hpp"
#include "clir/tm.hpp"

namespace clir {

/// topic -> document -> relevance grade.
struct Qrels {
    std::map<std::string, std::map<std::string, int>> judgments;

    /// Documents with grade > 0.
    std::set<std::string> relevant(std::string_view topic) const;
};

/// TREC four-column `topic 0 docid rel`.
Qrels read_qrels(std::istream& in);
Qrels load_qrels(const std::filesystem::path& path);

/// Uninterpolated average precision over the first `cutoff` documents.
/// Throws ConfigError when `relevant` is empty.
double average_precision(std::span<const std::string> ranked, const std::set<std::string>& relevant,
                         std::size_t cutoff = 1000);

enum class TopicSelection {
    run_topics,  // run topics that have relevant documents
    complete,    // every qrels topic with relevant documents; missing runs score 0
};

struct MapResult {
    double map = 0.0;
    std::map<std::string, double> per_topic;
};

/// Mean AP over the selected topics. Throws DataError when none is usable.
MapResult mean_ap(const RankedRun& run, const Qrels& qrels, std::size_t cutoff = 1000,
                  TopicSelection selection = TopicSelection::run_topics);

struct FriedmanResult {
    double chi_square = 0.0;  // Conover T1, tie-corrected
    double statistic = 0.0;   // Iman-Davenport F
    double p_value = 1.0;
    double df1 = 0.0;
    double df2 = 0.0;
    std::vector<double> rank_sums;  // per run; higher is better
    double a1 = 0.0;                // sum of squared ranks
};

/// `matrix[topic][run]`. Ranks are taken within each topic, ascending, with
/// average ranks on ties. Throws ConfigError for fewer than 2 runs or topics.
FriedmanResult friedman(const std::vector<std::vector<double>>& matrix);

struct LsdResult {
    std::vector<std::string> letters;  // per run, e.g. "a" or "a,b"
    std::vector<std::size_t> order;    // run indices by decreasing rank sum
    double t_value = 0.0;
    double critical_difference = 0.0;
    bool gated = false;  // Friedman not significant: one class
};

/// Fisher's LSD on rank sums after a significant Friedman test: runs i and j
/// differ when |R_i - R_j| > t(1 - alpha/2, (n-1)(k-1)) *
/// sqrt(2 (n A1 - sum R_j^2) / ((n-1)(k-1))). Letters come from maximal
/// groups of adjacent runs (by decreasing rank sum) with no significant
/// difference inside the group.
LsdResult fisher_lsd(const std::vector<std::vector<double>>& matrix, double alpha = 0.05);

/// Two-sided exact binomial test on wins of `a` over `b`; ties dropped.
double sign_test(std::span<const double> a, std::span<const double> b);

struct TranslationStats {
    std::size_t unique_terms = 0;
    std::size_t missed = 0;
    double percent_missed = 0.0;
    double avg_translations = 0.0;  // missed terms count as 0 entries
};

TranslationStats translation_stats(std::span<const QueryModel> queries, const TranslationModel& model);

struct RunEvaluation {
    std::string name;
    MapResult result;
};

/// Topics evaluated by any run (sorted) and the AP matrix over them; a run
/// without a topic scores 0 there.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> ap_matrix(
    std::span<const RunEvaluation> runs);

struct Significance {
    FriedmanResult friedman;
    LsdResult lsd;
    double alpha = 0.05;
};

Significance significance(std::span<const RunEvaluation> runs, double alpha = 0.05);

/// key=value lines per run and topic, the Friedman and LSD figures, then a
/// fixed-width table with class letters (`a: 0.3760`).
void write_report(std::ostream& out, std::span<const RunEvaluation> runs, const std::optional<Significance>& sig,
                  std::string_view header = {});

void write_translation_stats(std::ostream& out, const TranslationStats& stats, std::string_view header = {});

}  // namespace clir

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clir/textprep.hpp"
#include "clir/tm.hpp"

namespace clir {

struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t count = 0;
};

/// Term counts of a document collection with its background (collection) model.
struct Index {
    std::string language;
    std::vector<std::string> doc_ids;
    std::vector<std::size_t> doc_lengths;
    std::map<std::string, std::vector<Posting>, std::less<>> postings;  // sorted by doc
    std::size_t total_tokens = 0;

    std::size_t size() const { return doc_ids.size(); }
    std::size_t collection_count(std::string_view term) const;
    std::size_t term_count(std::string_view term, std::size_t doc) const;
    /// P(term|M_C): collection frequency over total tokens.
    double collection_probability(std::string_view term) const;
    /// P(term|M_D): maximum-likelihood document model (0 for empty documents).
    double document_probability(std::string_view term, std::size_t doc) const;
};

struct IndexDocument {
    std::string id;
    TermSequence terms;
};

/// Throws DataError on duplicate ids or when no document has a term.
Index build_index(std::span<const IndexDocument> documents);

/// `#language=`, `#documents=` header, then `docid<TAB>length<TAB>term<TAB>count...`
void write_index(std::ostream& out, const Index& index, std::string_view header = {});
Index read_index(std::istream& in);

enum class LogBase { natural, binary };

struct RetrievalParams {
    double lambda = 0.7;
    std::size_t top_k = 1000;
    LogBase log_base = LogBase::natural;
    OovPolicy oov_policy = OovPolicy::pass_through;

    void validate() const;
};

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;
};

struct TopicRanking {
    std::vector<ScoredDoc> docs;  // score descending, ties by ascending id
    std::size_t skipped_terms = 0;  // query units with no collection mass
    bool empty_query = false;
};

struct RankedRun {
    std::string tag;
    std::map<std::string, TopicRanking> topics;
};

/// A weighted group of document-language terms scored as one query unit:
/// weight * log((sum_j w_j ((1-lambda) P(t_j|D) + lambda P(t_j|C))) / sum_j w_j P(t_j|C)).
struct QueryUnit {
    double weight = 0.0;
    std::vector<std::pair<std::string, double>> terms;
};

/// Scores every document; units without collection mass are skipped.
TopicRanking score_units(std::span<const QueryUnit> units, const Index& index, const RetrievalParams& params);

/// Monolingual NLLR on a document-language query model.
TopicRanking score_mono(const QueryModel& query, const Index& index, const RetrievalParams& params = {});

/// Query translation: NLLR on the projected query model.
TopicRanking score_qt(const QueryModel& query, const TranslationModel& forward, const Index& index,
                      const RetrievalParams& params = {});

/// Document translation with a reverse model P(s|t) (document language -> query language).
TopicRanking score_dt(const QueryModel& query, const TranslationModel& reverse, const Index& index,
                      const RetrievalParams& params = {});

/// Synonym classes: all forward translations of a query term, unit weights.
TopicRanking score_syn(const QueryModel& query, const TranslationModel& forward, const Index& index,
                       const RetrievalParams& params = {});

/// Every translation of every query-term occurrence counts once; the bag is
/// normalized and scored monolingually.
TopicRanking score_naive(const QueryModel& query, const TranslationModel& forward, const Index& index,
                         const RetrievalParams& params = {});

/// Units for DT from a table indexed by query term (s -> [(t, P(s|t))]).
std::vector<QueryUnit> class_units(const QueryModel& query, const TranslationModel& by_source, OovPolicy oov_policy);

/// Target bag of score_naive, before normalization.
std::map<std::string, double, std::less<>> naive_bag(const QueryModel& query, const TranslationModel& forward,
                                                     OovPolicy oov_policy);

enum class Method { mono, qt, dt, syn, qt_bm, qt_eq, naive, external };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct TopicQuery {
    std::string topic;
    QueryModel query;
};

/// Runs one method over all topics. `forward` is needed by qt, syn, qt-bm,
/// qt-eq and naive; `reverse` by dt.
RankedRun run_method(Method method, std::span<const TopicQuery> queries, const Index& index,
                     const TranslationModel* forward, const TranslationModel* reverse,
                     const RetrievalParams& params, std::string tag);

/// alpha * a + (1 - alpha) * b per document. A document absent from one run
/// takes that run's per-topic minimum minus `epsilon`; a run with weight 0
/// contributes no documents. Throws DataError when topic sets differ.
RankedRun combine(const RankedRun& a, const RankedRun& b, double alpha, std::size_t top_k = 1000,
                  double epsilon = 1e-6, std::string tag = {});

/// TREC six-column format `topic Q0 docid rank score tag`.
void write_trec_run(std::ostream& out, const RankedRun& run, std::string_view header = {});
RankedRun read_trec_run(std::istream& in);

/// Documents as `docid<TAB>text` lines.
std::vector<std::pair<std::string, std::string>> read_tsv_documents(std::istream& in);

}  // namespace clir

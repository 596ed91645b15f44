#include "clir/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>

#include "clir/error.hpp"
#include "io_util.hpp"

namespace clir {

namespace {

bool has_blank(std::string_view s) {
    return s.find_first_of(" \t\r\n") != std::string_view::npos;
}

void sort_and_cut(std::vector<ScoredDoc>& docs, std::size_t top_k) {
    auto better = [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    };
    if (docs.size() > top_k) {
        std::partial_sort(docs.begin(), docs.begin() + static_cast<std::ptrdiff_t>(top_k), docs.end(), better);
        docs.resize(top_k);
    } else {
        std::sort(docs.begin(), docs.end(), better);
    }
}

std::vector<QueryUnit> single_term_units(const QueryModel& query) {
    std::vector<QueryUnit> units;
    for (const auto& [term, p] : query.distribution) units.push_back({p, {{term, 1.0}}});
    return units;
}

}  // namespace

std::size_t Index::collection_count(std::string_view term) const {
    const auto it = postings.find(term);
    if (it == postings.end()) return 0;
    std::size_t n = 0;
    for (const auto& p : it->second) n += p.count;
    return n;
}

std::size_t Index::term_count(std::string_view term, std::size_t doc) const {
    const auto it = postings.find(term);
    if (it == postings.end()) return 0;
    const auto& list = it->second;
    const auto pos = std::lower_bound(list.begin(), list.end(), doc,
                                      [](const Posting& p, std::size_t d) { return p.doc < d; });
    return pos != list.end() && pos->doc == doc ? pos->count : 0;
}

double Index::collection_probability(std::string_view term) const {
    if (total_tokens == 0) return 0.0;
    return static_cast<double>(collection_count(term)) / static_cast<double>(total_tokens);
}

double Index::document_probability(std::string_view term, std::size_t doc) const {
    if (doc_lengths.at(doc) == 0) return 0.0;
    return static_cast<double>(term_count(term, doc)) / static_cast<double>(doc_lengths[doc]);
}

Index build_index(std::span<const IndexDocument> documents) {
    if (documents.empty()) throw DataError("cannot build an index from an empty document list");
    Index index;
    std::set<std::string, std::less<>> seen;
    for (const auto& d : documents) {
        if (d.id.empty() || has_blank(d.id)) throw DataError("invalid document id '" + d.id + "'");
        if (!seen.insert(d.id).second) throw DataError("duplicate document id '" + d.id + "'");
        if (index.language.empty()) index.language = d.terms.language;
        const auto doc = static_cast<std::uint32_t>(index.doc_ids.size());
        std::map<std::string_view, std::uint32_t> counts;
        for (const auto& t : d.terms.terms) ++counts[t];
        for (const auto& [t, c] : counts) {
            auto it = index.postings.find(t);
            if (it == index.postings.end()) it = index.postings.emplace(std::string(t), std::vector<Posting>{}).first;
            it->second.push_back({doc, c});
        }
        index.doc_ids.push_back(d.id);
        index.doc_lengths.push_back(d.terms.terms.size());
        index.total_tokens += d.terms.terms.size();
    }
    if (index.total_tokens == 0) throw DataError("every document is empty after normalization");
    return index;
}

void write_index(std::ostream& out, const Index& index, std::string_view header) {
    if (!header.empty()) {
        out << header;
        if (header.back() != '\n') out << '\n';
    }
    out << "#language=" << index.language << '\n' << "#documents=" << index.size() << '\n';
    std::vector<std::vector<std::pair<std::string_view, std::uint32_t>>> per_doc(index.size());
    for (const auto& [term, list] : index.postings)
        for (const auto& p : list) per_doc[p.doc].emplace_back(term, p.count);
    for (std::size_t d = 0; d < index.size(); ++d) {
        out << index.doc_ids[d] << '\t' << index.doc_lengths[d];
        for (const auto& [term, count] : per_doc[d]) out << '\t' << term << '\t' << count;
        out << '\n';
    }
}

Index read_index(std::istream& in) {
    std::string language;
    std::vector<IndexDocument> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (const auto kv = detail::meta_line(line); kv && kv->first == "language") language = kv->second;
            continue;
        }
        const auto f = detail::split(line, '\t');
        if (f.size() < 2 || f.size() % 2 != 0)
            throw DataError("index line " + std::to_string(line_no) + ": malformed record");
        IndexDocument doc;
        doc.id = std::string(f[0]);
        const std::size_t length = detail::parse_size(f[1], "document length");
        for (std::size_t i = 2; i < f.size(); i += 2) {
            const std::size_t count = detail::parse_size(f[i + 1], "term count");
            doc.terms.terms.insert(doc.terms.terms.end(), count, std::string(f[i]));
        }
        if (doc.terms.terms.size() != length)
            throw DataError("index line " + std::to_string(line_no) + ": length does not match term counts");
        docs.push_back(std::move(doc));
    }
    for (auto& d : docs) d.terms.language = language;
    Index index = build_index(docs);
    index.language = language;
    return index;
}

void RetrievalParams::validate() const {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("smoothing lambda must lie in (0, 1)");
    if (top_k < 1) throw ConfigError("top_k must be at least 1");
}

TopicRanking score_units(std::span<const QueryUnit> units, const Index& index, const RetrievalParams& params) {
    params.validate();
    TopicRanking ranking;
    if (units.empty()) {
        ranking.empty_query = true;
        return ranking;
    }
    const double lambda = params.lambda;
    const double log_lambda = std::log(lambda);
    const std::size_t n = index.size();
    std::vector<double> score(n, 0.0);
    std::vector<double> numer(n, 0.0);
    std::vector<std::uint32_t> touched;
    std::size_t scored = 0;
    for (const auto& unit : units) {
        double background = 0.0;
        for (const auto& [term, w] : unit.terms) background += w * index.collection_probability(term);
        if (!(background > 0.0)) {
            ++ranking.skipped_terms;
            continue;
        }
        ++scored;
        touched.clear();
        for (const auto& [term, w] : unit.terms) {
            const auto it = index.postings.find(term);
            if (it == index.postings.end()) continue;
            for (const auto& p : it->second) {
                if (numer[p.doc] == 0.0) touched.push_back(p.doc);
                numer[p.doc] += w * static_cast<double>(p.count) / static_cast<double>(index.doc_lengths[p.doc]);
            }
        }
        for (std::size_t d = 0; d < n; ++d) {
            const double a = numer[d];
            score[d] += unit.weight * (a == 0.0 ? log_lambda : std::log(lambda + (1.0 - lambda) * a / background));
        }
        for (auto d : touched) numer[d] = 0.0;
    }
    if (scored == 0) {
        ranking.empty_query = true;
        return ranking;
    }
    const double scale = params.log_base == LogBase::binary ? 1.0 / std::numbers::ln2 : 1.0;
    ranking.docs.reserve(n);
    for (std::size_t d = 0; d < n; ++d) ranking.docs.push_back({index.doc_ids[d], score[d] * scale});
    sort_and_cut(ranking.docs, params.top_k);
    return ranking;
}

TopicRanking score_mono(const QueryModel& query, const Index& index, const RetrievalParams& params) {
    return score_units(single_term_units(query), index, params);
}

TopicRanking score_qt(const QueryModel& query, const TranslationModel& forward, const Index& index,
                      const RetrievalParams& params) {
    return score_mono(project_query(query, forward, params.oov_policy), index, params);
}

std::vector<QueryUnit> class_units(const QueryModel& query, const TranslationModel& by_source, OovPolicy oov_policy) {
    std::vector<QueryUnit> units;
    for (const auto& [s, q] : query.distribution) {
        const auto* entries = by_source.find(s);
        if (entries != nullptr && !entries->empty()) {
            QueryUnit unit{q, {}};
            for (const auto& e : *entries) unit.terms.emplace_back(e.target, e.probability);
            units.push_back(std::move(unit));
        } else if (oov_policy == OovPolicy::pass_through) {
            units.push_back({q, {{s, 1.0}}});
        }
    }
    return units;
}

TopicRanking score_dt(const QueryModel& query, const TranslationModel& reverse, const Index& index,
                      const RetrievalParams& params) {
    return score_units(class_units(query, transpose(reverse), params.oov_policy), index, params);
}

TopicRanking score_syn(const QueryModel& query, const TranslationModel& forward, const Index& index,
                       const RetrievalParams& params) {
    return score_units(class_units(query, derive_variant(forward, Variant::synonym), params.oov_policy), index,
                       params);
}

std::map<std::string, double, std::less<>> naive_bag(const QueryModel& query, const TranslationModel& forward,
                                                     OovPolicy oov_policy) {
    const auto& counts = query.raw_counts.empty() ? query.distribution : query.raw_counts;
    std::map<std::string, double, std::less<>> bag;
    for (const auto& [s, c] : counts) {
        const auto* entries = forward.find(s);
        if (entries != nullptr && !entries->empty()) {
            for (const auto& e : *entries) bag[e.target] += c;
        } else if (oov_policy == OovPolicy::pass_through) {
            bag[s] += c;
        }
    }
    return bag;
}

TopicRanking score_naive(const QueryModel& query, const TranslationModel& forward, const Index& index,
                         const RetrievalParams& params) {
    QueryModel bag;
    bag.language = forward.target_language;
    bag.raw_counts = naive_bag(query, forward, params.oov_policy);
    double total = 0.0;
    for (const auto& [t, c] : bag.raw_counts) total += c;
    for (const auto& [t, c] : bag.raw_counts) bag.distribution[t] = c / total;
    return score_mono(bag, index, params);
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::mono:
            return "mono";
        case Method::qt:
            return "qt";
        case Method::dt:
            return "dt";
        case Method::syn:
            return "syn";
        case Method::qt_bm:
            return "qt-bm";
        case Method::qt_eq:
            return "qt-eq";
        case Method::naive:
            return "naive";
        case Method::external:
            return "external";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::mono, Method::qt, Method::dt, Method::syn, Method::qt_bm, Method::qt_eq, Method::naive,
                     Method::external})
        if (to_string(m) == name) return m;
    throw ConfigError("unknown retrieval method '" + std::string(name) + "'");
}

RankedRun run_method(Method method, std::span<const TopicQuery> queries, const Index& index,
                     const TranslationModel* forward, const TranslationModel* reverse,
                     const RetrievalParams& params, std::string tag) {
    params.validate();
    const bool needs_forward = method == Method::qt || method == Method::syn || method == Method::qt_bm ||
                               method == Method::qt_eq || method == Method::naive;
    if (needs_forward && forward == nullptr)
        throw ConfigError("method " + std::string(to_string(method)) + " needs a forward translation model");
    if (method == Method::dt && reverse == nullptr) throw ConfigError("method dt needs a reverse translation model");

    TranslationModel derived;
    switch (method) {
        case Method::qt_bm:
            derived = derive_variant(*forward, Variant::best_match);
            break;
        case Method::qt_eq:
            derived = derive_variant(*forward, Variant::equal);
            break;
        case Method::syn:
            derived = derive_variant(*forward, Variant::synonym);
            break;
        case Method::dt:
            derived = transpose(*reverse);
            break;
        default:
            break;
    }

    RankedRun run;
    run.tag = std::move(tag);
    for (const auto& [topic, query] : queries) {
        TopicRanking r;
        switch (method) {
            case Method::mono:
            case Method::external:
                r = score_mono(query, index, params);
                break;
            case Method::qt:
                r = score_qt(query, *forward, index, params);
                break;
            case Method::qt_bm:
            case Method::qt_eq:
                r = score_qt(query, derived, index, params);
                break;
            case Method::dt:
            case Method::syn:
                r = score_units(class_units(query, derived, params.oov_policy), index, params);
                break;
            case Method::naive:
                r = score_naive(query, *forward, index, params);
                break;
        }
        run.topics[topic] = std::move(r);
    }
    return run;
}

RankedRun combine(const RankedRun& a, const RankedRun& b, double alpha, std::size_t top_k, double epsilon,
                  std::string tag) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("combination weight must lie in [0, 1]");
    std::string missing;
    for (const auto& [t, r] : a.topics)
        if (!b.topics.contains(t)) missing += " " + t + "(second run)";
    for (const auto& [t, r] : b.topics)
        if (!a.topics.contains(t)) missing += " " + t + "(first run)";
    if (!missing.empty()) throw DataError("runs cover different topics; missing:" + missing);

    RankedRun out;
    out.tag = tag.empty() ? a.tag + "+" + b.tag : std::move(tag);
    for (const auto& [topic, ra] : a.topics) {
        const TopicRanking& rb = b.topics.at(topic);
        auto floor_of = [epsilon](const TopicRanking& r) {
            double lo = 0.0;
            if (!r.docs.empty()) {
                lo = r.docs.front().score;
                for (const auto& d : r.docs) lo = std::min(lo, d.score);
            }
            return lo - epsilon;
        };
        const double floor_a = floor_of(ra);
        const double floor_b = floor_of(rb);
        std::map<std::string, std::pair<double, double>> merged;
        if (alpha > 0.0)
            for (const auto& d : ra.docs) merged.emplace(d.doc_id, std::pair{d.score, floor_b});
        if (alpha < 1.0) {
            for (const auto& d : rb.docs) {
                auto [it, inserted] = merged.emplace(d.doc_id, std::pair{floor_a, d.score});
                if (!inserted) it->second.second = d.score;
            }
        }
        TopicRanking r;
        r.skipped_terms = ra.skipped_terms + rb.skipped_terms;
        r.empty_query = ra.empty_query && rb.empty_query;
        for (const auto& [id, s] : merged) r.docs.push_back({id, alpha * s.first + (1.0 - alpha) * s.second});
        sort_and_cut(r.docs, top_k);
        out.topics.emplace(topic, std::move(r));
    }
    return out;
}

void write_trec_run(std::ostream& out, const RankedRun& run, std::string_view header) {
    if (!header.empty()) {
        out << header;
        if (header.back() != '\n') out << '\n';
    }
    std::string tag = run.tag.empty() ? "clir" : run.tag;
    std::replace_if(tag.begin(), tag.end(), [](char c) { return c == ' ' || c == '\t'; }, '_');
    for (const auto& [topic, ranking] : run.topics) {
        std::size_t rank = 1;
        for (const auto& d : ranking.docs)
            out << topic << " Q0 " << d.doc_id << ' ' << rank++ << ' ' << detail::format_f(d.score, 8) << ' ' << tag
                << '\n';
    }
}

RankedRun read_trec_run(std::istream& in) {
    RankedRun run;
    std::map<std::string, std::set<std::string>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto f = detail::split_ws(line);
        if (f.empty()) continue;
        if (f.size() != 6) throw DataError("run line " + std::to_string(line_no) + ": expected 6 columns");
        const std::string topic(f[0]);
        const std::string doc(f[2]);
        if (!seen[topic].insert(doc).second)
            throw DataError("run lists document " + doc + " twice for topic " + topic);
        run.topics[topic].docs.push_back({doc, detail::parse_double(f[4], "run score")});
        if (run.tag.empty()) run.tag = std::string(f[5]);
    }
    for (auto& [topic, ranking] : run.topics)
        std::stable_sort(ranking.docs.begin(), ranking.docs.end(),
                         [](const ScoredDoc& a, const ScoredDoc& b) { return a.score > b.score; });
    return run;
}

std::vector<std::pair<std::string, std::string>> read_tsv_documents(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw DataError("document line " + std::to_string(line_no) + ": no tab");
        docs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return docs;
}

}  // namespace clir

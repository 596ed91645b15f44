#include "clir/tm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <thread>
#include <unordered_map>

#include "clir/error.hpp"
#include "io_util.hpp"

namespace clir {

namespace {

using Id = std::uint32_t;

struct Corpus {
    std::vector<std::string> source_vocab;  // sorted; NULL token included when used
    std::vector<std::string> target_vocab;  // sorted
    std::vector<std::vector<Id>> source;    // per pair, NULL appended when used
    std::vector<std::vector<Id>> target;
    std::vector<std::vector<Id>> cooccur;   // per source id, sorted target ids
    std::map<std::string, double, std::less<>> marginal;
    std::size_t source_terms = 0;
};

std::vector<std::string> truncated(const std::vector<std::string>& tokens, std::size_t cap) {
    return {tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(std::min(cap, tokens.size()))};
}

Corpus build_corpus(std::span<const SentencePair> pairs, const TrainConfig& config) {
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> usable;
    for (const auto& p : pairs) {
        if (p.source.size() < config.min_pair_tokens || p.target.size() < config.min_pair_tokens) continue;
        if (p.source.empty() || p.target.empty()) continue;
        usable.emplace_back(truncated(p.source, config.max_pair_tokens), truncated(p.target, config.max_pair_tokens));
    }
    if (usable.empty()) throw DataError("training corpus has no usable sentence pair");

    std::set<std::string> src_set;
    std::set<std::string> tgt_set;
    std::map<std::string, std::size_t, std::less<>> src_freq;
    std::size_t src_tokens = 0;
    for (const auto& [s, t] : usable) {
        for (const auto& w : s) {
            src_set.insert(w);
            ++src_freq[w];
            ++src_tokens;
        }
        tgt_set.insert(t.begin(), t.end());
    }

    Corpus c;
    c.source_terms = src_set.size();
    if (config.use_null_token) src_set.insert(std::string(kNullToken));
    c.source_vocab.assign(src_set.begin(), src_set.end());
    c.target_vocab.assign(tgt_set.begin(), tgt_set.end());
    for (const auto& [w, n] : src_freq) c.marginal[w] = static_cast<double>(n) / static_cast<double>(src_tokens);

    std::unordered_map<std::string, Id> src_id;
    std::unordered_map<std::string, Id> tgt_id;
    for (Id i = 0; i < c.source_vocab.size(); ++i) src_id.emplace(c.source_vocab[i], i);
    for (Id i = 0; i < c.target_vocab.size(); ++i) tgt_id.emplace(c.target_vocab[i], i);
    const Id null_id = config.use_null_token ? src_id.at(std::string(kNullToken)) : 0;

    c.cooccur.resize(c.source_vocab.size());
    for (const auto& [s, t] : usable) {
        std::vector<Id> sid;
        std::vector<Id> tid;
        for (const auto& w : s) sid.push_back(src_id.at(w));
        if (config.use_null_token) sid.push_back(null_id);
        for (const auto& w : t) tid.push_back(tgt_id.at(w));
        for (Id si : sid) c.cooccur[si].insert(c.cooccur[si].end(), tid.begin(), tid.end());
        c.source.push_back(std::move(sid));
        c.target.push_back(std::move(tid));
    }
    for (auto& list : c.cooccur) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return c;
}

std::size_t slot(const std::vector<Id>& targets, Id t) {
    return static_cast<std::size_t>(std::lower_bound(targets.begin(), targets.end(), t) - targets.begin());
}

using Params = std::vector<std::vector<double>>;  // parallel to Corpus::cooccur

struct EStep {
    Params counts;
    double log_likelihood = 0.0;
};

void accumulate(const Corpus& c, const Params& prob, std::size_t begin, std::size_t end, double floor, EStep& out) {
    std::vector<std::size_t> slots;
    std::vector<double> p;
    for (std::size_t k = begin; k < end; ++k) {
        const auto& src = c.source[k];
        const double len = static_cast<double>(src.size());
        slots.resize(src.size());
        p.resize(src.size());
        for (Id t : c.target[k]) {
            double denom = 0.0;
            for (std::size_t i = 0; i < src.size(); ++i) {
                slots[i] = slot(c.cooccur[src[i]], t);
                p[i] = prob[src[i]][slots[i]];
                denom += p[i];
            }
            if (denom <= 0.0) {
                out.log_likelihood += std::log(floor);
                continue;
            }
            out.log_likelihood += std::log(denom / len);
            for (std::size_t i = 0; i < src.size(); ++i) out.counts[src[i]][slots[i]] += p[i] / denom;
        }
    }
}

Params zeros_like(const Corpus& c) {
    Params z(c.cooccur.size());
    for (std::size_t s = 0; s < z.size(); ++s) z[s].assign(c.cooccur[s].size(), 0.0);
    return z;
}

EStep expectation(const Corpus& c, const Params& prob, const TrainConfig& config) {
    const std::size_t n = c.source.size();
    const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(n)));
    std::vector<EStep> parts(workers);
    for (auto& part : parts) part.counts = zeros_like(c);
    if (workers == 1) {
        accumulate(c, prob, 0, n, config.likelihood_floor, parts[0]);
        return std::move(parts[0]);
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back(accumulate, std::cref(c), std::cref(prob), begin, end, config.likelihood_floor,
                          std::ref(parts[w]));
    }
    for (auto& t : pool) t.join();
    EStep total = std::move(parts[0]);
    for (unsigned w = 1; w < workers; ++w) {
        total.log_likelihood += parts[w].log_likelihood;
        for (std::size_t s = 0; s < total.counts.size(); ++s)
            for (std::size_t j = 0; j < total.counts[s].size(); ++j) total.counts[s][j] += parts[w].counts[s][j];
    }
    return total;
}

void maximization(const Params& counts, Params& prob) {
    for (std::size_t s = 0; s < counts.size(); ++s) {
        double sum = 0.0;
        for (double v : counts[s]) sum += v;
        if (sum <= 0.0) continue;
        for (std::size_t j = 0; j < counts[s].size(); ++j) prob[s][j] = counts[s][j] / sum;
    }
}

void sort_entries(std::vector<TranslationEntry>& entries) {
    std::sort(entries.begin(), entries.end(),
              [](const TranslationEntry& a, const TranslationEntry& b) { return a.target < b.target; });
}

std::string header_block(std::string_view header) {
    std::string h(header);
    if (!h.empty() && h.back() != '\n') h.push_back('\n');
    return h;
}

}  // namespace

const std::vector<TranslationEntry>* TranslationModel::find(std::string_view source) const {
    const auto it = table.find(source);
    return it == table.end() ? nullptr : &it->second;
}

double TranslationModel::probability(std::string_view source, std::string_view target) const {
    const auto* entries = find(source);
    if (entries == nullptr) return 0.0;
    const auto it = std::lower_bound(entries->begin(), entries->end(), target,
                                     [](const TranslationEntry& e, std::string_view t) { return e.target < t; });
    return it != entries->end() && it->target == target ? it->probability : 0.0;
}

std::size_t TranslationModel::entry_count() const {
    std::size_t n = 0;
    for (const auto& [s, entries] : table) n += entries.size();
    return n;
}

double max_normalization_error(const TranslationModel& model) {
    double worst = 0.0;
    for (const auto& [s, entries] : model.table) {
        double sum = 0.0;
        for (const auto& e : entries) sum += e.probability;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

void TrainConfig::validate() const {
    if (iterations < 1) throw ConfigError("EM iterations must be at least 1");
    if (max_pair_tokens < 1) throw ConfigError("per-pair token cap must be at least 1");
    if (!(likelihood_floor > 0.0)) throw ConfigError("likelihood floor must be positive");
    if (convergence_delta && *convergence_delta < 0.0) throw ConfigError("convergence delta must be nonnegative");
}

TrainResult train(std::span<const SentencePair> pairs, std::string_view source_language,
                  std::string_view target_language, const TrainConfig& config) {
    config.validate();
    const Corpus c = build_corpus(pairs, config);

    Params prob(c.cooccur.size());
    for (std::size_t s = 0; s < prob.size(); ++s)
        prob[s].assign(c.cooccur[s].size(), 1.0 / static_cast<double>(c.cooccur[s].size()));

    TrainResult result;
    Params last_counts = zeros_like(c);
    for (int it = 0;; ++it) {
        EStep e = expectation(c, prob, config);
        result.log_likelihood_trace.push_back(e.log_likelihood);
        if (it > 0 && config.convergence_delta &&
            e.log_likelihood - result.log_likelihood_trace[static_cast<std::size_t>(it) - 1] <
                *config.convergence_delta)
            break;
        if (it == config.iterations) break;
        maximization(e.counts, prob);
        last_counts = std::move(e.counts);
        result.iterations_run = it + 1;
    }

    TranslationModel& m = result.model;
    m.source_language = std::string(source_language);
    m.target_language = std::string(target_language);
    m.source_marginal = c.marginal;
    m.source_vocab_size = c.source_terms;
    m.target_vocab_size = c.target_vocab.size();
    for (std::size_t s = 0; s < c.cooccur.size(); ++s) {
        std::vector<TranslationEntry> entries;
        auto& counts = result.expected_counts[c.source_vocab[s]];
        for (std::size_t j = 0; j < c.cooccur[s].size(); ++j) {
            const std::string& t = c.target_vocab[c.cooccur[s][j]];
            if (prob[s][j] > 0.0) entries.push_back({t, prob[s][j]});
            if (last_counts[s][j] > 0.0) counts[t] = last_counts[s][j];
        }
        if (!entries.empty()) m.table.emplace(c.source_vocab[s], std::move(entries));
    }
    result.pairs_used = c.source.size();
    return result;
}

LogLikelihood log_likelihood(const TranslationModel& model, std::span<const SentencePair> pairs, bool use_null_token,
                             double floor) {
    LogLikelihood ll;
    for (const auto& pair : pairs) {
        if (pair.source.empty() && !use_null_token) continue;
        const double len = static_cast<double>(pair.source.size() + (use_null_token ? 1 : 0));
        for (const auto& t : pair.target) {
            double sum = use_null_token ? model.probability(kNullToken, t) : 0.0;
            for (const auto& s : pair.source) sum += model.probability(s, t);
            if (sum <= 0.0) {
                ll.value += std::log(floor);
                ++ll.floored_tokens;
            } else {
                ll.value += std::log(sum / len);
            }
        }
    }
    return ll;
}

TranslationModel renormalize(TranslationModel model) {
    for (auto it = model.table.begin(); it != model.table.end();) {
        auto& entries = it->second;
        std::erase_if(entries, [](const TranslationEntry& e) { return !(e.probability > 0.0); });
        double sum = 0.0;
        for (const auto& e : entries) sum += e.probability;
        if (entries.empty() || sum <= 0.0) {
            it = model.table.erase(it);
            continue;
        }
        for (auto& e : entries) e.probability /= sum;
        ++it;
    }
    model.normalized = true;
    return model;
}

TranslationModel prune_threshold(const TranslationModel& model, double theta) {
    if (!(theta >= 0.0 && theta < 1.0)) throw ConfigError("pruning threshold must lie in [0, 1)");
    TranslationModel out = model;
    for (auto& [s, entries] : out.table)
        std::erase_if(entries, [theta](const TranslationEntry& e) { return e.probability < theta; });
    return renormalize(std::move(out));
}

ReliabilityScorer expected_count_scorer() {
    return [](std::string_view, std::string_view, double, double count) { return count; };
}

TranslationModel prune_topn(const TranslationModel& model, std::size_t n, const ExpectedCounts& expected_counts,
                            const ReliabilityScorer& scorer) {
    if (n < 1) throw ConfigError("top-N pruning needs N >= 1");
    struct Ranked {
        double score;
        const std::string* source;
        const TranslationEntry* entry;
    };
    std::vector<Ranked> ranked;
    for (const auto& [s, entries] : model.table) {
        const auto row = expected_counts.find(s);
        for (const auto& e : entries) {
            double count = 0.0;
            if (row != expected_counts.end()) {
                if (const auto cell = row->second.find(e.target); cell != row->second.end()) count = cell->second;
            }
            ranked.push_back({scorer(s, e.target, e.probability, count), &s, &e});
        }
    }
    if (n >= ranked.size()) return renormalize(model);
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        if (a.score != b.score) return a.score > b.score;
        if (*a.source != *b.source) return *a.source < *b.source;
        return a.entry->target < b.entry->target;
    });
    TranslationModel out = model;
    out.table.clear();
    for (std::size_t i = 0; i < n; ++i) out.table[*ranked[i].source].push_back(*ranked[i].entry);
    for (auto& [s, entries] : out.table) sort_entries(entries);
    return renormalize(std::move(out));
}

bool contains_digit(std::string_view term) {
    return std::any_of(term.begin(), term.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

TranslationModel prune_noise(const TranslationModel& model, double marginal_floor, bool digit_rule) {
    if (!(marginal_floor >= 0.0 && marginal_floor <= 1.0)) throw ConfigError("marginal floor must lie in [0, 1]");
    TranslationModel out = model;
    const bool marginal_rule = !model.source_marginal.empty();
    for (auto it = out.table.begin(); it != out.table.end();) {
        const std::string& s = it->first;
        bool drop_source = digit_rule && contains_digit(s);
        if (!drop_source && marginal_rule && s != kNullToken) {
            const auto m = model.source_marginal.find(s);
            const double marginal = m == model.source_marginal.end() ? 0.0 : m->second;
            drop_source = marginal < marginal_floor;
        }
        if (drop_source) {
            it = out.table.erase(it);
            continue;
        }
        if (digit_rule)
            std::erase_if(it->second, [](const TranslationEntry& e) { return contains_digit(e.target); });
        ++it;
    }
    return renormalize(std::move(out));
}

QueryModel make_query(std::span<const std::string> terms, std::string_view language) {
    QueryModel q;
    q.language = std::string(language);
    for (const auto& t : terms) q.raw_counts[t] += 1.0;
    const double total = static_cast<double>(terms.size());
    for (const auto& [t, c] : q.raw_counts) q.distribution[t] = c / total;
    return q;
}

QueryModel make_query(const TermSequence& terms) { return make_query(terms.terms, terms.language); }

QueryModel project_query(const QueryModel& query, const TranslationModel& model, OovPolicy oov_policy) {
    if (!query.language.empty() && !model.source_language.empty() && query.language != model.source_language)
        throw ConfigError("query language '" + query.language + "' does not match model source language '" +
                          model.source_language + "'");
    QueryModel out;
    out.language = model.target_language;
    for (const auto& [s, mass] : query.distribution) {
        const auto* entries = model.find(s);
        if (entries != nullptr && !entries->empty()) {
            for (const auto& e : *entries) out.distribution[e.target] += e.probability * mass;
        } else if (oov_policy == OovPolicy::pass_through) {
            out.distribution[s] += mass;
        }
    }
    double total = 0.0;
    for (const auto& [t, p] : out.distribution) total += p;
    if (total > 0.0)
        for (auto& [t, p] : out.distribution) p /= total;
    return out;
}

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::best_match:
            return "BM";
        case Variant::equal:
            return "EQ";
        case Variant::synonym:
            return "SYN";
    }
    return "?";
}

TranslationModel derive_variant(const TranslationModel& model, Variant variant) {
    TranslationModel out = model;
    for (auto& [s, entries] : out.table) {
        if (entries.empty()) continue;
        switch (variant) {
            case Variant::best_match: {
                std::size_t best = 0;
                for (std::size_t i = 1; i < entries.size(); ++i)
                    if (entries[i].probability > entries[best].probability ||
                        (entries[i].probability == entries[best].probability &&
                         entries[i].target < entries[best].target))
                        best = i;
                entries = {{entries[best].target, 1.0}};
                break;
            }
            case Variant::equal:
                for (auto& e : entries) e.probability = 1.0 / static_cast<double>(entries.size());
                break;
            case Variant::synonym:
                for (auto& e : entries) e.probability = 1.0;
                break;
        }
    }
    out.normalized = variant != Variant::synonym;
    return out;
}

TranslationModel transpose(const TranslationModel& model) {
    TranslationModel out;
    out.source_language = model.target_language;
    out.target_language = model.source_language;
    out.source_vocab_size = model.target_vocab_size;
    out.target_vocab_size = model.source_vocab_size;
    out.normalized = false;
    for (const auto& [s, entries] : model.table)
        for (const auto& e : entries) out.table[e.target].push_back({s, e.probability});
    for (auto& [t, entries] : out.table) sort_entries(entries);
    return out;
}

void write_model(std::ostream& out, const TranslationModel& model, std::string_view header) {
    out << header_block(header);
    out << "#source_lang=" << model.source_language << '\n'
        << "#target_lang=" << model.target_language << '\n'
        << "#entries=" << model.entry_count() << '\n'
        << "#normalized=" << (model.normalized ? 1 : 0) << '\n'
        << "#source_vocab_size=" << model.source_vocab_size << '\n'
        << "#target_vocab_size=" << model.target_vocab_size << '\n';
    for (const auto& [s, entries] : model.table) {
        std::vector<TranslationEntry> sorted = entries;
        std::stable_sort(sorted.begin(), sorted.end(), [](const TranslationEntry& a, const TranslationEntry& b) {
            return a.probability > b.probability;
        });
        for (const auto& e : sorted) out << s << '\t' << e.target << '\t' << detail::format_g(e.probability, 6) << '\n';
    }
}

TranslationModel read_model(std::istream& in) {
    TranslationModel model;
    std::optional<std::size_t> declared;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (const auto kv = detail::meta_line(line)) {
                const auto& [key, value] = *kv;
                if (key == "source_lang") model.source_language = value;
                else if (key == "target_lang") model.target_language = value;
                else if (key == "entries") declared = detail::parse_size(value, "#entries");
                else if (key == "normalized") model.normalized = value != "0";
                else if (key == "source_vocab_size") model.source_vocab_size = detail::parse_size(value, key);
                else if (key == "target_vocab_size") model.target_vocab_size = detail::parse_size(value, key);
            }
            continue;
        }
        const auto f = detail::split(line, '\t');
        if (f.size() != 3) throw DataError("model line " + std::to_string(line_no) + ": expected 3 fields");
        const double p = detail::parse_double(f[2], "probability");
        if (!(p > 0.0)) throw DataError("model line " + std::to_string(line_no) + ": probability must be positive");
        model.table[std::string(f[0])].push_back({std::string(f[1]), p});
    }
    for (auto& [s, entries] : model.table) {
        sort_entries(entries);
        for (std::size_t i = 1; i < entries.size(); ++i)
            if (entries[i].target == entries[i - 1].target)
                throw DataError("model has duplicate entry (" + s + ", " + entries[i].target + ")");
    }
    if (declared && *declared != model.entry_count())
        throw DataError("model declares " + std::to_string(*declared) + " entries but has " +
                        std::to_string(model.entry_count()));
    if (model.normalized) model = renormalize(std::move(model));
    return model;
}

void write_marginals(std::ostream& out, const TranslationModel& model, std::string_view header) {
    out << header_block(header);
    for (const auto& [s, p] : model.source_marginal) out << s << '\t' << detail::format_g(p, 6) << '\n';
}

void read_marginals(std::istream& in, TranslationModel& model) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto f = detail::split(line, '\t');
        if (f.size() != 2) throw DataError("marginals line needs 2 fields: " + line);
        model.source_marginal[std::string(f[0])] = detail::parse_double(f[1], "marginal");
    }
}

void write_expected_counts(std::ostream& out, const ExpectedCounts& counts, std::string_view header) {
    out << header_block(header);
    for (const auto& [s, row] : counts)
        for (const auto& [t, c] : row) out << s << '\t' << t << '\t' << detail::format_g(c, 10) << '\n';
}

ExpectedCounts read_expected_counts(std::istream& in) {
    ExpectedCounts counts;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto f = detail::split(line, '\t');
        if (f.size() != 3) throw DataError("expected-counts line needs 3 fields: " + line);
        counts[std::string(f[0])][std::string(f[1])] = detail::parse_double(f[2], "count");
    }
    return counts;
}

void save_model(const std::filesystem::path& path, const TranslationModel& model, std::string_view header) {
    auto out = detail::open_output(path);
    write_model(out, model, header);
    if (!model.source_marginal.empty()) {
        auto m = detail::open_output(path.string() + ".marginals");
        write_marginals(m, model, header);
    }
}

TranslationModel load_model(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    TranslationModel model = read_model(in);
    const std::filesystem::path marginals = path.string() + ".marginals";
    if (std::filesystem::exists(marginals)) {
        auto m = detail::open_input(marginals);
        read_marginals(m, model);
    }
    return model;
}

std::vector<std::pair<std::string, std::string>> read_text_pairs(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw DataError("pairs line " + std::to_string(line_no) + ": no tab");
        pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return pairs;
}

}  // namespace clir

#include "clir/eval.hpp"

#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "clir/error.hpp"
#include "io_util.hpp"

namespace clir {

namespace {

std::vector<double> average_ranks(const std::vector<double>& row) {
    std::vector<std::size_t> idx(row.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
    std::vector<double> ranks(row.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && row[idx[j + 1]] == row[idx[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

std::string letter(std::size_t i) {
    if (i < 26) return std::string(1, static_cast<char>('a' + i));
    return "z" + std::to_string(i - 25);
}

void check_matrix(const std::vector<std::vector<double>>& matrix) {
    if (matrix.size() < 2) throw ConfigError("significance tests need at least 2 topics");
    const std::size_t k = matrix.front().size();
    if (k < 2) throw ConfigError("significance tests need at least 2 runs");
    for (const auto& row : matrix)
        if (row.size() != k) throw ConfigError("AP matrix rows differ in length");
}

std::string header_block(std::string_view header) {
    std::string h(header);
    if (!h.empty() && h.back() != '\n') h.push_back('\n');
    return h;
}

}  // namespace

std::set<std::string> Qrels::relevant(std::string_view topic) const {
    std::set<std::string> out;
    const auto it = judgments.find(std::string(topic));
    if (it == judgments.end()) return out;
    for (const auto& [doc, rel] : it->second)
        if (rel > 0) out.insert(doc);
    return out;
}

Qrels read_qrels(std::istream& in) {
    Qrels q;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto f = detail::split_ws(line);
        if (f.empty()) continue;
        if (f.size() != 4) throw DataError("qrels line " + std::to_string(line_no) + ": expected 4 columns");
        const double rel = detail::parse_double(f[3], "relevance");
        q.judgments[std::string(f[0])][std::string(f[2])] = static_cast<int>(rel);
    }
    return q;
}

Qrels load_qrels(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    return read_qrels(in);
}

double average_precision(std::span<const std::string> ranked, const std::set<std::string>& relevant,
                         std::size_t cutoff) {
    if (relevant.empty()) throw ConfigError("average precision needs at least one relevant document");
    const std::size_t n = std::min(cutoff, ranked.size());
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (relevant.contains(ranked[i])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

MapResult mean_ap(const RankedRun& run, const Qrels& qrels, std::size_t cutoff, TopicSelection selection) {
    MapResult result;
    auto evaluate = [&](const std::string& topic, const TopicRanking* ranking) {
        const auto relevant = qrels.relevant(topic);
        if (relevant.empty()) return;
        std::vector<std::string> ids;
        if (ranking != nullptr)
            for (const auto& d : ranking->docs) ids.push_back(d.doc_id);
        result.per_topic[topic] = average_precision(ids, relevant, cutoff);
    };
    if (selection == TopicSelection::run_topics) {
        for (const auto& [topic, ranking] : run.topics) evaluate(topic, &ranking);
    } else {
        for (const auto& [topic, judged] : qrels.judgments) {
            const auto it = run.topics.find(topic);
            evaluate(topic, it == run.topics.end() ? nullptr : &it->second);
        }
    }
    if (result.per_topic.empty()) throw DataError("no run topic has relevant documents in the qrels");
    double sum = 0.0;
    for (const auto& [topic, ap] : result.per_topic) sum += ap;
    result.map = sum / static_cast<double>(result.per_topic.size());
    return result;
}

FriedmanResult friedman(const std::vector<std::vector<double>>& matrix) {
    check_matrix(matrix);
    const auto n = static_cast<double>(matrix.size());
    const std::size_t k_runs = matrix.front().size();
    const auto k = static_cast<double>(k_runs);

    FriedmanResult r;
    r.rank_sums.assign(k_runs, 0.0);
    for (const auto& row : matrix) {
        const auto ranks = average_ranks(row);
        for (std::size_t j = 0; j < k_runs; ++j) {
            r.rank_sums[j] += ranks[j];
            r.a1 += ranks[j] * ranks[j];
        }
    }
    r.df1 = k - 1.0;
    r.df2 = (k - 1.0) * (n - 1.0);
    const double c1 = n * k * (k + 1.0) * (k + 1.0) / 4.0;
    const double spread = r.a1 - c1;
    if (spread <= 1e-12 * r.a1) return r;  // every topic is a complete tie

    double ss = 0.0;
    for (double rj : r.rank_sums) ss += (rj - n * (k + 1.0) / 2.0) * (rj - n * (k + 1.0) / 2.0);
    r.chi_square = (k - 1.0) * ss / spread;
    const double denom = n * (k - 1.0) - r.chi_square;
    if (denom <= 1e-12 * n * k) {
        r.statistic = std::numeric_limits<double>::infinity();
        r.p_value = 0.0;
        return r;
    }
    r.statistic = (n - 1.0) * r.chi_square / denom;
    r.p_value = boost::math::cdf(boost::math::complement(boost::math::fisher_f(r.df1, r.df2), r.statistic));
    return r;
}

LsdResult fisher_lsd(const std::vector<std::vector<double>>& matrix, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("significance level must lie in (0, 1)");
    const FriedmanResult f = friedman(matrix);
    const std::size_t k = f.rank_sums.size();
    const auto n = static_cast<double>(matrix.size());

    LsdResult lsd;
    lsd.order.resize(k);
    std::iota(lsd.order.begin(), lsd.order.end(), 0);
    std::stable_sort(lsd.order.begin(), lsd.order.end(),
                     [&](std::size_t a, std::size_t b) { return f.rank_sums[a] > f.rank_sums[b]; });
    lsd.t_value = boost::math::quantile(boost::math::students_t(f.df2), 1.0 - alpha / 2.0);
    double sum_sq = 0.0;
    for (double rj : f.rank_sums) sum_sq += rj * rj;
    const double var = std::max(0.0, 2.0 * (n * f.a1 - sum_sq) / f.df2);
    lsd.critical_difference = lsd.t_value * std::sqrt(var);

    lsd.letters.assign(k, "");
    if (f.p_value > alpha) {
        lsd.gated = true;
        lsd.letters.assign(k, "a");
        return lsd;
    }
    const double tol = 1e-9 * std::max(1.0, lsd.critical_difference);
    std::vector<std::size_t> end(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i;
        while (j + 1 < k && f.rank_sums[lsd.order[i]] - f.rank_sums[lsd.order[j + 1]] <= lsd.critical_difference + tol)
            ++j;
        end[i] = j;
    }
    std::size_t group = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (i > 0 && end[i] <= end[i - 1]) continue;
        const std::string l = letter(group++);
        for (std::size_t j = i; j <= end[i]; ++j) {
            std::string& slot = lsd.letters[lsd.order[j]];
            if (!slot.empty()) slot += ",";
            slot += l;
        }
    }
    return lsd;
}

double sign_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ConfigError("sign test needs paired samples of equal size");
    std::size_t wins = 0;
    std::size_t losses = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) ++wins;
        else if (a[i] < b[i]) ++losses;
    }
    const std::size_t n = wins + losses;
    if (n == 0) return 1.0;
    const double tail = boost::math::cdf(boost::math::binomial(static_cast<double>(n), 0.5),
                                         static_cast<double>(std::min(wins, losses)));
    return std::min(1.0, 2.0 * tail);
}

TranslationStats translation_stats(std::span<const QueryModel> queries, const TranslationModel& model) {
    std::set<std::string, std::less<>> terms;
    for (const auto& q : queries)
        for (const auto& [t, p] : q.distribution) terms.insert(t);
    TranslationStats s;
    s.unique_terms = terms.size();
    if (terms.empty()) return s;
    std::size_t entries = 0;
    for (const auto& t : terms) {
        const auto* e = model.find(t);
        if (e == nullptr || e->empty()) ++s.missed;
        else entries += e->size();
    }
    s.percent_missed = 100.0 * static_cast<double>(s.missed) / static_cast<double>(s.unique_terms);
    s.avg_translations = static_cast<double>(entries) / static_cast<double>(s.unique_terms);
    return s;
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>> ap_matrix(std::span<const RunEvaluation> runs) {
    std::set<std::string> topics;
    for (const auto& r : runs)
        for (const auto& [t, ap] : r.result.per_topic) topics.insert(t);
    std::vector<std::string> ids(topics.begin(), topics.end());
    std::vector<std::vector<double>> matrix;
    for (const auto& t : ids) {
        std::vector<double> row;
        for (const auto& r : runs) {
            const auto it = r.result.per_topic.find(t);
            row.push_back(it == r.result.per_topic.end() ? 0.0 : it->second);
        }
        matrix.push_back(std::move(row));
    }
    return {ids, matrix};
}

Significance significance(std::span<const RunEvaluation> runs, double alpha) {
    const auto [topics, matrix] = ap_matrix(runs);
    return {friedman(matrix), fisher_lsd(matrix, alpha), alpha};
}

void write_report(std::ostream& out, std::span<const RunEvaluation> runs, const std::optional<Significance>& sig,
                  std::string_view header) {
    out << header_block(header);
    out << "runs=" << runs.size() << '\n';
    for (const auto& r : runs) {
        out << "map." << r.name << '=' << detail::format_f(r.result.map, 6) << '\n';
        out << "topics." << r.name << '=' << r.result.per_topic.size() << '\n';
    }
    for (const auto& r : runs)
        for (const auto& [topic, ap] : r.result.per_topic)
            out << "ap." << r.name << '.' << topic << '=' << detail::format_f(ap, 6) << '\n';
    if (sig) {
        const auto& f = sig->friedman;
        out << "friedman.chi_square=" << detail::format_g(f.chi_square, 10) << '\n'
            << "friedman.f=" << detail::format_g(f.statistic, 10) << '\n'
            << "friedman.df1=" << detail::format_g(f.df1, 10) << '\n'
            << "friedman.df2=" << detail::format_g(f.df2, 10) << '\n'
            << "friedman.p_value=" << detail::format_g(f.p_value, 10) << '\n'
            << "lsd.alpha=" << detail::format_g(sig->alpha, 6) << '\n'
            << "lsd.formula=|R_i-R_j| > t(1-alpha/2,(n-1)(k-1)) * sqrt(2*(n*A1-sum_j R_j^2)/((n-1)(k-1)))\n"
            << "lsd.t=" << detail::format_g(sig->lsd.t_value, 10) << '\n'
            << "lsd.critical_difference=" << detail::format_g(sig->lsd.critical_difference, 10) << '\n'
            << "lsd.gated=" << (sig->lsd.gated ? 1 : 0) << '\n';
        for (std::size_t i = 0; i < runs.size(); ++i)
            out << "rank_sum." << runs[i].name << '=' << detail::format_g(f.rank_sums[i], 10) << '\n'
                << "class." << runs[i].name << '=' << sig->lsd.letters[i] << '\n';
    }
    out << '\n';
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %s\n", "run", "MAP");
    out << line;
    std::vector<std::size_t> order(runs.size());
    std::iota(order.begin(), order.end(), 0);
    if (sig) order = sig->lsd.order;
    for (std::size_t i : order) {
        const std::string cell =
            (sig ? sig->lsd.letters[i] + ": " : std::string{}) + detail::format_f(runs[i].result.map, 4);
        std::snprintf(line, sizeof line, "%-24s %s\n", runs[i].name.c_str(), cell.c_str());
        out << line;
    }
}

void write_translation_stats(std::ostream& out, const TranslationStats& stats, std::string_view header) {
    out << header_block(header);
    out << "unique_terms=" << stats.unique_terms << '\n'
        << "missed=" << stats.missed << '\n'
        << "percent_missed=" << detail::format_f(stats.percent_missed, 2) << '\n'
        << "avg_translations=" << detail::format_f(stats.avg_translations, 4) << '\n'
        << "avg_translations.definition=mean entry count over unique query terms, missed terms counted as 0\n";
}

}  // namespace clir

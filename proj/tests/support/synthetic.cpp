#include "synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "clir/utf8.hpp"

namespace clir_test {

namespace {

constexpr std::string_view kConsonants = "bcdfgklmnprtvz";
constexpr std::string_view kVowels = "aeiou";

std::string random_word(std::mt19937& rng, std::size_t syllables) {
    std::string w;
    for (std::size_t i = 0; i < syllables; ++i) {
        w.push_back(kConsonants[pick(rng, kConsonants.size())]);
        w.push_back(kVowels[pick(rng, kVowels.size())]);
    }
    w.push_back(kConsonants[pick(rng, kConsonants.size())]);
    return w;
}

bool survives(const std::string& w, const clir::LanguageResources& res) {
    const auto seq = res.analyze(w);
    return seq.terms.size() == 1 && seq.terms[0] == w;
}

std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out.push_back(' ');
        out += w;
    }
    return out;
}

std::string capitalize(std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

std::string random_letters(std::mt19937& rng, std::size_t len) {
    std::string w;
    for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<char>('a' + pick(rng, 26)));
    return w;
}

}  // namespace

std::size_t pick(std::mt19937& rng, std::size_t n) { return static_cast<std::size_t>(rng()) % n; }

double unit(std::mt19937& rng) { return static_cast<double>(rng()) / 4294967296.0; }

Lexicon make_lexicon(std::size_t size, std::uint32_t seed, const clir::LanguageResources& source,
                     const clir::LanguageResources& target) {
    std::mt19937 rng(seed);
    std::set<std::string> used;
    Lexicon lex;
    auto fill = [&](std::vector<std::string>& out, const clir::LanguageResources& res) {
        std::size_t attempts = 0;
        while (out.size() < size) {
            if (++attempts > size * 1000) throw std::runtime_error("lexicon generation stalled");
            std::string w = random_word(rng, 2 + pick(rng, 2));
            if (used.contains(w) || !survives(w, res)) continue;
            used.insert(w);
            out.push_back(std::move(w));
        }
    };
    fill(lex.source, source);
    fill(lex.target, target);
    return lex;
}

ClirCorpus make_clir_corpus(const ClirSpec& spec, const clir::LanguageResources& source,
                            const clir::LanguageResources& target) {
    if (spec.topics * spec.topic_concepts >= spec.concepts)
        throw std::invalid_argument("not enough concepts for the topics");
    ClirCorpus c;
    c.lexicon = make_lexicon(spec.concepts, spec.seed, source, target);
    std::mt19937 rng(spec.seed + 1);

    const std::size_t span = spec.max_pair_concepts - spec.min_pair_concepts + 1;
    for (std::size_t p = 0; p < spec.pairs; ++p) {
        const std::size_t n = spec.min_pair_concepts + pick(rng, span);
        std::vector<std::size_t> concepts(n);
        for (auto& k : concepts) k = pick(rng, spec.concepts);
        std::vector<std::string> src, tgt;
        for (auto k : concepts) src.push_back(c.lexicon.source[k]);
        for (std::size_t i = n; i > 1; --i) std::swap(concepts[i - 1], concepts[pick(rng, i)]);
        for (auto k : concepts) tgt.push_back(c.lexicon.target[k]);
        c.pairs.emplace_back(join(src), join(tgt));
    }

    // Topic t owns concepts [t * topic_concepts, (t + 1) * topic_concepts).
    const std::size_t background_begin = spec.topics * spec.topic_concepts;
    const std::size_t background = spec.concepts - background_begin;
    const std::size_t len_span = spec.max_doc_length - spec.min_doc_length + 1;
    for (std::size_t t = 0; t < spec.topics; ++t) {
        char id[32];
        std::snprintf(id, sizeof id, "T%02zu", t + 1);
        SyntheticTopic topic{id, {}, {}};
        std::vector<std::size_t> q;
        for (std::size_t k = 0; k < spec.topic_concepts; ++k) q.push_back(t * spec.topic_concepts + k);
        for (std::size_t k = 0; k < spec.noise_terms; ++k) q.push_back(background_begin + pick(rng, background));
        std::vector<std::string> qs, qt;
        for (auto k : q) {
            qs.push_back(c.lexicon.source[k]);
            qt.push_back(c.lexicon.target[k]);
        }
        topic.source_text = join(qs);
        topic.target_text = join(qt);
        c.topics.push_back(std::move(topic));
    }

    const std::size_t docs = spec.topics * spec.relevant_per_topic;
    std::vector<std::size_t> order(docs);
    for (std::size_t d = 0; d < docs; ++d) order[d] = d;
    for (std::size_t i = docs; i > 1; --i) std::swap(order[i - 1], order[pick(rng, i)]);
    for (std::size_t d = 0; d < docs; ++d) {
        const std::size_t topic = order[d] / spec.relevant_per_topic;
        const std::size_t len = spec.min_doc_length + pick(rng, len_span);
        std::vector<std::string> words;
        for (std::size_t i = 0; i < len; ++i) {
            const double u = unit(rng);
            std::size_t k;
            if (u < spec.topic_rate) {
                k = topic * spec.topic_concepts + pick(rng, spec.topic_concepts);
            } else if (u < spec.topic_rate + spec.cross_topic_rate) {
                k = pick(rng, spec.topics) * spec.topic_concepts + pick(rng, spec.topic_concepts);
            } else {
                k = background_begin + pick(rng, background);
            }
            words.push_back(c.lexicon.target[k]);
        }
        char id[32];
        std::snprintf(id, sizeof id, "D%03zu", d + 1);
        c.documents.push_back({id, {join(words)}});
        c.qrels.emplace_back(c.topics[topic].id, id, 1);
    }
    std::sort(c.qrels.begin(), c.qrels.end());
    return c;
}

void write_clir_corpus(const ClirCorpus& corpus, const std::filesystem::path& dir, const std::string& source_lang,
                       const std::string& target_lang) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "pairs.tsv");
        out << "#source_lang=" << source_lang << "\n#target_lang=" << target_lang << '\n';
        for (const auto& [s, t] : corpus.pairs) out << s << '\t' << t << '\n';
    }
    {
        std::ofstream out(dir / "docs.txt");
        clir::write_corpus(out, corpus.documents);
    }
    for (const bool src : {true, false}) {
        std::ofstream out(dir / ("topics." + (src ? source_lang : target_lang)));
        for (const auto& t : corpus.topics) {
            out << "<top>\n<num> " << t.id << "\n<title> " << (src ? t.source_text : t.target_text) << "\n</top>\n";
        }
    }
    {
        std::ofstream out(dir / "qrels.txt");
        for (const auto& [topic, doc, rel] : corpus.qrels) out << topic << " 0 " << doc << ' ' << rel << '\n';
    }
}

clir::Sentence make_sentence(const std::string& text) {
    clir::Sentence s;
    s.text = text;
    std::size_t i = 0;
    while (i < text.size()) {
        const auto j = text.find(' ', i);
        const auto end = j == std::string::npos ? text.size() : j;
        if (end > i) s.tokens.push_back(text.substr(i, end - i));
        i = end + 1;
    }
    s.char_length = clir::utf8::length(text);
    return s;
}

std::vector<BitextDocument> make_bitext(const BitextSpec& spec) {
    std::mt19937 rng(spec.seed);
    constexpr std::size_t kVocabulary = 2000;
    std::vector<std::string> src_vocab, tgt_vocab;
    for (std::size_t i = 0; i < kVocabulary; ++i) {
        const std::size_t len = 2 + pick(rng, 8);
        src_vocab.push_back(random_letters(rng, len));
        tgt_vocab.push_back(random_letters(rng, len + pick(rng, 2)));
    }

    std::vector<BitextDocument> docs;
    for (std::size_t d = 0; d < spec.documents; ++d) {
        const std::size_t n = spec.min_sentences + pick(rng, spec.max_sentences - spec.min_sentences + 1);
        std::vector<std::pair<std::string, std::string>> base;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t words = 3 + pick(rng, 28);
            std::vector<std::string> s, t;
            for (std::size_t w = 0; w < words; ++w) {
                const std::size_t k = pick(rng, kVocabulary);
                s.push_back(src_vocab[k]);
                t.push_back(tgt_vocab[k]);
            }
            if (unit(rng) < spec.cognate_rate) {
                const std::string shared = pick(rng, 2) == 0 ? std::to_string(1000 + pick(rng, 9000))
                                                             : capitalize(random_letters(rng, 5 + pick(rng, 4)));
                s.insert(s.begin() + static_cast<std::ptrdiff_t>(pick(rng, s.size() + 1)), shared);
                t.insert(t.begin() + static_cast<std::ptrdiff_t>(pick(rng, t.size() + 1)), shared);
            }
            s[0] = capitalize(s[0]);
            t[0] = capitalize(t[0]);
            base.emplace_back(join(s) + ".", join(t) + ".");
        }

        BitextDocument doc;
        for (std::size_t i = 0; i < n;) {
            const std::size_t a = doc.source.size();
            const std::size_t b = doc.target.size();
            const double u = unit(rng);
            if (i + 1 < n && u < spec.merge_rate) {
                if (pick(rng, 2) == 0) {
                    doc.source.push_back(make_sentence(base[i].first));
                    doc.source.push_back(make_sentence(base[i + 1].first));
                    doc.target.push_back(make_sentence(base[i].second + " " + base[i + 1].second));
                    doc.truth.push_back({{a, a + 2}, {b, b + 1}});
                } else {
                    doc.source.push_back(make_sentence(base[i].first + " " + base[i + 1].first));
                    doc.target.push_back(make_sentence(base[i].second));
                    doc.target.push_back(make_sentence(base[i + 1].second));
                    doc.truth.push_back({{a, a + 1}, {b, b + 2}});
                }
                i += 2;
            } else if (u < spec.merge_rate + spec.drop_rate) {
                if (pick(rng, 2) == 0) {
                    doc.source.push_back(make_sentence(base[i].first));
                    doc.truth.push_back({{a, a + 1}, {b, b}});
                } else {
                    doc.target.push_back(make_sentence(base[i].second));
                    doc.truth.push_back({{a, a}, {b, b + 1}});
                }
                ++i;
            } else {
                doc.source.push_back(make_sentence(base[i].first));
                doc.target.push_back(make_sentence(base[i].second));
                doc.truth.push_back({{a, a + 1}, {b, b + 1}});
                ++i;
            }
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

}  // namespace clir_test

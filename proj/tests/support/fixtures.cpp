#include "fixtures.hpp"

#include <algorithm>
#include <sstream>

namespace clir_test {

namespace {

std::vector<std::string> words(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

}  // namespace

clir::SentencePair pair_of(const std::string& source, const std::string& target) {
    return {words(source), words(target)};
}

std::vector<std::vector<clir::SentencePair>> em_fixtures() {
    return {
        {pair_of("a b", "x y"), pair_of("a", "x")},
        {pair_of("a b", "x y"), pair_of("b c", "y z"), pair_of("c a", "z x")},
        {pair_of("the house", "la maison"), pair_of("the book", "le livre"), pair_of("a book", "un livre"),
         pair_of("a house", "une maison")},
        {pair_of("a a b", "x y"), pair_of("b c", "y z z"), pair_of("c", "z"), pair_of("a d", "x w"),
         pair_of("d", "w w")},
        {pair_of("p q r", "u v"), pair_of("q r", "v w"), pair_of("r p", "w u x"), pair_of("p", "u"),
         pair_of("q p r", "v x u w")},
        {pair_of("s", "x y"), pair_of("s t", "x y z")},
    };
}

clir::TranslationModel model_from(const std::vector<std::tuple<std::string, std::string, double>>& entries,
                                  const std::string& source_lang, const std::string& target_lang) {
    clir::TranslationModel m;
    m.source_language = source_lang;
    m.target_language = target_lang;
    for (const auto& [s, t, p] : entries) m.table[s].push_back({t, p});
    for (auto& [s, list] : m.table)
        std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.target < b.target; });
    m.source_vocab_size = m.table.size();
    return m;
}

clir::TranslationModel drug_model() {
    return model_from({{"drug", "drogue", 0.55}, {"drug", "médicament", 0.45}});
}

clir::TranslationModel identity_model(const std::vector<std::string>& terms, const std::string& lang) {
    std::vector<std::tuple<std::string, std::string, double>> entries;
    for (const auto& t : terms) entries.emplace_back(t, t, 1.0);
    return model_from(entries, lang, lang);
}

clir::Index index_of(const std::vector<std::pair<std::string, std::string>>& docs, const std::string& lang) {
    std::vector<clir::IndexDocument> list;
    for (const auto& [id, text] : docs) list.push_back({id, {words(text), lang}});
    return clir::build_index(list);
}

clir::QueryModel query_of(const std::string& text, const std::string& lang) {
    return clir::make_query(words(text), lang);
}

}  // namespace clir_test

#include "clir/langid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "clir/error.hpp"
#include "clir/utf8.hpp"

namespace clir {

namespace {

constexpr std::string_view kUnknown = "\xEF\xBF\xBD";  // U+FFFD

std::vector<std::string> split_chars(std::string_view s) {
    std::vector<std::string> chars;
    for (std::size_t pos = 0; pos < s.size();) {
        const std::size_t start = pos;
        utf8::next(s, pos);
        chars.emplace_back(s.substr(start, pos - start));
    }
    return chars;
}

}  // namespace

std::string normalize_for_langid(std::string_view text) {
    std::string out = " ";
    for (std::size_t pos = 0; pos < text.size();) {
        const char32_t cp = utf8::to_lower(utf8::next(text, pos));
        if (utf8::is_letter(cp) || utf8::is_apostrophe(cp)) {
            utf8::append(out, utf8::is_apostrophe(cp) ? U'\'' : cp);
        } else if (out.back() != ' ') {
            out.push_back(' ');
        }
    }
    if (out.back() != ' ') out.push_back(' ');
    return out;
}

std::vector<std::pair<std::string, std::string>> langid_ngrams(std::string_view normalized, int order) {
    const auto chars = split_chars(normalized);
    std::vector<std::pair<std::string, std::string>> grams;
    const auto n = static_cast<int>(chars.size());
    for (int i = order - 1; i < n; ++i) {
        std::string context;
        for (int k = i - order + 1; k < i; ++k) context += chars[static_cast<std::size_t>(k)];
        grams.emplace_back(std::move(context), chars[static_cast<std::size_t>(i)]);
    }
    return grams;
}

double LanguageIdModel::log_probability(std::string_view context, std::string_view next) const {
    std::string key(context);
    key.append(next);
    if (auto it = ngram_probability.find(key); it != ngram_probability.end()) return std::log(it->second);
    if (auto it = unseen_probability.find(std::string(context)); it != unseen_probability.end())
        return std::log(it->second);
    return -std::log(static_cast<double>(alphabet_size));
}

double LanguageIdModel::log_likelihood(std::string_view text) const {
    double total = 0.0;
    for (const auto& [context, next] : langid_ngrams(normalize_for_langid(text), order))
        total += log_probability(context, next);
    return total;
}

LanguageIdModel train_language_model(std::string_view language, std::span<const std::string> samples, int order,
                                     double delta) {
    if (samples.empty()) throw ConfigError("language model '" + std::string(language) + "' needs a sample");
    if (order < 1) throw ConfigError("n-gram order must be at least 1");
    if (!(delta > 0.0)) throw ConfigError("smoothing delta must be positive");

    std::map<std::string, std::map<std::string, double>> counts;
    std::set<std::string> alphabet;
    for (const auto& sample : samples) {
        const std::string norm = normalize_for_langid(sample);
        for (const auto& c : split_chars(norm)) alphabet.insert(c);
        for (auto& [context, next] : langid_ngrams(norm, order)) counts[context][next] += 1.0;
    }

    LanguageIdModel model;
    model.language = std::string(language);
    model.order = order;
    model.delta = delta;
    model.alphabet_size = alphabet.size() + 1;
    const double v = static_cast<double>(model.alphabet_size);
    for (const auto& [context, nexts] : counts) {
        double total = 0.0;
        for (const auto& [next, c] : nexts) total += c;
        const double denom = total + delta * v;
        for (const auto& [next, c] : nexts) model.ngram_probability[context + next] = (c + delta) / denom;
        model.unseen_probability[context] = delta / denom;
    }
    return model;
}

LanguageGuess detect_language(std::string_view text, std::span<const LanguageIdModel> models, std::size_t min_chars) {
    if (models.empty()) throw ConfigError("language identification needs at least one model");
    LanguageGuess guess;
    guess.low_confidence = utf8::length(text) < min_chars;
    double best = -INFINITY;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const double ll = models[i].log_likelihood(text);
        guess.log_likelihoods.emplace_back(models[i].language, ll);
        if (ll > best) {
            best = ll;
            best_index = i;
        }
    }
    double z = 0.0;
    for (const auto& [lang, ll] : guess.log_likelihoods) z += std::exp(ll - best);
    guess.language = models[best_index].language;
    guess.confidence = 1.0 / z;
    return guess;
}

void write_language_model(std::ostream& out, const LanguageIdModel& model) {
    out << "#language=" << model.language << '\n'
        << "#order=" << model.order << '\n'
        << "#delta=" << model.delta << '\n'
        << "#alphabet_size=" << model.alphabet_size << '\n';
    std::map<std::string, double> rows(model.ngram_probability.begin(), model.ngram_probability.end());
    for (const auto& [context, p] : model.unseen_probability) rows[context + std::string(kUnknown)] = p;
    char buf[64];
    for (const auto& [gram, p] : rows) {
        std::snprintf(buf, sizeof buf, "%.17g", p);
        out << gram << '\t' << buf << '\n';
    }
}

LanguageIdModel read_language_model(std::istream& in) {
    LanguageIdModel model;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(1, eq - 1);
            const std::string value = line.substr(eq + 1);
            if (key == "language") model.language = value;
            else if (key == "order") model.order = std::stoi(value);
            else if (key == "delta") model.delta = std::stod(value);
            else if (key == "alphabet_size") model.alphabet_size = std::stoul(value);
            continue;
        }
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos) throw DataError("language model line " + std::to_string(line_no) + ": no tab");
        const std::string gram = line.substr(0, tab);
        const double p = std::stod(line.substr(tab + 1));
        if (gram.size() >= kUnknown.size() && gram.compare(gram.size() - kUnknown.size(), kUnknown.size(), kUnknown) == 0)
            model.unseen_probability[gram.substr(0, gram.size() - kUnknown.size())] = p;
        else
            model.ngram_probability[gram] = p;
    }
    if (model.language.empty()) throw DataError("language model has no #language header");
    return model;
}

std::vector<LanguageIdModel> load_language_models(std::span<const std::string> languages,
                                                  const std::filesystem::path& data_dir) {
    std::vector<LanguageIdModel> models;
    for (const auto& lang : languages) {
        const auto path = data_dir / "langid" / (lang + ".txt");
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("no language identification sample for '" + lang + "' at " + path.string());
        std::ostringstream text;
        text << in.rdbuf();
        const std::vector<std::string> samples{text.str()};
        models.push_back(train_language_model(lang, samples));
    }
    return models;
}

}  // namespace clir

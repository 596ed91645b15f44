#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "clir/error.hpp"
#include "clir/langid.hpp"
#include "clir/textprep.hpp"

using namespace clir;

namespace {

#include "langid_oracle.inc"

const std::vector<LanguageIdModel>& models() {
    static const std::vector<LanguageIdModel> m = [] {
        const std::vector<std::string> langs{"en", "fr", "it"};
        return load_language_models(langs, default_data_dir());
    }();
    return m;
}

double likelihood_of(const LanguageGuess& g, const std::string& lang) {
    for (const auto& [l, v] : g.log_likelihoods)
        if (l == lang) return v;
    return NAN;
}

}  // namespace

TEST(Langid, NormalizationCollapsesNonLetters) {
    EXPECT_EQ(normalize_for_langid("Hello, World!! 42"), " hello world ");
    EXPECT_EQ(normalize_for_langid("L’été"), " l'été ");
}

TEST(Langid, TrigramsOfPaddedText) {
    const auto g = langid_ngrams(" ab ", 3);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0], (std::pair<std::string, std::string>{" a", "b"}));
    EXPECT_EQ(g[1], (std::pair<std::string, std::string>{"ab", " "}));
}

TEST(Langid, SeenContextDistributionSumsToOne) {
    const std::vector<std::string> samples{"abc abd abc"};
    const auto m = train_language_model("xx", samples);
    double sum = 0.0;
    std::size_t seen = 0;
    for (const auto& [key, p] : m.ngram_probability)
        if (key.rfind("ab", 0) == 0) {
            sum += p;
            ++seen;
        }
    sum += static_cast<double>(m.alphabet_size - seen) * m.unseen_probability.at("ab");
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Langid, FrenchParagraphMatchesOracleLikelihoods) {
    const auto g = detect_language(kFrenchParagraph, models());
    EXPECT_EQ(g.language, "fr");
    EXPECT_FALSE(g.low_confidence);
    for (const auto& [lang, ll] : kFrenchLogLikelihoods) EXPECT_NEAR(likelihood_of(g, lang), ll, 1e-9) << lang;
}

TEST(Langid, ShortFragmentIsLowConfidence) {
    const std::string fragment = "the cat sat on the mat with a small hat";
    ASSERT_LT(fragment.size(), 50u);
    EXPECT_TRUE(detect_language(fragment, models()).low_confidence);
}

TEST(Langid, TrainingSampleIdentity) {
    const std::vector<std::string> en{"the quick brown fox jumps over the lazy dog"};
    const std::vector<std::string> it{"il gatto nero dorme sul divano della nonna"};
    const std::vector<LanguageIdModel> m{train_language_model("en", en), train_language_model("it", it)};
    const auto g = detect_language(it[0], m);
    EXPECT_EQ(g.language, "it");
    EXPECT_GT(g.confidence, 0.5);
}

TEST(Langid, EmptyModelListIsConfigError) {
    EXPECT_THROW(detect_language("text", std::vector<LanguageIdModel>{}), ConfigError);
}

TEST(Langid, ModelFileRoundTrip) {
    const auto& fr = models()[1];
    std::stringstream io;
    write_language_model(io, fr);
    const auto back = read_language_model(io);
    EXPECT_EQ(back.language, "fr");
    EXPECT_NEAR(back.log_likelihood(kFrenchParagraph), fr.log_likelihood(kFrenchParagraph), 1e-6);
}

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "clir/error.hpp"
#include "clir/tm.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace clir;
using clir_test::model_from;
using clir_test::pair_of;

namespace {

using Entries = std::vector<std::pair<std::string, double>>;

Entries entries_of(const TranslationModel& m, const std::string& s) {
    Entries out;
    if (const auto* list = m.find(s))
        for (const auto& e : *list) out.emplace_back(e.target, e.probability);
    return out;
}

void expect_entries(const TranslationModel& m, const std::string& s, const Entries& expected, double tol = 1e-12) {
    const auto got = entries_of(m, s);
    ASSERT_EQ(got.size(), expected.size()) << s;
    for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].first, expected[i].first);
        EXPECT_NEAR(got[i].second, expected[i].second, tol) << got[i].first;
    }
}

TrainConfig iterations(int n, bool null = false) {
    TrainConfig c;
    c.iterations = n;
    c.use_null_token = null;
    return c;
}

}  // namespace

TEST(Train, MatchesBruteForceEm) {
    for (const auto& corpus : clir_test::em_fixtures())
        for (const bool null : {false, true})
            for (const int n : {1, 2, 5, 10}) {
                const auto r = train(corpus, "en", "fr", iterations(n, null));
                EXPECT_LE(clir_test::max_table_difference(r.model, clir_test::brute_force_em(corpus, n, null)), 1e-9);
            }
}

TEST(Train, DisambiguatingPairConverges) {
    const auto corpus = clir_test::em_fixtures().front();
    const auto r20 = train(corpus, "en", "fr", iterations(20));
    EXPECT_LE(clir_test::max_table_difference(r20.model, clir_test::brute_force_em(corpus, 20, false)), 1e-9);
    const auto r50 = train(corpus, "en", "fr", iterations(50));
    EXPECT_GE(r50.model.probability("a", "x"), 1.0 - 1e-6);
    EXPECT_GT(r50.model.probability("b", "y"), r20.model.probability("b", "y"));
}

TEST(Train, SinglePairIsCertainAfterOneIteration) {
    const std::vector<SentencePair> corpus{pair_of("a", "x")};
    EXPECT_EQ(train(corpus, "en", "fr", iterations(1)).model.probability("a", "x"), 1.0);
}

TEST(Train, SymmetricCooccurrenceStaysUniform) {
    const std::vector<SentencePair> corpus{pair_of("s", "x y"), pair_of("s", "y x")};
    for (const int n : {1, 2, 7}) {
        const auto r = train(corpus, "en", "fr", iterations(n));
        EXPECT_DOUBLE_EQ(r.model.probability("s", "x"), 0.5);
        EXPECT_DOUBLE_EQ(r.model.probability("s", "y"), 0.5);
    }
}

TEST(Train, TraceHasOneValuePerIterationPlusStart) {
    const auto corpus = clir_test::em_fixtures()[2];
    const auto r = train(corpus, "en", "fr", iterations(6));
    ASSERT_EQ(r.log_likelihood_trace.size(), 7u);
    EXPECT_EQ(r.iterations_run, 6);
    for (std::size_t i = 1; i < r.log_likelihood_trace.size(); ++i)
        EXPECT_GE(r.log_likelihood_trace[i], r.log_likelihood_trace[i - 1] - 1e-12);
    EXPECT_NEAR(r.log_likelihood_trace.back(), log_likelihood(r.model, corpus).value, 1e-9);
}

TEST(Train, ConvergenceDeltaStopsEarly) {
    TrainConfig c = iterations(500);
    c.convergence_delta = 1e-3;
    const auto r = train(clir_test::em_fixtures()[2], "en", "fr", c);
    EXPECT_LT(r.iterations_run, 500);
    const auto& t = r.log_likelihood_trace;
    EXPECT_LT(t.back() - t[t.size() - 2], 1e-3);
}

TEST(Train, NullTokenAbsorbsUnalignedWords) {
    const std::vector<SentencePair> corpus{pair_of("a", "x"), pair_of("a", "x the"), pair_of("b", "y the"),
                                           pair_of("b", "y")};
    const auto r = train(corpus, "en", "fr", iterations(10, true));
    EXPECT_GT(r.model.probability(kNullToken, "the"), 0.5);
    EXPECT_LT(max_normalization_error(r.model), 1e-12);
}

TEST(Train, ThreadsGiveTheSameModel) {
    const auto corpus = clir_test::em_fixtures()[4];
    TrainConfig c = iterations(5);
    const auto one = train(corpus, "en", "fr", c);
    c.threads = 4;
    const auto four = train(corpus, "en", "fr", c);
    for (const auto& [s, list] : one.model.table)
        for (const auto& e : list) EXPECT_NEAR(four.model.probability(s, e.target), e.probability, 1e-12);
}

TEST(Train, ShortPairsSkipped) {
    std::vector<SentencePair> corpus{pair_of("a b", "x y"), pair_of("c", "z")};
    TrainConfig c = iterations(3);
    c.min_pair_tokens = 2;
    const auto r = train(corpus, "en", "fr", c);
    EXPECT_EQ(r.pairs_used, 1u);
    EXPECT_EQ(r.model.find("c"), nullptr);
}

TEST(Train, LongPairsTruncated) {
    const std::vector<SentencePair> corpus{pair_of("a b c", "x y z")};
    TrainConfig c = iterations(1);
    c.max_pair_tokens = 2;
    const auto r = train(corpus, "en", "fr", c);
    EXPECT_EQ(r.model.find("c"), nullptr);
    EXPECT_EQ(r.model.probability("a", "z"), 0.0);
}

TEST(Train, EmptyCorpusIsDataError) {
    const std::vector<SentencePair> corpus{pair_of("", "x")};
    EXPECT_THROW(train(corpus, "en", "fr"), DataError);
    EXPECT_THROW(train({}, "en", "fr"), DataError);
}

TEST(Train, BadConfigIsConfigError) {
    EXPECT_THROW(train(clir_test::em_fixtures()[0], "en", "fr", iterations(0)), ConfigError);
}

TEST(Train, MarginalsAndCountsRecorded) {
    const auto r = train(clir_test::em_fixtures()[0], "en", "fr", iterations(3));
    EXPECT_NEAR(r.model.source_marginal.at("a"), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.model.source_marginal.at("b"), 1.0 / 3.0, 1e-12);
    double total = 0.0;
    for (const auto& [s, row] : r.expected_counts)
        for (const auto& [t, c] : row) total += c;
    EXPECT_NEAR(total, 3.0, 1e-12);
}

TEST(LogLikelihood, CertainModel) {
    const auto m = model_from({{"a", "x", 1.0}});
    const std::vector<SentencePair> corpus{pair_of("a", "x")};
    EXPECT_EQ(log_likelihood(m, corpus).value, 0.0);
}

TEST(LogLikelihood, UniformTwoWayModel) {
    const auto m = model_from({{"a", "x", 0.5}, {"a", "y", 0.5}, {"b", "x", 0.5}, {"b", "y", 0.5}});
    const std::vector<SentencePair> corpus{pair_of("a b", "x")};
    EXPECT_NEAR(log_likelihood(m, corpus).value, std::log(0.5), 1e-15);
}

TEST(LogLikelihood, UnseenTargetIsFloored) {
    const auto m = model_from({{"a", "x", 1.0}});
    const std::vector<SentencePair> corpus{pair_of("a", "x q")};
    const auto ll = log_likelihood(m, corpus, false, 1e-12);
    EXPECT_EQ(ll.floored_tokens, 1u);
    EXPECT_NEAR(ll.value, std::log(1e-12), 1e-12);
}

TEST(PruneThreshold, DrugUnchanged) {
    expect_entries(prune_threshold(clir_test::drug_model(), 0.1), "drug", {{"drogue", 0.55}, {"médicament", 0.45}});
}

TEST(PruneThreshold, DropsAndRenormalizes) {
    const auto m = model_from({{"s", "x", 0.5}, {"s", "y", 0.35}, {"s", "z", 0.08}, {"s", "w", 0.07}});
    expect_entries(prune_threshold(m, 0.1), "s", {{"x", 0.5 / 0.85}, {"y", 0.35 / 0.85}});
}

TEST(PruneThreshold, CertainEntryKept) {
    expect_entries(prune_threshold(model_from({{"s", "x", 1.0}}), 0.99), "s", {{"x", 1.0}});
}

TEST(PruneThreshold, RejectsThetaOutsideRange) {
    EXPECT_THROW(prune_threshold(clir_test::drug_model(), 1.0), ConfigError);
    EXPECT_THROW(prune_threshold(clir_test::drug_model(), -0.1), ConfigError);
}

TEST(PruneTopN, AllEntriesKept) {
    const auto m = model_from({{"a", "x", 0.9}, {"a", "y", 0.1}, {"b", "z", 1.0}});
    const auto p = prune_topn(m, 3, {});
    EXPECT_EQ(p.entry_count(), 3u);
    expect_entries(p, "a", {{"x", 0.9}, {"y", 0.1}});
    EXPECT_EQ(prune_topn(m, 10, {}).entry_count(), 3u);
}

TEST(PruneTopN, KeepsHighestExpectedCounts) {
    const auto m = model_from({{"a", "x", 0.9}, {"a", "y", 0.1}, {"b", "z", 1.0}});
    const ExpectedCounts counts{{"a", {{"x", 10.0}, {"y", 1.0}}}, {"b", {{"z", 5.0}}}};
    const auto p = prune_topn(m, 2, counts);
    expect_entries(p, "a", {{"x", 1.0}});
    expect_entries(p, "b", {{"z", 1.0}});
}

TEST(PruneTopN, ScorerIsPluggable) {
    const auto m = model_from({{"a", "x", 0.9}, {"a", "y", 0.1}, {"b", "z", 0.2}, {"b", "w", 0.8}});
    const ReliabilityScorer by_probability = [](std::string_view, std::string_view, double p, double) { return p; };
    const auto p = prune_topn(m, 2, {}, by_probability);
    expect_entries(p, "a", {{"x", 1.0}});
    expect_entries(p, "b", {{"w", 1.0}});
}

TEST(PruneNoise, DigitsRemoved) {
    auto m = model_from({{"xç64", "drug", 0.9}, {"xç64", "drogue", 0.1}, {"drug", "drogue", 0.7},
                         {"drug", "x2", 0.3}});
    const auto p = prune_noise(m);
    EXPECT_EQ(p.find("xç64"), nullptr);
    expect_entries(p, "drug", {{"drogue", 1.0}});
    EXPECT_EQ(prune_noise(m, 1e-6, false).entry_count(), 4u);
}

TEST(PruneNoise, CleanModelUnchanged) {
    auto m = clir_test::drug_model();
    m.source_marginal = {{"drug", 0.01}};
    expect_entries(prune_noise(m), "drug", {{"drogue", 0.55}, {"médicament", 0.45}});
}

TEST(PruneNoise, LowMarginalSourceRemoved) {
    auto m = model_from({{"s", "x", 1.0}, {"r", "y", 1.0}});
    m.source_marginal = {{"s", 1e-8}, {"r", 0.5}};
    const auto p = prune_noise(m, 1e-6);
    EXPECT_EQ(p.find("s"), nullptr);
    EXPECT_NE(p.find("r"), nullptr);
}

TEST(ProjectQuery, DrugFragment) {
    const auto q = project_query(make_query(std::vector<std::string>{"drug"}, "en"), clir_test::drug_model());
    EXPECT_EQ(q.language, "fr");
    EXPECT_NEAR(q.distribution.at("drogue"), 0.55, 1e-15);
    EXPECT_NEAR(q.distribution.at("médicament"), 0.45, 1e-15);
}

TEST(ProjectQuery, IdentityModel) {
    const auto q = make_query(std::vector<std::string>{"a", "b", "a", "c"}, "fr");
    const auto p = project_query(q, clir_test::identity_model({"a", "b", "c"}, "fr"));
    for (const auto& [t, v] : q.distribution) EXPECT_NEAR(p.distribution.at(t), v, 1e-15);
}

TEST(ProjectQuery, OovPassThroughAndDrop) {
    const auto q = make_query(std::vector<std::string>{"a", "b"}, "en");
    const auto m = model_from({{"a", "x", 1.0}});
    const auto kept = project_query(q, m, OovPolicy::pass_through);
    EXPECT_NEAR(kept.distribution.at("x"), 0.5, 1e-15);
    EXPECT_NEAR(kept.distribution.at("b"), 0.5, 1e-15);
    const auto dropped = project_query(q, m, OovPolicy::drop);
    EXPECT_EQ(dropped.distribution.size(), 1u);
    EXPECT_NEAR(dropped.distribution.at("x"), 1.0, 1e-15);
}

TEST(ProjectQuery, LanguageMismatch) {
    EXPECT_THROW(project_query(make_query(std::vector<std::string>{"drug"}, "it"), clir_test::drug_model()),
                 ConfigError);
}

TEST(DeriveVariant, DrugRows) {
    const auto m = clir_test::drug_model();
    expect_entries(derive_variant(m, Variant::best_match), "drug", {{"drogue", 1.0}}, 0.0);
    expect_entries(derive_variant(m, Variant::equal), "drug", {{"drogue", 0.5}, {"médicament", 0.5}}, 0.0);
    const auto syn = derive_variant(m, Variant::synonym);
    expect_entries(syn, "drug", {{"drogue", 1.0}, {"médicament", 1.0}}, 0.0);
    EXPECT_FALSE(syn.normalized);
}

TEST(DeriveVariant, BestMatchTieTakesSmallestTarget) {
    const auto m = model_from({{"s", "b", 0.5}, {"s", "a", 0.5}});
    expect_entries(derive_variant(m, Variant::best_match), "s", {{"a", 1.0}}, 0.0);
}

TEST(Transpose, IndexesByTarget) {
    const auto t = transpose(clir_test::drug_model());
    EXPECT_EQ(t.source_language, "fr");
    EXPECT_EQ(t.target_language, "en");
    expect_entries(t, "drogue", {{"drug", 0.55}}, 0.0);
    expect_entries(t, "médicament", {{"drug", 0.45}}, 0.0);
    EXPECT_FALSE(t.normalized);
}

TEST(ModelFile, RoundTrip) {
    auto r = train(clir_test::em_fixtures()[3], "en", "fr", iterations(4));
    std::stringstream io;
    write_model(io, r.model, "# clir train\n");
    const auto back = read_model(io);
    EXPECT_EQ(back.source_language, "en");
    EXPECT_EQ(back.target_language, "fr");
    EXPECT_EQ(back.entry_count(), r.model.entry_count());
    EXPECT_LT(max_normalization_error(back), 1e-12);
    for (const auto& [s, list] : r.model.table)
        for (const auto& e : list) EXPECT_NEAR(back.probability(s, e.target), e.probability, 1e-5);
}

TEST(ModelFile, DuplicateEntryIsDataError) {
    std::istringstream in("#source_lang=en\n#target_lang=fr\na\tx\t0.5\na\tx\t0.5\n");
    EXPECT_THROW(read_model(in), DataError);
}

TEST(ModelFile, EntryCountMismatchIsDataError) {
    std::istringstream in("#source_lang=en\n#target_lang=fr\n#entries=3\na\tx\t1\n");
    EXPECT_THROW(read_model(in), DataError);
}

TEST(ModelFile, MarginalsAndCountsRoundTrip) {
    const auto r = train(clir_test::em_fixtures()[1], "en", "fr", iterations(3));
    std::stringstream mio;
    write_marginals(mio, r.model);
    TranslationModel m;
    read_marginals(mio, m);
    for (const auto& [s, v] : r.model.source_marginal) EXPECT_NEAR(m.source_marginal.at(s), v, 1e-6);
    std::stringstream cio;
    write_expected_counts(cio, r.expected_counts);
    const auto counts = read_expected_counts(cio);
    for (const auto& [s, row] : r.expected_counts)
        for (const auto& [t, c] : row) EXPECT_NEAR(counts.at(s).at(t), c, 1e-9);
}

TEST(TextPairs, TabSeparated) {
    std::istringstream in("#source_lang=en\nthe house\tla maison\n\nbook\tlivre\n");
    const auto pairs = read_text_pairs(in);
    ASSERT_EQ(pairs.size(), 2u);
    EXPECT_EQ(pairs[0].second, "la maison");
    std::istringstream bad("no tab here\n");
    EXPECT_THROW(read_text_pairs(bad), DataError);
}

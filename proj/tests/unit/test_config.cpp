#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "clir/config.hpp"
#include "clir/error.hpp"

namespace {

using namespace clir;

TEST(RunConfig, Defaults) {
    const auto c = RunConfig::defaults();
    EXPECT_EQ(c.get("lang.source"), "en");
    EXPECT_EQ(c.get("lang.target"), "fr");
    EXPECT_DOUBLE_EQ(c.get_double("retrieval.lambda"), 0.7);
    EXPECT_EQ(c.get_size("train.iterations"), 5u);
    EXPECT_FALSE(c.get_bool("train.null_token"));
    EXPECT_FALSE(c.get_optional_double("train.convergence_delta").has_value());
    EXPECT_DOUBLE_EQ(c.align_params().length_variance, 6.8);
}

TEST(RunConfig, ReadsKeyValueLines) {
    auto c = RunConfig::defaults();
    std::istringstream in("# comment\n\n retrieval.lambda = 0.5 \ntrain.convergence_delta=1e-4\n");
    c.read(in, "test");
    EXPECT_DOUBLE_EQ(c.retrieval_params().lambda, 0.5);
    EXPECT_DOUBLE_EQ(*c.train_config().convergence_delta, 1e-4);
}

TEST(RunConfig, UnknownKeyThrows) {
    auto c = RunConfig::defaults();
    std::istringstream in("retrieval.lamda=0.5\n");
    EXPECT_THROW(c.read(in, "test"), ConfigError);
    EXPECT_THROW(c.set("nope", "1"), ConfigError);
}

TEST(RunConfig, MissingEqualsThrows) {
    auto c = RunConfig::defaults();
    std::istringstream in("retrieval.lambda 0.5\n");
    EXPECT_THROW(c.read(in, "test"), ConfigError);
}

TEST(RunConfig, BadValuesThrowConfigError) {
    auto c = RunConfig::defaults();
    c.set("retrieval.lambda", "high");
    EXPECT_THROW(c.get_double("retrieval.lambda"), ConfigError);
    c.set("train.null_token", "maybe");
    EXPECT_THROW(c.get_bool("train.null_token"), ConfigError);
    c.set("retrieval.oov", "guess");
    c.set("retrieval.lambda", "0.7");
    EXPECT_THROW(c.retrieval_params(), ConfigError);
}

TEST(RunConfig, BooleanSpellings) {
    auto c = RunConfig::defaults();
    for (const char* v : {"1", "true", "Yes", "on"}) {
        c.set("train.null_token", v);
        EXPECT_TRUE(c.get_bool("train.null_token")) << v;
    }
    for (const char* v : {"0", "false", "NO", "off"}) {
        c.set("train.null_token", v);
        EXPECT_FALSE(c.get_bool("train.null_token")) << v;
    }
}

TEST(RunConfig, HeaderListsEveryKey) {
    auto c = RunConfig::defaults();
    c.set("prune.theta", "0.25");
    const std::string h = c.header();
    EXPECT_EQ(h.rfind("# clir configuration\n", 0), 0u);
    EXPECT_NE(h.find("# prune.theta=0.25\n"), std::string::npos);
    EXPECT_NE(h.find("# retrieval.lambda=0.7\n"), std::string::npos);
}

TEST(RunConfig, MinerConfigFollowsLanguages) {
    auto c = RunConfig::defaults();
    c.set("lang.target", "it");
    const auto m = c.miner_config();
    EXPECT_EQ(m.source_language, "en");
    EXPECT_EQ(m.target_language, "it");
}

TEST(ParseDirection, SplitsPair) {
    EXPECT_EQ(parse_direction("en-fr"), (std::pair<std::string, std::string>{"en", "fr"}));
    EXPECT_THROW(parse_direction("enfr"), ConfigError);
    EXPECT_THROW(parse_direction("-fr"), ConfigError);
    EXPECT_THROW(parse_direction("en-"), ConfigError);
    EXPECT_THROW(parse_direction("en-fr-it"), ConfigError);
}

TEST(ConfigEnv, ReadsPath) {
    ::setenv(kConfigEnv, "/tmp/clir.conf", 1);
    EXPECT_EQ(config_path_from_env(), std::filesystem::path("/tmp/clir.conf"));
    ::setenv(kConfigEnv, "", 1);
    EXPECT_FALSE(config_path_from_env().has_value());
    ::unsetenv(kConfigEnv);
    EXPECT_FALSE(config_path_from_env().has_value());
}

}  // namespace

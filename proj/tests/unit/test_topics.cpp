#include <gtest/gtest.h>

#include <sstream>

#include "clir/error.hpp"
#include "clir/topics.hpp"

namespace {

using namespace clir;

std::vector<Topic> parse(const std::string& text) {
    std::istringstream in(text);
    return read_topics(in);
}

TEST(Topics, ReadsTaggedFields) {
    const auto t = parse(
        "<top>\n<num> C041\n<title> drug policy\n<desc> Documents on\ndrug policy.\n<narr> Relevant documents "
        "discuss it.\n</top>\n");
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].id, "C041");
    EXPECT_EQ(t[0].title, "drug policy");
    EXPECT_EQ(t[0].description, "Documents on drug policy.");
    EXPECT_EQ(t[0].narrative, "Relevant documents discuss it.");
    EXPECT_EQ(t[0].query_text(), "drug policy Documents on drug policy.");
}

TEST(Topics, StripsTrecLabelsAndLongTags) {
    const auto t = parse(
        "<top>\n<num> Number: 51\n<title> Topic: airbus\n<description> Description:\nsubsidies\n<narrative> "
        "Narrative: any\n</top>\n<top><num>52</num><title>oil</title></top>\n");
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t[0].id, "51");
    EXPECT_EQ(t[0].description, "subsidies");
    EXPECT_EQ(t[0].narrative, "any");
    EXPECT_EQ(t[1].id, "52");
    EXPECT_EQ(t[1].title, "oil");
    EXPECT_EQ(t[1].query_text(), "oil");
}

TEST(Topics, TextBeforeFirstNumThrows) { EXPECT_THROW(parse("stray\n<num> 1\n"), DataError); }

TEST(Topics, DuplicateIdThrows) { EXPECT_THROW(parse("<num> 1\n<title> a\n<num> 1\n<title> b\n"), DataError); }

TEST(Topics, MissingIdThrows) { EXPECT_THROW(parse("<num>\n<title> a\n"), DataError); }

TEST(Topics, CommentLinesIgnored) {
    const auto t = parse("# clir configuration\n<num> 7\n<title> x\n");
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].id, "7");
}

}  // namespace

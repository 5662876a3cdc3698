#include <doctest.h>

#include "emofrnn/error.hpp"
#include "emofrnn/preprocess.hpp"
#include "emofrnn/rng.hpp"

using namespace emofrnn;

namespace {

const CleanOptions kGeneral{PrepLevel::standard};
const CleanOptions kStop{PrepLevel::stopwords};

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("general cleaning examples")
{
    CHECK(clean_tweet("@user I love #sunny days!!! :)", kGeneral) == "I love sunny days happy face");
    CHECK(clean_tweet("Tom & Jerry\n4ever", kGeneral) == "Tom and Jerry ever");
}

TEST_CASE("raw level is the identity")
{
    for (const char* s : {"@user I love #sunny days!!! :)", "", "  x  ", "😡\t123"})
        CHECK(clean_tweet(s, CleanOptions(PrepLevel::raw)) == s);
}

TEST_CASE("emoji become words")
{
    CHECK(clean_tweet("so mad 😡", kGeneral) == "so mad enraged face");
    CHECK(clean_tweet("😡😡", kGeneral) == "enraged face enraged face");
    // Skin tone sequences match as a whole.
    const std::string out = clean_tweet("ok 👍🏽", kGeneral);
    CHECK(out.rfind("ok thumbs up", 0) == 0);
    CHECK(out.find("🏽") == std::string::npos);
}

TEST_CASE("emoticons match whole tokens only")
{
    CHECK(clean_tweet("great :-(", kGeneral) == "great sad face");
    CHECK(clean_tweet("a:)b", kGeneral) == "ab");
}

TEST_CASE("mentions, digits, punctuation, unicode")
{
    CHECK(clean_tweet("@a @b hi", kGeneral) == "hi");
    CHECK(clean_tweet("x@y.com", kGeneral) == "xycom");
    CHECK(clean_tweet("R2-D2 «été» ٣", kGeneral) == "RD été");
    CHECK(clean_tweet("a  b", kGeneral) == "a b");
    CHECK(clean_tweet("$5 ^_^ <3", kGeneral).find_first_of("$^<") == std::string::npos);
}

TEST_CASE("empty and whitespace")
{
    CHECK(clean_tweet("", kGeneral).empty());
    CHECK(clean_tweet(" \t\n ", kGeneral).empty());
    CHECK(clean_tweet("!!!", kGeneral).empty());
}

TEST_CASE("stop words")
{
    CHECK(remove_stopwords("I am so happy", StopList::bundled()) == "happy");
    CHECK(remove_stopwords("", StopList::bundled()).empty());
    CHECK(remove_stopwords("sunny weather today", StopList::bundled()) == "sunny weather today");
    CHECK(clean_tweet("I am SO happy!!", kStop) == "happy");
    CHECK(StopList::bundled().size() == 127);
    CHECK(StopList::bundled().contains("THE"));
}

TEST_CASE("cleaning is idempotent")
{
    const char* samples[] = {
        "@user I love #sunny days!!! :)", "Tom & Jerry\n4ever", "##tag @@x", "a :) :( b",
        "&amp; & &&", "#:) @:)", "😡😂 #😂 @😂", "1:)2", ":) ) :", "x-:)-y", "a # b @ c",
    };
    for (const char* s : samples) {
        for (auto opts : {kGeneral, kStop}) {
            const auto once = clean_tweet(s, opts);
            CHECK_MESSAGE(clean_tweet(once, opts) == once, s);
        }
    }

    // Random strings over an alphabet dense in special characters.
    const std::vector<std::string> atoms{"a", "B", " ", "\t", "@", "#", "&", ":", ")", "(", "-", "D", "1",
                                         "!", "😡", "👍", "🏽", "é", "x", "P", "<", "3", "'", ";"};
    SplitMix64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        std::string s;
        const auto len = rng.uniform(20);
        for (std::uint64_t i = 0; i < len; ++i)
            s += atoms[rng.uniform(atoms.size())];
        const auto once = clean_tweet(s, kGeneral);
        CHECK_MESSAGE(clean_tweet(once, kGeneral) == once, s);
    }
}

TEST_CASE("output never contains deleted characters")
{
    SplitMix64 rng(11);
    const std::string alphabet = "ab #@&!?.,:;()[]{}0123456789$^~+=<>|'\"";
    for (int trial = 0; trial < 500; ++trial) {
        std::string s;
        for (int i = 0; i < 30; ++i)
            s += alphabet[rng.uniform(alphabet.size())];
        const auto out = clean_tweet(s, kGeneral);
        CHECK(out.find_first_of("#@&!?.,:;()[]{}0123456789$^~+=<>|'\"") == std::string::npos);
        CHECK(out.find("  ") == std::string::npos);
    }
}

TEST_CASE("custom tables")
{
    const auto table = EmojiTable::parse("# c\n:-)\tsmile\n", "1F600\tgrin\n");
    CHECK(table.emoticon_count() == 1);
    CHECK(table.emoji_count() == 1);
    CHECK(clean_tweet("hi :-) \U0001F600", kGeneral, table) == "hi smile grin");
    CHECK(clean_tweet("hi :)", kGeneral, table) == "hi");
    CHECK_THROWS_AS(EmojiTable::parse("abc\tword\n", ""), DataError);
    CHECK_THROWS_AS(EmojiTable::parse(":)\tBad Word\n", ""), DataError);
    CHECK_THROWS_AS(EmojiTable::parse("", "ZZZ\tword\n"), DataError);

    const auto stop = StopList::parse("# list\nfoo\n\nBar\n");
    CHECK(stop.size() == 2);
    CHECK(remove_stopwords("foo x bar BAR y", stop) == "x y");
}

TEST_CASE("bundled tables load")
{
    CHECK(EmojiTable::bundled().emoji_count() > 3000);
    CHECK(EmojiTable::bundled().emoticon_count() > 100);
    REQUIRE(EmojiTable::bundled().find_emoticon(":)") != nullptr);
    CHECK(*EmojiTable::bundled().find_emoticon(":)") == "happy face");
}

TEST_CASE("mean pooling")
{
    CHECK(pool_mean({{1, 0}, {0, 1}}) == Vector{0.5, 0.5});
    CHECK(pool_mean({{2, 2, 2}}) == Vector{2, 2, 2});
    CHECK(pool_mean({{1, 1}, {3, 3}, {5, 5}}) == Vector{3, 3});
    CHECK_THROWS_AS(pool_mean({}), DataError);

    const std::unordered_map<std::string, Vector> words{{"good", {1, 0}}, {"day", {0, 1}}};
    CHECK(embed_by_mean("Good day unknown", words) == Vector{0.5, 0.5});
    CHECK_THROWS_AS(embed_by_mean("nothing here", words), DataError);
}

}

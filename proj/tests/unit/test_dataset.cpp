#include <doctest.h>

#include <sstream>

#include "emofrnn/dataset.hpp"
#include "emofrnn/error.hpp"

using namespace emofrnn;

namespace {

std::vector<TextRecord> parse(const std::string& text, bool require_labels = true)
{
    std::istringstream in(text);
    return read_task_tsv(in, require_labels);
}

VectorTable vectors(const std::string& text)
{
    std::istringstream in(text);
    return read_vectors(in);
}

LabeledInstance inst(std::string id, Vector v, Label y) { return {std::move(id), std::move(v), y}; }

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("task rows")
{
    const auto recs = parse("2018-En-00866\tI hate waiting\tanger\t1: low amount of anger can be inferred\n");
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].id == "2018-En-00866");
    CHECK(recs[0].text == "I hate waiting");
    CHECK(recs[0].emotion == Emotion::anger);
    CHECK(recs[0].label == 1);

    CHECK(parse("a\tx\tanger\t0: no anger can be inferred\n")[0].label == 0);
}

TEST_CASE("header row and CRLF")
{
    const auto recs = parse("ID\tTweet\tAffect Dimension\tIntensity Class\r\n"
                            "a\thi\tjoy\t3: high amount of joy can be inferred\r\n"
                            "b\tho\tjoy\t2: moderate amount of joy can be inferred\r\n");
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].emotion == Emotion::joy);
    CHECK(recs[1].label == 2);
}

TEST_CASE("malformed rows")
{
    try {
        parse("a\tb\tanger\t1: x\nc\td\tanger\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("malformed row at line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("a\tb\tanger\t7: x\n"), DataError);
    CHECK_THROWS_AS(parse("a\tb\trage\t1: x\n"), DataError);
    CHECK_THROWS_AS(parse("a\tb\tanger\t1: x\na\tc\tanger\t1: x\n"), DataError);
    CHECK_THROWS_AS(parse("a\tb\tanger\t1: x\nc\td\tanger\tNONE\n"), DataError);
}

TEST_CASE("unlabeled rows allowed on request")
{
    const auto recs = parse("a\tb\tfear\tNONE\n", false);
    REQUIRE(recs.size() == 1);
    CHECK_FALSE(recs[0].label.has_value());
}

TEST_CASE("task file round trip")
{
    const std::string text = "ID\tTweet\tAffect Dimension\tIntensity Class\n"
                             "a\tsome text\tsadness\t2: moderate amount of sadness can be inferred\n";
    std::ostringstream out;
    write_task_tsv(out, parse(text));
    CHECK(out.str() == text);
}

TEST_CASE("vector files")
{
    const auto t = vectors("dim 3\na\t1 0 0\nb\t0 1 0\n");
    CHECK(t.dimension == 3);
    CHECK(t.vectors.size() == 2);
    CHECK(t.vectors.at("b") == Vector{0, 1, 0});
    CHECK(t.order == std::vector<std::string>{"a", "b"});

    try {
        vectors("dim 3\nc\t1 2\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("expected 3 floats") != std::string::npos);
    }
    try {
        vectors("dim 1\na\t1\na\t2\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("duplicate id a") != std::string::npos);
    }
    CHECK_THROWS_AS(vectors(""), DataError);
    CHECK_THROWS_AS(vectors("dim 2\na\t1 x\n"), DataError);
}

TEST_CASE("vector file round trip")
{
    const auto t = vectors("dim 2\nz\t0.125 -3.5\na\t1e-3 2\n");
    std::ostringstream out;
    write_vectors(out, t);
    const auto back = vectors(out.str());
    CHECK(back.order == t.order);
    CHECK(back.vectors == t.vectors);
}

TEST_CASE("join")
{
    const auto recs = parse("a\tx\tanger\t1: x\nb\ty\tanger\t3: x\n");
    const auto ds = join(recs, vectors("dim 2\nb\t0 1\na\t1 0\n"));
    REQUIRE(ds.size() == 2);
    CHECK(ds.instances[0].id == "a");
    CHECK(ds.labels() == std::vector<Label>{1, 3});

    try {
        join(recs, vectors("dim 2\na\t1 0\n"));
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("no vector for id") != std::string::npos);
    }
    try {
        join(recs, vectors("dim 2\na\t1 0\nb\t0 0\n"));
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("zero vector") != std::string::npos);
    }
}

TEST_CASE("merge")
{
    VectorDataset a{1, {inst("a", {1}, 0), inst("b", {2}, 1)}};
    VectorDataset b{1, {inst("c", {1}, 2), inst("d", {2}, 3), inst("e", {3}, 0)}};
    const auto m = merge(a, b);
    CHECK(m.size() == 5);
    CHECK(m.instances[2].id == "c");

    VectorDataset dup{1, {inst("a", {9}, 0)}};
    CHECK_THROWS_AS(merge(a, dup), DataError);

    const auto same = merge(a, VectorDataset{});
    CHECK(same.size() == a.size());
    CHECK(same.instances[1].vector == a.instances[1].vector);
    CHECK(merge(VectorDataset{}, a).size() == 2);
}

TEST_CASE("class statistics")
{
    std::vector<Label> labels;
    for (int c = 0; c < 4; ++c)
        labels.insert(labels.end(), 10, c);
    const auto s = class_stats(labels);
    CHECK(s.total == 40);
    CHECK(s.smallest_class == 10);
    CHECK(s.ir == doctest::Approx(1.0));

    const auto skew = class_stats(std::vector<Label>{0, 0, 0, 0, 1, 2, 2, 3});
    CHECK(skew.smallest_class == 1);
    CHECK(skew.ir == doctest::Approx(4.0));
}

TEST_CASE("select keeps the given order")
{
    VectorDataset a{1, {inst("a", {1}, 0), inst("b", {2}, 1), inst("c", {3}, 2)}};
    const auto s = a.select({2, 0});
    CHECK(s.instances[0].id == "c");
    CHECK(s.instances[1].id == "a");
}

}

#include <doctest.h>

#include <cmath>

#include "emofrnn/error.hpp"
#include "emofrnn/frnn.hpp"
#include "emofrnn/rng.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace emofrnn;

namespace {

VectorDataset basis_dataset()
{
    // One instance per class along the axes of R^4.
    VectorDataset ds{4, {}};
    for (int c = 0; c < 4; ++c) {
        Vector v(4, 0.0);
        v[static_cast<std::size_t>(c)] = 1.0;
        ds.instances.push_back({"i" + std::to_string(c), v, c});
    }
    return ds;
}

}  // namespace

TEST_SUITE("frnn") {

TEST_CASE("fit")
{
    SplitMix64 rng(1);
    auto s = oracle::sphere_clusters(rng, 40, 5, 0.3);
    const auto model = FrnnModel::fit(fixtures::to_dataset(s), {3});
    CHECK(model.class_sizes() == std::array<std::size_t, 4>{10, 10, 10, 10});

    auto missing = fixtures::to_dataset(s);
    std::erase_if(missing.instances, [](const LabeledInstance& i) { return i.label == 3; });
    CHECK_THROWS_AS(FrnnModel::fit(missing, {3}), DataError);
    CHECK_THROWS_AS(FrnnModel::fit(fixtures::to_dataset(s), {0}), std::invalid_argument);

    // Deterministic: two fits answer identically.
    const auto again = FrnnModel::fit(fixtures::to_dataset(s), {3});
    for (const auto& x : s.xs) {
        const auto a = model.approximations(x);
        const auto b = again.approximations(x);
        CHECK(a.lower == b.lower);
        CHECK(a.upper == b.upper);
    }
}

TEST_CASE("twin of a training vector")
{
    const auto model = FrnnModel::fit(basis_dataset(), {1, OwaScheme::strict, OwaScheme::strict});
    const auto s = model.approximations(Vector{0, 0, 1, 0});
    CHECK(s.upper[2] == 1.0);
    CHECK(s.lower[2] == 0.5);
}

TEST_CASE("singleton pools with mean weights")
{
    const auto ds = basis_dataset();
    const auto model = FrnnModel::fit(ds, {1, OwaScheme::mean, OwaScheme::mean});
    const Vector y{0.3, -0.2, 0.9, 0.1};
    const auto s = model.approximations(y);
    for (std::size_t c = 0; c < 4; ++c)
        CHECK(s.upper[c] == doctest::Approx(oracle::similarity(ds.instances[c].vector, y)).epsilon(1e-14));
}

TEST_CASE("antipodal others")
{
    VectorDataset ds{2, {}};
    ds.instances.push_back({"a", {1, 0}, 1});
    ds.instances.push_back({"b", {-1, 0}, 0});
    ds.instances.push_back({"c", {-1, 0}, 2});
    ds.instances.push_back({"d", {-1, 0}, 3});
    const auto model = FrnnModel::fit(ds, {1, OwaScheme::strict, OwaScheme::strict});
    CHECK(model.predict(Vector{1, 0}) == 1);
}

TEST_CASE("ties go to the lowest label")
{
    CHECK(argmax_lowest({0.5, 0.5, 0.5, 0.5}) == 0);
    CHECK(argmax_lowest({0.1, 0.7, 0.7, 0.2}) == 1);
    // A query equidistant from every class.
    const auto model = FrnnModel::fit(basis_dataset(), {1});
    CHECK(model.predict(Vector{1, 1, 1, 1}) == 0);
}

TEST_CASE("range, scale invariance and confidence")
{
    SplitMix64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        auto d = oracle::random_dataset(rng, 30, 4);
        const auto model = FrnnModel::fit(fixtures::to_dataset(d), {1 + rng.uniform(6)});
        Vector y(4);
        for (auto& x : y)
            x = rng.normal();
        const auto s = model.approximations(y);
        double total = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
            CHECK(s.lower[c] >= 0.0);
            CHECK(s.lower[c] <= 1.0);
            CHECK(s.upper[c] >= 0.0);
            CHECK(s.upper[c] <= 1.0);
            total += s.confidence[c];
        }
        CHECK(std::abs(total - 1.0) < 1e-9);
        Vector scaled = y;
        for (auto& x : scaled)
            x *= 17.5;
        CHECK(model.predict(scaled) == model.predict(y));
    }
}

TEST_CASE("confidence normalisation")
{
    const auto u = normalize_confidence({0.5, 0.5, 0.5, 0.5});
    for (double c : u)
        CHECK(c == 0.25);
    const auto n = normalize_confidence({0.6, 0.2, 0.1, 0.1});
    CHECK(n[0] == doctest::Approx(0.6));
    CHECK(n[3] == doctest::Approx(0.1));
    CHECK_THROWS_AS(normalize_confidence({0, 0, 0, 0}), std::domain_error);
}

TEST_CASE("matches the brute-force evaluation")
{
    SplitMix64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const auto d = oracle::random_dataset(rng, 8 + rng.uniform(30), 1 + rng.uniform(5));
        const auto ds = fixtures::to_dataset(d);
        for (OwaScheme lo : kAllOwaSchemes)
            for (OwaScheme up : kAllOwaSchemes)
                for (std::size_t k : {1u, 3u, 5u}) {
                    const auto model = FrnnModel::fit(ds, {k, lo, up});
                    Vector y(ds.dimension);
                    for (auto& x : y)
                        x = rng.normal();
                    const auto ref = oracle::frnn(d.xs, d.ys, y, k, lo, up);
                    const auto got = model.approximations(y);
                    for (std::size_t c = 0; c < 4; ++c) {
                        CHECK(std::abs(got.lower[c] - ref.lower[c]) < 1e-10);
                        CHECK(std::abs(got.upper[c] - ref.upper[c]) < 1e-10);
                    }
                    CHECK(model.predict(y) == ref.label);
                }
    }
}

TEST_CASE("batch equals single queries")
{
    SplitMix64 rng(4);
    const auto d = oracle::random_dataset(rng, 50, 6);
    const auto model = FrnnModel::fit(fixtures::to_dataset(d), {5});
    const auto batch = model.approximations(d.xs);
    for (std::size_t i = 0; i < d.xs.size(); ++i) {
        const auto one = model.approximations(d.xs[i]);
        CHECK(batch[i].lower == one.lower);
        CHECK(batch[i].upper == one.upper);
    }
}

TEST_CASE("shared neighbour lists give the same scores at smaller k")
{
    SplitMix64 rng(8);
    const auto d = oracle::random_dataset(rng, 60, 5);
    const auto ds = fixtures::to_dataset(d);
    const auto deep = FrnnModel::fit(ds, {23});
    for (std::size_t k : {1u, 4u, 9u}) {
        const FrnnConfig cfg{k, OwaScheme::exp, OwaScheme::add};
        const auto model = FrnnModel::fit(ds, cfg);
        for (int q = 0; q < 10; ++q) {
            const auto& y = d.xs[static_cast<std::size_t>(q)];
            const auto a = scores_from_neighbours(deep.neighbours(y, 23), deep.class_sizes(), cfg);
            const auto b = model.approximations(y);
            CHECK(a.lower == b.lower);
            CHECK(a.upper == b.upper);
        }
    }
}

}

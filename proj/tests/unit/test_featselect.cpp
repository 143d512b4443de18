#include <doctest.h>

#include <algorithm>

#include "chd/error.hpp"
#include "chd/featselect.hpp"
#include "oracles.hpp"
#include "sequence_fixtures.hpp"

using namespace chd;

namespace {

std::vector<double> ramp(std::size_t n, double a = 1.0, double b = 0.0) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a * double(i) + b;
    return v;
}

}  // namespace

TEST_CASE("pearson basics") {
    const auto x = ramp(10, 1.0, -4.5);
    std::vector<double> neg(x.size()), flat(x.size(), 0.3);
    std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
    CHECK(pearson(x, x) == doctest::Approx(1.0));
    CHECK(pearson(x, neg) == doctest::Approx(-1.0));
    CHECK(pearson(x, flat) == 0.0);
    CHECK(pearson(flat, flat) == 0.0);
    CHECK_THROWS_AS(pearson(x, ramp(9)), ContractViolation);
    CHECK_THROWS_AS(pearson(ramp(1), ramp(1)), ContractViolation);
}

TEST_CASE("pearson matches the oracle on random data") {
    testing::Normal n(2);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(30), y(30);
        for (std::size_t i = 0; i < 30; ++i) {
            x[i] = n();
            y[i] = 0.5 * x[i] + n();
        }
        const double r = pearson(x, y);
        CHECK(r == doctest::Approx(oracle::pearson(x, y)).epsilon(1e-12));
        CHECK(r <= 1.0);
        CHECK(r >= -1.0);
    }
}

TEST_CASE("single sequence is selected alone") {
    const std::vector<std::vector<double>> v{ramp(8)};
    const std::vector<FeatureId> f{FeatureId::Nouns};
    const auto sel = select_sequences(v, f);
    CHECK(sel.selected == std::vector<std::size_t>{0});
    CHECK(sel.steps.empty());
}

TEST_CASE("identical sequences: strict improvement keeps only the first") {
    const auto r = ramp(12);
    const std::vector<std::vector<double>> v{r, r, r};
    const std::vector<FeatureId> f{FeatureId::WordUnigrams, FeatureId::WordBigrams, FeatureId::PosUnigrams};
    const auto sel = select_sequences(v, f);
    CHECK(sel.selected == std::vector<std::size_t>{0});
    REQUIRE(sel.steps.size() == 1);
    CHECK_FALSE(sel.steps[0].accepted);
}

TEST_CASE("ties are broken by feature order, not storage order") {
    const auto r = ramp(12);
    const std::vector<std::vector<double>> v{r, r, r};
    const std::vector<FeatureId> f{FeatureId::Nouns, FeatureId::WordBigrams, FeatureId::AdjAdv};
    const auto sel = select_sequences(v, f);
    CHECK(sel.selected == std::vector<std::size_t>{1});
}

TEST_CASE("noisy sequence is excluded from the fixed step suite") {
    const auto suite = testing::fixed_step_suite();
    const auto sel = select_sequences(suite.values, suite.features);
    CHECK(sel.order == std::vector<std::size_t>{0, 3, 1, 2});
    CHECK(sel.selected == std::vector<std::size_t>{0, 3});
    REQUIRE(sel.steps.size() == 2);
    CHECK(sel.steps[0].accepted);
    CHECK_FALSE(sel.steps[1].accepted);
    CHECK(sel.steps[1].before - sel.steps[1].with > 1e-3);
    const auto replay = oracle::greedy_replay(suite.values);
    CHECK(replay.selected == sel.selected);
}

TEST_CASE("selection trace matches the oracle replay") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto suite = testing::step_plus_noise(seed);
        const auto sel = select_sequences(suite.values, suite.features);
        const auto replay = oracle::greedy_replay(suite.values);
        CHECK(sel.order == replay.order);
        CHECK(sel.selected == replay.selected);
        REQUIRE(sel.steps.size() == replay.tests.size());
        for (std::size_t i = 0; i < sel.steps.size(); ++i) {
            CHECK(sel.steps[i].before == doctest::Approx(replay.tests[i].first).epsilon(1e-12));
            CHECK(sel.steps[i].with == doctest::Approx(replay.tests[i].second).epsilon(1e-12));
        }
    }
}

TEST_CASE("selection is invariant to storage order") {
    const auto suite = testing::step_plus_noise(5);
    const auto base = select_sequences(suite.values, suite.features);
    std::vector<FeatureId> chosen;
    for (auto i : base.selected) chosen.push_back(suite.features[i]);

    std::vector<std::size_t> perm{3, 1, 0, 2};
    std::vector<std::vector<double>> v;
    std::vector<FeatureId> f;
    for (auto i : perm) {
        v.push_back(suite.values[i]);
        f.push_back(suite.features[i]);
    }
    const auto shuffled = select_sequences(v, f);
    std::vector<FeatureId> chosen2;
    for (auto i : shuffled.selected) chosen2.push_back(f[i]);
    CHECK(chosen == chosen2);
}

TEST_CASE("accepted prefixes strictly increase the correlation") {
    for (std::uint64_t seed = 30; seed < 60; ++seed) {
        testing::Normal n(seed);
        std::vector<std::vector<double>> v(6, std::vector<double>(15));
        for (auto& s : v)
            for (auto& x : s) x = n();
        const std::vector<FeatureId> f(kAllFeatures.begin(), kAllFeatures.begin() + 6);
        const auto sel = select_sequences(v, f);
        REQUIRE_FALSE(sel.selected.empty());
        const auto target = oracle::avg(v, {0, 1, 2, 3, 4, 5});
        for (std::size_t t = 0; t < target.size(); ++t) CHECK(sel.target[t] == doctest::Approx(target[t]));
        double last = -2.0;
        for (std::size_t m = 1; m <= sel.selected.size(); ++m) {
            const std::vector<std::size_t> prefix(sel.selected.begin(), sel.selected.begin() + m);
            const double c = oracle::pearson(oracle::avg(v, prefix), sel.target);
            CHECK(c > last);
            last = c;
        }
        CHECK(sel.selected.front() == sel.order.front());
    }
}

TEST_CASE("selection rejects mismatched inputs") {
    const std::vector<std::vector<double>> v{ramp(5), ramp(6)};
    const std::vector<FeatureId> f{FeatureId::Nouns, FeatureId::AdjAdv};
    CHECK_THROWS_AS(select_sequences(v, f), ContractViolation);
    CHECK_THROWS_AS(select_sequences(std::span<const std::vector<double>>{}, std::span<const FeatureId>{}),
                    ContractViolation);
}

#include <doctest.h>

#include <algorithm>

#include "chd/error.hpp"
#include "chd/evaluation.hpp"
#include "style_generator.hpp"

using namespace chd;

namespace {

DetectionResult predicted(const std::string& id, std::optional<std::size_t> at, std::size_t n = 60) {
    DetectionResult r;
    r.account_id = id;
    r.reviews = n;
    r.outcome = at ? Outcome::ChangedAt : Outcome::None;
    r.change_index = at;
    return r;
}

Manifest gold_of(std::initializer_list<std::pair<const char*, std::optional<int>>> entries) {
    Manifest m;
    for (auto [id, ci] : entries) m[id] = Label{ci.has_value(), ci};
    return m;
}

// Authors who differ only in their nouns: every other feature is noise.
testing::Style nouns_only(const testing::Style& base, std::vector<std::string> nouns) {
    auto s = base;
    s.nouns = std::move(nouns);
    return s;
}

std::vector<Account> subtle_dev(std::size_t per_class, std::uint64_t seed) {
    const auto a = nouns_only(testing::style_g1(), {"battery", "screen", "camera", "processor", "keyboard", "speaker"});
    const auto b = nouns_only(testing::style_g1(), {"hotel", "lobby", "pool", "breakfast", "elevator", "balcony"});
    Rng rng(seed);
    std::vector<Account> out;
    for (std::size_t i = 0; i < per_class; ++i) {
        out.push_back(testing::changed_hands("c" + std::to_string(i), rng.next(), a, testing::between(rng, 10, 14), b,
                                             testing::between(rng, 10, 14)));
        out.push_back(testing::single_author("n" + std::to_string(i), rng.next(), i % 2 ? a : b, 22));
    }
    return out;
}

double oracle_f1(std::span<const Account> dev, const DetectorConfig& base, std::vector<FeatureId> features) {
    DetectorConfig c = base;
    c.method = Method::ChadPfs;
    c.features = std::move(features);
    std::vector<DetectionResult> results;
    for (const auto& a : dev) results.push_back(detect_account(a, c));
    return score(results, manifest_of(dev), Scheme::Cp, 5).f1;
}

}  // namespace

TEST_CASE("eval_cp window cases") {
    const auto gold = gold_of({{"a", 41}, {"b", 41}, {"c", 41}, {"d", std::nullopt}, {"e", std::nullopt}});
    const std::vector<DetectionResult> res{predicted("a", 44), predicted("b", 50), predicted("c", std::nullopt),
                                           predicted("d", 12), predicted("e", std::nullopt)};
    const auto r = score(res, gold, Scheme::Cp, 5);
    CHECK(r.confusion == Confusion{1, 2, 2, 1});
    CHECK(r.per_account[0].verdict == "TP");
    CHECK(r.per_account[1].verdict == "FP+FN");
    CHECK(r.per_account[2].verdict == "FN");
    CHECK(r.per_account[3].verdict == "FP");
    CHECK(r.per_account[4].verdict == "TN");
    CHECK(r.precision == doctest::Approx(1.0 / 3.0));
    CHECK(r.recall == doctest::Approx(1.0 / 3.0));
    CHECK(r.accuracy == doctest::Approx(2.0 / 5.0));

    const auto cha = score(res, gold, Scheme::Cha);
    CHECK(cha.confusion == Confusion{2, 1, 1, 1});
    CHECK(cha.confusion.total() == res.size());
}

TEST_CASE("all-none predictions on a balanced set") {
    Manifest gold;
    std::vector<DetectionResult> res;
    for (int i = 0; i < 10; ++i) {
        gold["ch" + std::to_string(i)] = Label{true, 20};
        gold["nch" + std::to_string(i)] = Label{false, std::nullopt};
        res.push_back(predicted("ch" + std::to_string(i), std::nullopt));
        res.push_back(predicted("nch" + std::to_string(i), std::nullopt));
    }
    const auto r = score(res, gold, Scheme::Cha);
    CHECK(r.accuracy == 0.5);
    CHECK(r.recall == 0.0);
    CHECK(r.precision == 0.0);
    CHECK(r.f1 == 0.0);
}

TEST_CASE("undetectable accounts count as none unless skipped") {
    const auto gold = gold_of({{"a", 10}, {"b", std::nullopt}});
    auto u = predicted("a", std::nullopt, 12);
    u.outcome = Outcome::Undetectable;
    const std::vector<DetectionResult> res{u, predicted("b", std::nullopt)};
    CHECK(score(res, gold, Scheme::Cha).confusion == Confusion{0, 0, 1, 1});
    ScoreOptions skip;
    skip.skip_undetectable = true;
    CHECK(score(res, gold, Scheme::Cha, 0, skip).confusion == Confusion{0, 0, 0, 1});
}

TEST_CASE("missing gold labels are an error") {
    const std::vector<DetectionResult> res{predicted("zzz", 4)};
    CHECK_THROWS_AS(score(res, Manifest{}, Scheme::Cha), ParseError);
}

TEST_CASE("eval_cp properties over random predictions") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        Manifest gold;
        std::vector<DetectionResult> res;
        for (int i = 0; i < 40; ++i) {
            const std::string id = "a" + std::to_string(i);
            const bool ch = rng.below(2);
            const int ci = 5 + static_cast<int>(rng.below(40));
            gold[id] = ch ? Label{true, ci} : Label{false, std::nullopt};
            const bool says = rng.below(3) != 0;
            res.push_back(predicted(id, says ? std::optional<std::size_t>(2 + rng.below(55)) : std::nullopt));
        }
        const auto cha = score(res, gold, Scheme::Cha);
        double last_f1 = -1.0;
        for (std::size_t y = 0; y <= 60; ++y) {
            const auto cp = score(res, gold, Scheme::Cp, y);
            CHECK(cp.f1 >= last_f1);
            last_f1 = cp.f1;
            std::size_t outside = 0;
            for (const auto& v : cp.per_account) outside += v.verdict == "FP+FN";
            CHECK(cp.confusion.total() == res.size() + outside);
        }
        const auto wide = score(res, gold, Scheme::Cp, 1000);
        CHECK(wide.confusion == cha.confusion);
        CHECK(wide.f1 == cha.f1);
    }
}

TEST_CASE("preselect: each elimination matches an exhaustive recomputation") {
    const auto dev = subtle_dev(6, 3);
    DetectorConfig base;
    base.permutations = 100;
    const auto result = preselect(dev, base);
    REQUIRE_FALSE(result.trace.empty());
    CHECK(result.trace.front().features.size() == kAllFeatures.size());
    CHECK_FALSE(result.features.empty());
    CHECK(result.features == result.trace.back().features);

    for (std::size_t step = 0; step < result.trace.size(); ++step) {
        const auto& current = result.trace[step].features;
        const double f1 = oracle_f1(dev, base, current);
        CHECK(result.trace[step].f1 == doctest::Approx(f1));
        if (current.size() == 1) break;
        // Best single removal, first in feature order on ties.
        double best = -1.0;
        std::optional<FeatureId> best_f;
        for (auto f : current) {
            auto without = current;
            without.erase(std::find(without.begin(), without.end(), f));
            const double g = oracle_f1(dev, base, without);
            if (g > best) {
                best = g;
                best_f = f;
            }
        }
        if (step + 1 < result.trace.size()) {
            CHECK(result.trace[step + 1].removed == best_f);
            CHECK(result.trace[step + 1].f1 > f1);
        } else {
            CHECK(best <= f1);
        }
    }
}

TEST_CASE("preselect returns a duplicate-free subset in feature order") {
    const auto dev = subtle_dev(3, 9);
    DetectorConfig base;
    base.permutations = 50;
    const auto result = preselect(dev, base);
    REQUIRE_FALSE(result.features.empty());
    CHECK(std::is_sorted(result.features.begin(), result.features.end()));
    CHECK(std::adjacent_find(result.features.begin(), result.features.end()) == result.features.end());
    for (std::size_t i = 1; i < result.trace.size(); ++i) CHECK(result.trace[i].f1 > result.trace[i - 1].f1);
    CHECK_THROWS_AS(preselect(std::span<const Account>{}, base), ContractViolation);
}

TEST_CASE("protocol: one run equals its mean, and seeds reproduce") {
    const auto data = testing::style_dataset(12, 5);
    DetectorConfig config;
    set_method(config, "CHAD-F");
    config.permutations = 50;
    ProtocolOptions o;
    o.runs = 1;
    o.dev_per_class = 4;
    const auto p = run_protocol(data, config, o);
    REQUIRE(p.runs.size() == 1);
    CHECK(p.cha.f1 == p.runs[0].cha.f1);
    CHECK(p.cha.accuracy == p.runs[0].cha.accuracy);
    REQUIRE(p.cp.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(p.cp[i].y == o.ys[i]);
        CHECK(p.cp[i].f1 == p.runs[0].cp[i].f1);
        if (i) CHECK(p.cp[i].f1 >= p.cp[i - 1].f1);
    }
    const auto q = run_protocol(data, config, o);
    CHECK(q.cha.f1 == p.cha.f1);
    CHECK(q.runs[0].split_seed == p.runs[0].split_seed);
    CHECK(p.runs[0].cha.per_account.size() == 16);
}
